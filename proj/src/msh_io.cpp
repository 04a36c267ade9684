#include "bioconv/msh_io.hpp"

#include <fstream>
#include <iomanip>
#include <istream>
#include <sstream>
#include <unordered_map>

namespace bioconv {

namespace {

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  bool next(std::string& line) {
    while (std::getline(in_, line)) {
      ++number_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.find_first_not_of(" \t") != std::string::npos) return true;
    }
    return false;
  }

  std::string expect(const char* what) {
    std::string line;
    if (!next(line)) throw FormatError(std::string("unexpected end of file, expected ") + what, number_);
    return line;
  }

  int number() const { return number_; }

 private:
  std::istream& in_;
  int number_ = 0;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  const auto e = s.find_last_not_of(" \t");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

long parse_count(const std::string& line, int lineno) {
  std::istringstream ss(line);
  long n = -1;
  if (!(ss >> n) || n < 0) throw FormatError("invalid count '" + trim(line) + "'", lineno);
  return n;
}

}  // namespace

Triangulation read_msh(std::istream& in) {
  LineReader reader(in);
  std::string line;
  bool have_format = false, have_nodes = false, have_elements = false;
  std::unordered_map<long, int> node_index;
  std::vector<Vec2> verts;
  std::vector<std::array<int, 3>> cells;
  BoundaryTags tags;

  while (reader.next(line)) {
    const std::string section = trim(line);
    if (section == "$MeshFormat") {
      const std::string fmt = reader.expect("format line");
      std::istringstream ss(fmt);
      std::string version;
      int file_type = -1, data_size = 0;
      ss >> version >> file_type >> data_size;
      if (version != "2.2" && version != "2.2.0") {
        throw FormatError("unsupported MSH version '" + version + "' (only 2.2 is read)", reader.number());
      }
      if (file_type != 0) throw FormatError("binary MSH files are not supported", reader.number());
      if (trim(reader.expect("$EndMeshFormat")) != "$EndMeshFormat") {
        throw FormatError("expected $EndMeshFormat", reader.number());
      }
      have_format = true;
    } else if (section == "$Nodes") {
      if (!have_format) throw FormatError("$Nodes before $MeshFormat", reader.number());
      const long n = parse_count(reader.expect("node count"), reader.number());
      verts.reserve(n);
      for (long k = 0; k < n; ++k) {
        const std::string l = reader.expect("node");
        std::istringstream ss(l);
        long id;
        double x, y, z;
        if (!(ss >> id >> x >> y >> z)) throw FormatError("malformed node line", reader.number());
        if (!node_index.emplace(id, static_cast<int>(verts.size())).second) {
          throw FormatError("duplicate node id " + std::to_string(id), reader.number());
        }
        verts.emplace_back(x, y);
      }
      if (trim(reader.expect("$EndNodes")) != "$EndNodes") throw FormatError("expected $EndNodes", reader.number());
      have_nodes = true;
    } else if (section == "$Elements") {
      if (!have_nodes) throw FormatError("$Elements before $Nodes", reader.number());
      const long n = parse_count(reader.expect("element count"), reader.number());
      for (long k = 0; k < n; ++k) {
        const std::string l = reader.expect("element");
        std::istringstream ss(l);
        long id;
        int type, ntags;
        if (!(ss >> id >> type >> ntags) || ntags < 0) throw FormatError("malformed element line", reader.number());
        std::vector<long> etags(ntags);
        for (auto& t : etags) {
          if (!(ss >> t)) throw FormatError("missing element tag", reader.number());
        }
        int nnodes = 0;
        if (type == 1) {
          nnodes = 2;
        } else if (type == 2) {
          nnodes = 3;
        } else {
          throw FormatError("unsupported element type " + std::to_string(type) +
                                " (only 2-node lines and 3-node triangles)",
                            reader.number());
        }
        std::array<int, 3> nodes{};
        for (int i = 0; i < nnodes; ++i) {
          long nid;
          if (!(ss >> nid)) throw FormatError("missing element node", reader.number());
          auto it = node_index.find(nid);
          if (it == node_index.end()) {
            throw FormatError("element references unknown node " + std::to_string(nid), reader.number());
          }
          nodes[i] = it->second;
        }
        if (type == 2) {
          cells.push_back(nodes);
        } else {
          const int tag = ntags > 0 ? static_cast<int>(etags[0]) : 1;
          const auto key = nodes[0] < nodes[1] ? std::pair{nodes[0], nodes[1]} : std::pair{nodes[1], nodes[0]};
          tags[key] = tag;
        }
      }
      if (trim(reader.expect("$EndElements")) != "$EndElements") {
        throw FormatError("expected $EndElements", reader.number());
      }
      have_elements = true;
    } else if (!section.empty() && section[0] == '$' && section.rfind("$End", 0) != 0) {
      // unknown or ignorable section ($PhysicalNames, ...): skip to its end
      const std::string end = "$End" + section.substr(1);
      std::string l;
      bool closed = false;
      while (reader.next(l)) {
        if (trim(l) == end) {
          closed = true;
          break;
        }
      }
      if (!closed) throw FormatError("unterminated section " + section, reader.number());
    } else {
      throw FormatError("unexpected content '" + section + "'", reader.number());
    }
  }
  if (!have_format) throw FormatError("missing $MeshFormat", reader.number());
  if (!have_nodes) throw FormatError("missing $Nodes section", reader.number());
  if (!have_elements) throw FormatError("missing $Elements section", reader.number());
  if (cells.empty()) throw FormatError("no triangles in file", reader.number());
  return Triangulation(std::move(verts), std::move(cells), tags);
}

Triangulation load_msh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path, 0);
  return read_msh(in);
}

void write_msh(const Triangulation& mesh, std::ostream& out) {
  out << "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n$Nodes\n" << mesh.n_vertices() << "\n";
  out << std::setprecision(17);
  for (int v = 0; v < mesh.n_vertices(); ++v) {
    out << v + 1 << ' ' << mesh.vertex(v).x() << ' ' << mesh.vertex(v).y() << " 0\n";
  }
  out << "$EndNodes\n$Elements\n";
  int nb = 0;
  for (const auto& f : mesh.facets()) nb += f.is_boundary() ? 1 : 0;
  out << nb + mesh.n_cells() << "\n";
  int id = 1;
  for (const auto& f : mesh.facets()) {
    if (!f.is_boundary()) continue;
    out << id++ << " 1 2 " << f.marker << ' ' << f.marker << ' ' << f.vertices[0] + 1 << ' '
        << f.vertices[1] + 1 << "\n";
  }
  for (const auto& c : mesh.cells()) {
    out << id++ << " 2 2 1 1 " << c[0] + 1 << ' ' << c[1] + 1 << ' ' << c[2] + 1 << "\n";
  }
  out << "$EndElements\n";
}

void save_msh(const Triangulation& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path, 0);
  write_msh(mesh, out);
}

}  // namespace bioconv
