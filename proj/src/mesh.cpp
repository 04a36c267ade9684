#include "bioconv/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <string>

namespace bioconv {

namespace {

double signed_area(const Vec2& a, const Vec2& b, const Vec2& c) {
  return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y()));
}

std::pair<int, int> sorted_pair(int a, int b) { return a < b ? std::pair{a, b} : std::pair{b, a}; }

}  // namespace

Triangulation::Triangulation(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> cells,
                             const BoundaryTags& tags)
    : vertices_(std::move(vertices)), cells_(std::move(cells)) {
  const int nv = n_vertices();
  for (auto& c : cells_) {
    for (int v : c) {
      if (v < 0 || v >= nv) throw ParameterError("cell references vertex " + std::to_string(v));
    }
    const double a = signed_area(vertices_[c[0]], vertices_[c[1]], vertices_[c[2]]);
    if (a == 0.0) throw ParameterError("degenerate cell");
    if (a < 0.0) std::swap(c[1], c[2]);
  }

  // (sorted vertex pair, cell, local edge) for every cell edge
  struct EdgeRef {
    std::pair<int, int> key;
    int cell;
    int local;
  };
  std::vector<EdgeRef> refs;
  refs.reserve(3 * cells_.size());
  for (int c = 0; c < n_cells(); ++c) {
    for (int i = 0; i < 3; ++i) {
      const auto& cv = cells_[c];
      refs.push_back({sorted_pair(cv[(i + 1) % 3], cv[(i + 2) % 3]), c, i});
    }
  }
  std::sort(refs.begin(), refs.end(), [](const EdgeRef& a, const EdgeRef& b) {
    return a.key != b.key ? a.key < b.key : a.cell < b.cell;
  });

  cell_facets_.assign(cells_.size(), {-1, -1, -1});
  for (std::size_t k = 0; k < refs.size();) {
    Facet f;
    f.vertices = {refs[k].key.first, refs[k].key.second};
    std::size_t j = k;
    while (j < refs.size() && refs[j].key == refs[k].key) {
      if (f.n_cells == 2) throw ParameterError("non-manifold edge: more than two adjacent cells");
      f.cells[f.n_cells++] = refs[j].cell;
      cell_facets_[refs[j].cell][refs[j].local] = static_cast<int>(facets_.size());
      ++j;
    }
    if (f.is_boundary()) {
      auto it = tags.find(refs[k].key);
      f.marker = it == tags.end() ? 1 : it->second;
    }
    facets_.push_back(f);
    k = j;
  }

  facet_lengths_.resize(facets_.size());
  for (int f = 0; f < n_facets(); ++f) {
    facet_lengths_[f] = (vertices_[facets_[f].vertices[1]] - vertices_[facets_[f].vertices[0]]).norm();
  }
  cell_diameters_.resize(cells_.size());
  for (int c = 0; c < n_cells(); ++c) {
    const auto& cf = cell_facets_[c];
    cell_diameters_[c] =
        std::max({facet_lengths_[cf[0]], facet_lengths_[cf[1]], facet_lengths_[cf[2]]});
  }
}

double Triangulation::cell_area(int c) const {
  const auto& v = cells_[c];
  return signed_area(vertices_[v[0]], vertices_[v[1]], vertices_[v[2]]);
}

Vec2 Triangulation::cell_barycenter(int c) const {
  const auto& v = cells_[c];
  return (vertices_[v[0]] + vertices_[v[1]] + vertices_[v[2]]) / 3.0;
}

double Triangulation::max_diameter() const {
  double h = 0.0;
  for (double d : cell_diameters_) h = std::max(h, d);
  return h;
}

double Triangulation::min_angle() const {
  double amin = std::numbers::pi;
  for (const auto& c : cells_) {
    for (int i = 0; i < 3; ++i) {
      const Vec2 a = vertices_[c[(i + 1) % 3]] - vertices_[c[i]];
      const Vec2 b = vertices_[c[(i + 2) % 3]] - vertices_[c[i]];
      const double cosang = std::clamp(a.dot(b) / (a.norm() * b.norm()), -1.0, 1.0);
      amin = std::min(amin, std::acos(cosang));
    }
  }
  return amin;
}

double Triangulation::domain_area() const {
  double a = 0.0;
  for (int c = 0; c < n_cells(); ++c) a += cell_area(c);
  return a;
}

FacetGeometry Triangulation::facet_geometry(int f) const {
  const Facet& fc = facets_[f];
  const Vec2& a = vertices_[fc.vertices[0]];
  const Vec2& b = vertices_[fc.vertices[1]];
  FacetGeometry g;
  g.length = facet_lengths_[f];
  g.midpoint = 0.5 * (a + b);
  const Vec2 e = (b - a) / g.length;
  g.normal = Vec2(e.y(), -e.x());
  // orient away from the owning cell
  const auto& cv = cells_[fc.cells[0]];
  Vec2 opposite = a;
  for (int v : cv) {
    if (v != fc.vertices[0] && v != fc.vertices[1]) opposite = vertices_[v];
  }
  if (g.normal.dot(opposite - a) > 0.0) g.normal = -g.normal;
  g.tangent = Vec2(-g.normal.y(), g.normal.x());
  return g;
}

BoundaryTags Triangulation::boundary_tags() const {
  BoundaryTags tags;
  for (const auto& f : facets_) {
    if (f.is_boundary()) tags[{f.vertices[0], f.vertices[1]}] = f.marker;
  }
  return tags;
}

Triangulation build_rectangle(double x0, double y0, double x1, double y1, int nx, int ny) {
  if (!(x1 > x0) || !(y1 > y0)) throw ParameterError("build_rectangle: empty extents");
  if (nx < 1 || ny < 1) throw ParameterError("build_rectangle: nx and ny must be positive");
  std::vector<Vec2> verts;
  verts.reserve(static_cast<std::size_t>(nx + 1) * (ny + 1));
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      verts.emplace_back(x0 + (x1 - x0) * i / nx, y0 + (y1 - y0) * j / ny);
    }
  }
  auto id = [nx](int i, int j) { return j * (nx + 1) + i; };
  std::vector<std::array<int, 3>> cells;
  cells.reserve(2 * static_cast<std::size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      cells.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      cells.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  return Triangulation(std::move(verts), std::move(cells));
}

Triangulation build_lshape(int n) {
  if (n < 1) throw ParameterError("build_lshape: n must be positive");
  const Triangulation square = build_rectangle(-1.0, -1.0, 1.0, 1.0, 2 * n, 2 * n);
  std::vector<int> remap(square.n_vertices(), -1);
  std::vector<std::array<int, 3>> cells;
  for (int c = 0; c < square.n_cells(); ++c) {
    const Vec2 g = square.cell_barycenter(c);
    if (g.x() > 0.0 && g.y() < 0.0) continue;
    cells.push_back(square.cell(c));
    for (int v : square.cell(c)) remap[v] = 0;
  }
  std::vector<Vec2> verts;
  for (int v = 0; v < square.n_vertices(); ++v) {
    if (remap[v] == 0) {
      remap[v] = static_cast<int>(verts.size());
      verts.push_back(square.vertex(v));
    }
  }
  for (auto& c : cells) {
    for (int& v : c) v = remap[v];
  }
  return Triangulation(std::move(verts), std::move(cells));
}

MeshHierarchy barycentric_refine(const Triangulation& mesh) {
  std::vector<Vec2> verts = mesh.vertices();
  const int nv = mesh.n_vertices();
  std::vector<std::array<int, 3>> cells;
  cells.reserve(3 * static_cast<std::size_t>(mesh.n_cells()));
  MeshHierarchy h;
  h.child_of.reserve(3 * static_cast<std::size_t>(mesh.n_cells()));
  for (int c = 0; c < mesh.n_cells(); ++c) {
    verts.push_back(mesh.cell_barycenter(c));
    const auto& v = mesh.cell(c);
    const int g = nv + c;
    cells.push_back({v[0], v[1], g});
    cells.push_back({v[1], v[2], g});
    cells.push_back({v[2], v[0], g});
    h.child_of.insert(h.child_of.end(), {c, c, c});
  }
  h.macro = mesh;
  h.bary = Triangulation(std::move(verts), std::move(cells), mesh.boundary_tags());
  return h;
}

namespace {

// Local index of the longest edge; near-ties go to the lower facet index so
// the choice is reproducible.
int longest_local_edge(const Triangulation& mesh, int c) {
  const auto& cf = mesh.cell_facets(c);
  int best = 0;
  for (int i = 1; i < 3; ++i) {
    const double li = mesh.facet_length(cf[i]);
    const double lb = mesh.facet_length(cf[best]);
    const double tol = 1e-12 * std::max(li, lb);
    if (li > lb + tol || (std::abs(li - lb) <= tol && cf[i] < cf[best])) best = i;
  }
  return best;
}

}  // namespace

Triangulation refine_marked(const Triangulation& mesh, std::span<const int> marks,
                            std::vector<int>* parent_of) {
  if (mesh.empty()) throw ParameterError("refine_marked: empty mesh");
  const int nc = mesh.n_cells();
  std::vector<int> longest(nc);
  for (int c = 0; c < nc; ++c) longest[c] = longest_local_edge(mesh, c);

  std::vector<char> edge_marked(mesh.n_facets(), 0);
  std::deque<int> work;
  auto mark_edge = [&](int f) {
    if (edge_marked[f]) return;
    edge_marked[f] = 1;
    const Facet& fc = mesh.facet(f);
    for (int k = 0; k < fc.n_cells; ++k) work.push_back(fc.cells[k]);
  };
  for (int c : marks) {
    if (c < 0 || c >= nc) throw ParameterError("refine_marked: cell index out of range");
    mark_edge(mesh.cell_facets(c)[longest[c]]);
  }
  // closure: a cell with any split edge must also split its longest edge
  while (!work.empty()) {
    const int c = work.front();
    work.pop_front();
    mark_edge(mesh.cell_facets(c)[longest[c]]);
  }

  std::vector<Vec2> verts = mesh.vertices();
  std::vector<int> midpoint(mesh.n_facets(), -1);
  for (int f = 0; f < mesh.n_facets(); ++f) {
    if (!edge_marked[f]) continue;
    const Facet& fc = mesh.facet(f);
    midpoint[f] = static_cast<int>(verts.size());
    verts.push_back(0.5 * (mesh.vertex(fc.vertices[0]) + mesh.vertex(fc.vertices[1])));
  }

  std::vector<std::array<int, 3>> cells;
  std::vector<int> parents;
  cells.reserve(2 * static_cast<std::size_t>(nc));
  auto emit = [&](int parent, std::array<int, 3> cell) {
    cells.push_back(cell);
    parents.push_back(parent);
  };
  for (int c = 0; c < nc; ++c) {
    const int k = longest[c];
    const auto& cv = mesh.cell(c);
    const auto& cf = mesh.cell_facets(c);
    if (!edge_marked[cf[k]]) {
      emit(c, cv);
      continue;
    }
    // rotate so the longest edge is opposite v0
    const int v0 = cv[k], v1 = cv[(k + 1) % 3], v2 = cv[(k + 2) % 3];
    const int f01 = cf[(k + 2) % 3];  // opposite v2
    const int f20 = cf[(k + 1) % 3];  // opposite v1
    const int m = midpoint[cf[k]];
    if (edge_marked[f01]) {
      emit(c, {m, v0, midpoint[f01]});
      emit(c, {m, midpoint[f01], v1});
    } else {
      emit(c, {v0, v1, m});
    }
    if (edge_marked[f20]) {
      emit(c, {m, v2, midpoint[f20]});
      emit(c, {m, midpoint[f20], v0});
    } else {
      emit(c, {v0, m, v2});
    }
  }

  BoundaryTags tags;
  for (int f = 0; f < mesh.n_facets(); ++f) {
    const Facet& fc = mesh.facet(f);
    if (!fc.is_boundary()) continue;
    const int a = fc.vertices[0], b = fc.vertices[1];
    if (edge_marked[f]) {
      tags[sorted_pair(a, midpoint[f])] = fc.marker;
      tags[sorted_pair(midpoint[f], b)] = fc.marker;
    } else {
      tags[{a, b}] = fc.marker;
    }
  }
  if (parent_of) *parent_of = std::move(parents);
  return Triangulation(std::move(verts), std::move(cells), tags);
}

Triangulation refine_uniform(const Triangulation& mesh, std::vector<int>* parent_of) {
  std::vector<int> all(mesh.n_cells());
  for (int c = 0; c < mesh.n_cells(); ++c) all[c] = c;
  std::vector<int> p1, p2;
  Triangulation once = refine_marked(mesh, all, &p1);
  all.resize(once.n_cells());
  for (int c = 0; c < once.n_cells(); ++c) all[c] = c;
  Triangulation twice = refine_marked(once, all, &p2);
  if (parent_of) {
    parent_of->resize(p2.size());
    for (std::size_t c = 0; c < p2.size(); ++c) (*parent_of)[c] = p1[p2[c]];
  }
  return twice;
}

Eigen::Vector3d barycentric_coordinates(const Triangulation& mesh, int c, const Vec2& x) {
  const auto& v = mesh.cell(c);
  const Vec2& a = mesh.vertex(v[0]);
  Mat2 J;
  J.col(0) = mesh.vertex(v[1]) - a;
  J.col(1) = mesh.vertex(v[2]) - a;
  const Vec2 xi = J.inverse() * (x - a);
  return {1.0 - xi.x() - xi.y(), xi.x(), xi.y()};
}

}  // namespace bioconv
