#pragma once

#include <iosfwd>
#include <string>

#include "bioconv/mesh.hpp"

namespace bioconv {

/// Reads the ASCII MSH 2.2 subset: $MeshFormat, $Nodes and $Elements with
/// 2-node lines (type 1) and 3-node triangles (type 2). Line elements supply
/// boundary tags through their physical tag. Sections other than these and
/// $PhysicalNames are skipped. Throws FormatError on anything else.
Triangulation read_msh(std::istream& in);
Triangulation load_msh(const std::string& path);

/// Writes the same subset; boundary facets become line elements tagged with
/// their marker.
void write_msh(const Triangulation& mesh, std::ostream& out);
void save_msh(const Triangulation& mesh, const std::string& path);

}  // namespace bioconv
