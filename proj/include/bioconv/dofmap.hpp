#pragma once

#include <span>
#include <vector>

#include "bioconv/basis.hpp"
#include "bioconv/mesh.hpp"

namespace bioconv {

/**
 * Cell to global degree-of-freedom table.
 *
 * Local dofs of a cell are grouped by copy (component or tensor row), each
 * copy holding the scalar local basis in order. For RT the scalar local
 * order is edge 0, edge 1, edge 2 (l+1 moments each) then interior moments.
 *
 * Global numbering: DG dofs are cell-major. RT dofs of one copy are facet
 * moments f*(l+1)+k followed by interior moments; copy r is shifted by
 * r * n_scalar. Global facet moments use the facet normal of
 * Triangulation::facet_geometry and the parametrisation from the lower to
 * the higher vertex index; `signs` relates them to the local moments.
 */
struct DofMap {
  ElementFamily family;
  int n_dofs = 0;
  int n_scalar = 0;    // dofs of one copy
  int scalar_local = 0;  // local dofs of one copy
  int local_size = 0;    // local dofs of all copies
  std::vector<int> cell_dofs;      // n_cells * local_size
  std::vector<double> cell_signs;  // same layout, +-1 (always +1 for DG)

  std::span<const int> dofs(int c) const {
    return {cell_dofs.data() + static_cast<std::size_t>(c) * local_size,
            static_cast<std::size_t>(local_size)};
  }
  std::span<const double> signs(int c) const {
    return {cell_signs.data() + static_cast<std::size_t>(c) * local_size,
            static_cast<std::size_t>(local_size)};
  }

  /// RT only: global dofs (first copy) of the l+1 normal moments on facet f.
  std::vector<int> facet_dofs(int f) const;
};

DofMap build_dofmap(const ElementFamily& family, const Triangulation& mesh);

}  // namespace bioconv
