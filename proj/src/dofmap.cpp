#include "bioconv/dofmap.hpp"

namespace bioconv {

std::vector<int> DofMap::facet_dofs(int f) const {
  if (!is_rt(family.kind)) throw ParameterError("facet dofs requested for a DG space");
  const int ne = rt_edge_dofs(family.degree);
  std::vector<int> out(ne);
  for (int k = 0; k < ne; ++k) out[k] = f * ne + k;
  return out;
}

DofMap build_dofmap(const ElementFamily& family, const Triangulation& mesh) {
  if (family.degree < 0) throw ParameterError("negative element degree");
  DofMap dm;
  dm.family = family;
  const int copies = n_copies(family.kind);
  const int M = mesh.n_cells();

  if (!is_rt(family.kind)) {
    const int n = dg_dim(family.degree);
    dm.scalar_local = n;
    dm.local_size = copies * n;
    dm.n_dofs = M * dm.local_size;
    dm.n_scalar = dm.n_dofs;
    dm.cell_dofs.resize(dm.n_dofs);
    for (int i = 0; i < dm.n_dofs; ++i) dm.cell_dofs[i] = i;
    dm.cell_signs.assign(dm.n_dofs, 1.0);
    return dm;
  }

  const int l = family.degree;
  const int ne = rt_edge_dofs(l);
  const int ni = rt_interior_dofs(l);
  const int m = rt_dim(l);
  dm.scalar_local = m;
  dm.local_size = copies * m;
  dm.n_scalar = mesh.n_facets() * ne + M * ni;
  dm.n_dofs = copies * dm.n_scalar;
  dm.cell_dofs.resize(static_cast<std::size_t>(M) * dm.local_size);
  dm.cell_signs.resize(dm.cell_dofs.size());

  std::vector<int> scalar(m);
  std::vector<double> sign(m);
  for (int c = 0; c < M; ++c) {
    const auto& cv = mesh.cell(c);
    for (int e = 0; e < 3; ++e) {
      const int f = mesh.cell_facets(c)[e];
      const Facet& F = mesh.facet(f);
      const double sn = F.cells[0] == c ? 1.0 : -1.0;
      const bool reversed = cv[(e + 1) % 3] != F.vertices[0];
      for (int k = 0; k < ne; ++k) {
        scalar[e * ne + k] = f * ne + k;
        sign[e * ne + k] = (reversed && k % 2 == 1) ? -sn : sn;
      }
    }
    for (int j = 0; j < ni; ++j) {
      scalar[3 * ne + j] = mesh.n_facets() * ne + c * ni + j;
      sign[3 * ne + j] = 1.0;
    }
    const std::size_t base = static_cast<std::size_t>(c) * dm.local_size;
    for (int r = 0; r < copies; ++r) {
      for (int i = 0; i < m; ++i) {
        dm.cell_dofs[base + r * m + i] = r * dm.n_scalar + scalar[i];
        dm.cell_signs[base + r * m + i] = sign[i];
      }
    }
  }
  return dm;
}

}  // namespace bioconv
