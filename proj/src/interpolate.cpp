#include "bioconv/interpolate.hpp"

#include <algorithm>

#include "bioconv/quadrature.hpp"

namespace bioconv {

namespace {

// Component f of a (possibly tensor) value as seen by copy r of the family.
double dg_component(ElementKind kind, const Eigen::VectorXd& v, int r) {
  if (kind != ElementKind::DGTensorTraceFree) return v[r];
  switch (r) {
    case 0:
      return 0.5 * (v[0] - v[3]);
    case 1:
      return v[1];
    default:
      return v[2];
  }
}

void check_size(const Eigen::VectorXd& v, ElementKind kind) {
  if (v.size() != value_size(kind)) throw ParameterError("field returned a value of the wrong size");
}

}  // namespace

void rt_cell_basis(const DofMap& dm, const Triangulation& mesh, int c, const Vec2& xhat,
                   Eigen::MatrixX2d& values, Eigen::VectorXd& divs) {
  const CellGeometry g = cell_geometry(mesh, c);
  Eigen::MatrixX2d ref;
  Eigen::VectorXd rdiv;
  rt_basis(dm.family.degree).eval(xhat, ref, rdiv);
  const auto s = dm.signs(c);
  const int m = dm.scalar_local;
  values.resize(m, 2);
  divs.resize(m);
  for (int i = 0; i < m; ++i) {
    values.row(i) = (s[i] / g.detJ) * (g.J * ref.row(i).transpose()).transpose();
    divs[i] = s[i] * rdiv[i] / g.detJ;
  }
}

Eigen::VectorXd interpolate(const Field& field, const DofMap& dm, const Triangulation& mesh) {
  const ElementKind kind = dm.family.kind;
  const int l = dm.family.degree;
  const int copies = n_copies(kind);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(dm.n_dofs);

  if (!is_rt(kind)) {
    const DGBasis& basis = dg_basis(l);
    const QuadratureRule& qr = quadrature_rule(std::min(10, 2 * l + 4));
    const int n = basis.size();
    for (int c = 0; c < mesh.n_cells(); ++c) {
      const CellGeometry g = cell_geometry(mesh, c);
      const auto dofs = dm.dofs(c);
      for (int q = 0; q < qr.size(); ++q) {
        const Eigen::VectorXd v = field(g.map(qr.points[q]));
        check_size(v, kind);
        const Eigen::VectorXd phi = basis.values(qr.points[q]);
        for (int r = 0; r < copies; ++r) {
          const double fr = dg_component(kind, v, r) * qr.weights[q];
          for (int j = 0; j < n; ++j) out[dofs[r * n + j]] += fr * phi[j];
        }
      }
    }
    return out;
  }

  // RT: value rows are the copies
  const int ne = rt_edge_dofs(l);
  const LineRule& lr = line_rule(2 * l + 6);
  for (int f = 0; f < mesh.n_facets(); ++f) {
    const Facet& F = mesh.facet(f);
    const FacetGeometry geo = mesh.facet_geometry(f);
    const Vec2& a = mesh.vertex(F.vertices[0]);
    const Vec2& b = mesh.vertex(F.vertices[1]);
    for (int q = 0; q < lr.size(); ++q) {
      const double s = lr.points[q];
      const Eigen::VectorXd v = field(a + s * (b - a));
      check_size(v, kind);
      for (int r = 0; r < copies; ++r) {
        const double vn = v[2 * r] * geo.normal[0] + v[2 * r + 1] * geo.normal[1];
        for (int k = 0; k < ne; ++k) {
          out[r * dm.n_scalar + f * ne + k] +=
              lr.weights[q] * geo.length * vn * legendre(k, 2.0 * s - 1.0);
        }
      }
    }
  }
  if (l > 0) {
    const RTBasis& basis = rt_basis(l);
    const auto& mono = basis.interior_monomials();
    const int ni = static_cast<int>(mono.size());
    const QuadratureRule& qr = quadrature_rule(std::min(10, 2 * l + 4));
    const int m = dm.scalar_local;
    for (int c = 0; c < mesh.n_cells(); ++c) {
      const CellGeometry g = cell_geometry(mesh, c);
      const auto dofs = dm.dofs(c);
      for (int q = 0; q < qr.size(); ++q) {
        const Vec2& xh = qr.points[q];
        const Eigen::VectorXd v = field(g.map(xh));
        check_size(v, kind);
        for (int r = 0; r < copies; ++r) {
          const Vec2 pulled = g.detJ * (g.Jinv * Vec2(v[2 * r], v[2 * r + 1]));
          for (int comp = 0; comp < 2; ++comp) {
            for (int j = 0; j < ni; ++j) {
              double mj = 1.0;
              for (int p = 0; p < mono[j][0]; ++p) mj *= xh[0];
              for (int p = 0; p < mono[j][1]; ++p) mj *= xh[1];
              out[dofs[r * m + 3 * ne + comp * ni + j]] += qr.weights[q] * pulled[comp] * mj;
            }
          }
        }
      }
    }
  }
  return out;
}

Eigen::VectorXd evaluate(const Eigen::VectorXd& coeffs, const DofMap& dm, const Triangulation& mesh,
                         int c, const Vec2& xhat) {
  const ElementKind kind = dm.family.kind;
  const auto dofs = dm.dofs(c);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(value_size(kind));
  if (!is_rt(kind)) {
    const Eigen::VectorXd phi = dg_basis(dm.family.degree).values(xhat);
    const int n = dm.scalar_local;
    Eigen::VectorXd comp(n_copies(kind));
    for (int r = 0; r < n_copies(kind); ++r) {
      double s = 0.0;
      for (int j = 0; j < n; ++j) s += coeffs[dofs[r * n + j]] * phi[j];
      comp[r] = s;
    }
    if (kind == ElementKind::DGTensorTraceFree) {
      out << comp[0], comp[1], comp[2], -comp[0];
    } else {
      out = comp;
    }
    return out;
  }
  Eigen::MatrixX2d vals;
  Eigen::VectorXd divs;
  rt_cell_basis(dm, mesh, c, xhat, vals, divs);
  const int m = dm.scalar_local;
  for (int r = 0; r < n_copies(kind); ++r) {
    for (int i = 0; i < m; ++i) {
      const double ci = coeffs[dofs[r * m + i]];
      out[2 * r] += ci * vals(i, 0);
      out[2 * r + 1] += ci * vals(i, 1);
    }
  }
  return out;
}

Eigen::MatrixX2d evaluate_gradient(const Eigen::VectorXd& coeffs, const DofMap& dm,
                                   const Triangulation& mesh, int c, const Vec2& xhat) {
  const ElementKind kind = dm.family.kind;
  if (is_rt(kind)) throw ParameterError("gradient of an RT function is not provided");
  const CellGeometry g = cell_geometry(mesh, c);
  const Eigen::MatrixX2d grads = dg_basis(dm.family.degree).gradients(xhat) * g.Jinv;
  const auto dofs = dm.dofs(c);
  const int n = dm.scalar_local;
  Eigen::MatrixX2d comp = Eigen::MatrixX2d::Zero(n_copies(kind), 2);
  for (int r = 0; r < n_copies(kind); ++r) {
    for (int j = 0; j < n; ++j) comp.row(r) += coeffs[dofs[r * n + j]] * grads.row(j);
  }
  if (kind != ElementKind::DGTensorTraceFree) return comp;
  Eigen::MatrixX2d out(4, 2);
  out.row(0) = comp.row(0);
  out.row(1) = comp.row(1);
  out.row(2) = comp.row(2);
  out.row(3) = -comp.row(0);
  return out;
}

Eigen::VectorXd evaluate_divergence(const Eigen::VectorXd& coeffs, const DofMap& dm,
                                    const Triangulation& mesh, int c, const Vec2& xhat) {
  if (!is_rt(dm.family.kind)) throw ParameterError("divergence requested for a DG space");
  Eigen::MatrixX2d vals;
  Eigen::VectorXd divs;
  rt_cell_basis(dm, mesh, c, xhat, vals, divs);
  const auto dofs = dm.dofs(c);
  const int m = dm.scalar_local;
  const int copies = n_copies(dm.family.kind);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(copies);
  for (int r = 0; r < copies; ++r) {
    for (int i = 0; i < m; ++i) out[r] += coeffs[dofs[r * m + i]] * divs[i];
  }
  return out;
}

}  // namespace bioconv
