#include "bioconv/forms.hpp"

#include <algorithm>
#include <string>

namespace bioconv {

namespace {

// Point-value vector z (trial and test alike):
//   t(4) u(2) sigma(4) div sigma(2) phi(1) t~(2) sigma~(2) div sigma~(1) l1 l2
constexpr int ZT = 0, ZU = 4, ZS = 6, ZDS = 10, ZP = 12, ZTT = 13, ZST = 15, ZDST = 17, ZL1 = 18,
              ZL2 = 19, NZ = 20;

// Fills G (NZ x L+2) so that z = G [local; l1; l2] at point q.
void fill_g(const DiscreteSpaces& s, const CellValues& cv, int q, Eigen::MatrixXd& G) {
  const int n = s.n, m = s.m, L = s.local_size;
  G.setZero(NZ, L + 2);
  for (int j = 0; j < n; ++j) {
    const double p = cv.phi(j, q);
    G(ZT + 0, s.lt + j) = p;
    G(ZT + 3, s.lt + j) = -p;
    G(ZT + 1, s.lt + n + j) = p;
    G(ZT + 2, s.lt + 2 * n + j) = p;
    G(ZU + 0, s.lu + j) = p;
    G(ZU + 1, s.lu + n + j) = p;
    G(ZP, s.lp + j) = p;
    G(ZTT + 0, s.ltt + j) = p;
    G(ZTT + 1, s.ltt + n + j) = p;
  }
  const Eigen::MatrixX2d& psi = cv.psi[q];
  for (int i = 0; i < m; ++i) {
    const double d = cv.div(i, q);
    for (int r = 0; r < 2; ++r) {
      G(ZS + 2 * r + 0, s.ls + r * m + i) = psi(i, 0);
      G(ZS + 2 * r + 1, s.ls + r * m + i) = psi(i, 1);
      G(ZDS + r, s.ls + r * m + i) = d;
    }
    G(ZST + 0, s.lst + i) = psi(i, 0);
    G(ZST + 1, s.lst + i) = psi(i, 1);
    G(ZDST, s.lst + i) = d;
  }
  G(ZL1, L) = 1.0;
  G(ZL2, L + 1) = 1.0;
}

Eigen::Vector4d vec(const Mat2& a) { return {a(0, 0), a(0, 1), a(1, 0), a(1, 1)}; }

struct Kernel {
  const DiscreteSpaces& s;
  const ModelData& data;
  Linearization lin;
  bool want_jac;

  // Adds the cell contributions; Rl has size L+2, Jl (L+2)^2.
  void cell(const CellValues& cv, const Eigen::VectorXd& zl, Eigen::VectorXd& Rl, Eigen::MatrixXd& Jl,
            Eigen::MatrixXd& G) const {
    const int L = s.local_size;
    Rl.setZero(L + 2);
    if (want_jac) Jl.setZero(L + 2, L + 2);
    Eigen::Matrix<double, NZ, 1> F;
    Eigen::Matrix<double, NZ, NZ> K;
    for (int q = 0; q < cv.size(); ++q) {
      fill_g(s, cv, q, G);
      const Eigen::Matrix<double, NZ, 1> z = G * zl;
      const Vec2& xq = cv.x[q];
      Mat2 t, sig;
      t << z[ZT], z[ZT + 1], z[ZT + 2], z[ZT + 3];
      sig << z[ZS], z[ZS + 1], z[ZS + 2], z[ZS + 3];
      const Vec2 u(z[ZU], z[ZU + 1]);
      const Vec2 divs(z[ZDS], z[ZDS + 1]);
      const double phi = z[ZP];
      const Vec2 tt(z[ZTT], z[ZTT + 1]);
      const Vec2 st(z[ZST], z[ZST + 1]);
      const double divst = z[ZDST];
      const double l1 = z[ZL1], l2 = z[ZL2];

      const double arg = phi + data.alpha;
      const double mu = data.mu(arg);
      if (!(mu > 0.0)) {
        throw ModelError("viscosity is not positive (mu = " + std::to_string(mu) + ") in cell " +
                         std::to_string(cv.cell()));
      }
      const Mat2 tsym = 0.5 * (t + t.transpose());
      const Vec2 f = data.f ? data.f(xq) : Vec2::Zero();
      const double gt = data.conc_source ? data.conc_source(xq) : 0.0;
      const Vec2& ed = data.e_d;

      F.segment<4>(ZT) = vec(2.0 * mu * tsym - 0.5 * u * u.transpose() - sig);
      F.segment<2>(ZU) = 0.5 * t * u - divs - f + data.g * (1.0 + data.gamma * arg) * ed;
      F.segment<4>(ZS) = vec(t + l1 * Mat2::Identity());
      F.segment<2>(ZDS) = u;
      F[ZP] = 0.5 * tt.dot(u) - divst - gt + l2;
      F.segment<2>(ZTT) = data.kappa * tt - data.U * arg * ed - 0.5 * phi * u - st;
      F.segment<2>(ZST) = tt;
      F[ZDST] = phi;
      F[ZL1] = sig.trace();
      F[ZL2] = phi;

      const double w = cv.JxW[q];
      Rl.noalias() += w * (G.transpose() * F);
      if (!want_jac) continue;

      const bool newton = lin == Linearization::Newton;
      K.setZero();
      // t rows
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
          const int row = ZT + 2 * i + j;
          K(row, ZT + 2 * i + j) += mu;
          K(row, ZT + 2 * j + i) += mu;
          for (int k = 0; k < 2; ++k) {
            // d(u_i u_j)/du_k = delta_ik u_j + u_i delta_jk
            double d = (i == k ? u[j] : 0.0);
            if (newton) d += (j == k ? u[i] : 0.0);
            K(row, ZU + k) -= 0.5 * d;
          }
          K(row, ZS + 2 * i + j) -= 1.0;
          if (newton) K(row, ZP) += 2.0 * data.dmu(arg) * tsym(i, j);
        }
      }
      // u rows
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
          K(ZU + i, ZT + 2 * i + j) += 0.5 * u[j];
          if (newton) K(ZU + i, ZU + j) += 0.5 * t(i, j);
        }
        K(ZU + i, ZDS + i) -= 1.0;
        K(ZU + i, ZP) += data.g * data.gamma * ed[i];
      }
      // sigma rows
      for (int k = 0; k < 4; ++k) K(ZS + k, ZT + k) = 1.0;
      K(ZS + 0, ZL1) = 1.0;
      K(ZS + 3, ZL1) = 1.0;
      K(ZDS + 0, ZU + 0) = 1.0;
      K(ZDS + 1, ZU + 1) = 1.0;
      // phi row
      for (int k = 0; k < 2; ++k) {
        if (newton) K(ZP, ZU + k) = 0.5 * tt[k];
        K(ZP, ZTT + k) = 0.5 * u[k];
      }
      K(ZP, ZDST) = -1.0;
      K(ZP, ZL2) = 1.0;
      // t~ rows
      for (int i = 0; i < 2; ++i) {
        K(ZTT + i, ZTT + i) = data.kappa;
        K(ZTT + i, ZP) = -data.U * ed[i] - 0.5 * u[i];
        if (newton) K(ZTT + i, ZU + i) = -0.5 * phi;
        K(ZTT + i, ZST + i) = -1.0;
        K(ZST + i, ZTT + i) = 1.0;
      }
      K(ZDST, ZP) = 1.0;
      K(ZL1, ZS + 0) = 1.0;
      K(ZL1, ZS + 3) = 1.0;
      K(ZL2, ZP) = 1.0;

      Jl.noalias() += w * (G.transpose() * (K * G));
    }
  }
};

struct EdgeValues {
  std::array<CellValues, 3> cv;
  std::vector<double> s;  // parameter from local vertex (e+1)%3 to (e+2)%3
  std::vector<double> w;
};

EdgeValues make_edge_values(const DiscreteSpaces& sp) {
  const LineRule& lr = line_rule(edge_quadrature_degree(sp.degree));
  std::array<std::vector<Vec2>, 3> pts;
  for (int e = 0; e < 3; ++e) {
    const Vec2 a = reference_vertex((e + 1) % 3);
    const Vec2 b = reference_vertex((e + 2) % 3);
    for (int q = 0; q < lr.size(); ++q) pts[e].push_back(a + lr.points[q] * (b - a));
  }
  return {{CellValues(sp, pts[0]), CellValues(sp, pts[1]), CellValues(sp, pts[2])}, lr.points, lr.weights};
}

std::vector<int> global_indices(const DiscreteSpaces& s, int c) {
  std::vector<int> idx;
  s.cell_dofs(c, idx);
  idx.push_back(s.idx_lambda_trsigma);
  idx.push_back(s.idx_lambda_phi);
  return idx;
}

Eigen::VectorXd local_vector(const Eigen::VectorXd& x, const std::vector<int>& idx) {
  Eigen::VectorXd out(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) out[i] = x[idx[i]];
  return out;
}

// -int_Gamma (tau n).u_D into the sigma rows.
void add_dirichlet_term(const DiscreteSpaces& s, const ModelData& data, Eigen::VectorXd& R) {
  if (!data.u_dirichlet) return;
  EdgeValues ev = make_edge_values(s);
  const Triangulation& mesh = s.mesh;
  const int m = s.m;
  std::vector<int> idx;
  for (int f = 0; f < mesh.n_facets(); ++f) {
    const Facet& F = mesh.facet(f);
    if (!F.is_boundary()) continue;
    const int c = F.cells[0];
    int e = 0;
    while (mesh.cell_facets(c)[e] != f) ++e;
    CellValues& cv = ev.cv[e];
    cv.reinit(c);
    const FacetGeometry geo = mesh.facet_geometry(f);
    s.cell_dofs(c, idx);
    for (int q = 0; q < cv.size(); ++q) {
      const Vec2 uD = data.u_dirichlet(cv.x[q]);
      const double w = ev.w[q] * geo.length;
      for (int i = 0; i < m; ++i) {
        const double pn = cv.psi[q].row(i).dot(geo.normal);
        for (int r = 0; r < 2; ++r) R[idx[s.ls + r * m + i]] -= w * pn * uD[r];
      }
    }
  }
}

template <class Fn>
void for_each_cell(const DiscreteSpaces& s, const Eigen::VectorXd& x, const Kernel& k, Fn&& scatter) {
  CellValues cv(s, quadrature_rule(volume_quadrature_degree(s.degree)));
  Eigen::VectorXd Rl;
  Eigen::MatrixXd Jl, G;
  for (int c = 0; c < s.mesh.n_cells(); ++c) {
    cv.reinit(c);
    const std::vector<int> idx = global_indices(s, c);
    k.cell(cv, local_vector(x, idx), Rl, Jl, G);
    scatter(idx, Rl, Jl);
  }
}

SparseSystem assemble(const Eigen::VectorXd& x, const ModelData& data, const DiscreteSpaces& s,
                      Linearization lin, bool want_jac) {
  data.validate();
  if (x.size() != s.n_total) throw ParameterError("vector does not match the discrete spaces");
  const EssentialData ess = apply_sigtilde_normal_data(s, data);
  std::vector<char> fixed(s.n_total, 0);
  for (int d : ess.dofs) fixed[d] = 1;

  SparseSystem sys;
  sys.N = s.n_total;
  sys.residual = Eigen::VectorXd::Zero(s.n_total);
  std::vector<Eigen::Triplet<double>> trip;
  if (want_jac) {
    trip.reserve(static_cast<std::size_t>(s.mesh.n_cells()) * (s.local_size + 2) * (s.local_size + 2) / 3);
  }
  const Kernel k{s, data, lin, want_jac};
  for_each_cell(s, x, k, [&](const std::vector<int>& idx, const Eigen::VectorXd& Rl, const Eigen::MatrixXd& Jl) {
    const int L = static_cast<int>(idx.size());
    for (int i = 0; i < L; ++i) sys.residual[idx[i]] += Rl[i];
    if (!want_jac) return;
    for (int j = 0; j < L; ++j) {
      for (int i = 0; i < L; ++i) {
        const double v = Jl(i, j);
        if (v != 0.0 && !fixed[idx[i]]) trip.emplace_back(idx[i], idx[j], v);
      }
    }
  });
  add_dirichlet_term(s, data, sys.residual);
  sys.residual[s.idx_lambda_trsigma] -= data.trsigma_mean;
  sys.residual[s.idx_lambda_phi] -= data.phi_mean;
  for (std::size_t i = 0; i < ess.dofs.size(); ++i) {
    const int d = ess.dofs[i];
    sys.residual[d] = x[d] - ess.values[i];
    if (want_jac) trip.emplace_back(d, d, 1.0);
  }
  if (want_jac) {
    sys.jacobian.resize(s.n_total, s.n_total);
    sys.jacobian.setFromTriplets(trip.begin(), trip.end());
  }
  return sys;
}

}  // namespace

int volume_quadrature_degree(int degree) { return std::max(4, 2 * degree + 2); }
int edge_quadrature_degree(int degree) { return 2 * degree + 2; }

EssentialData apply_sigtilde_normal_data(const DiscreteSpaces& s, const ModelData& data) {
  EssentialData out;
  const Triangulation& mesh = s.mesh;
  const int ne = rt_edge_dofs(s.degree);
  const LineRule& lr = line_rule(2 * s.degree + 6);
  for (int f = 0; f < mesh.n_facets(); ++f) {
    const Facet& F = mesh.facet(f);
    if (!F.is_boundary()) continue;
    const FacetGeometry geo = mesh.facet_geometry(f);
    const Vec2& a = mesh.vertex(F.vertices[0]);
    const Vec2& b = mesh.vertex(F.vertices[1]);
    std::vector<double> mom(ne, 0.0);
    if (data.sigma_tilde_normal) {
      for (int q = 0; q < lr.size(); ++q) {
        const double sq = lr.points[q];
        const double vn = data.sigma_tilde_normal(a + sq * (b - a), geo.normal);
        for (int k = 0; k < ne; ++k) mom[k] += lr.weights[q] * geo.length * vn * legendre(k, 2.0 * sq - 1.0);
      }
    }
    const auto dofs = s.sigtilde.facet_dofs(f);
    for (int k = 0; k < ne; ++k) {
      out.dofs.push_back(s.off_sigtilde + dofs[k]);
      out.values.push_back(mom[k]);
    }
  }
  return out;
}

Eigen::VectorXd assemble_residual(const Eigen::VectorXd& x, const ModelData& data, const DiscreteSpaces& s) {
  return assemble(x, data, s, Linearization::Newton, false).residual;
}

Eigen::VectorXd assemble_residual(const SystemState& state, const ModelData& data, const DiscreteSpaces& s) {
  return assemble_residual(pack(s, state), data, s);
}

SparseSystem assemble_jacobian(const Eigen::VectorXd& x, const ModelData& data, const DiscreteSpaces& s,
                               Linearization lin) {
  return assemble(x, data, s, lin, true);
}

SparseSystem assemble_jacobian(const SystemState& state, const ModelData& data, const DiscreteSpaces& s,
                               Linearization lin) {
  return assemble_jacobian(pack(s, state), data, s, lin);
}

SparseMatrix convective_matrix(const DiscreteSpaces& s, const Eigen::VectorXd& w_state) {
  if (w_state.size() != s.n_total) throw ParameterError("vector does not match the discrete spaces");
  CellValues cv(s, quadrature_rule(volume_quadrature_degree(s.degree)));
  std::vector<Eigen::Triplet<double>> trip;
  Eigen::MatrixXd G, Cl;
  Eigen::Matrix<double, NZ, NZ> K;
  for (int c = 0; c < s.mesh.n_cells(); ++c) {
    cv.reinit(c);
    const std::vector<int> idx = global_indices(s, c);
    const Eigen::VectorXd zl = local_vector(w_state, idx);
    const int L = static_cast<int>(idx.size());
    Cl.setZero(L, L);
    for (int q = 0; q < cv.size(); ++q) {
      fill_g(s, cv, q, G);
      const Vec2 w = (G * zl).segment<2>(ZU);
      K.setZero();
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
          K(ZU + i, ZT + 2 * i + j) = 0.5 * w[j];  // 1/2 (t w).v
          K(ZT + 2 * i + j, ZU + i) = -0.5 * w[j];  // -1/2 r:(u (x) w)
        }
        K(ZP, ZTT + i) = 0.5 * w[i];   // 1/2 (t~.w) psi
        K(ZTT + i, ZP) = -0.5 * w[i];  // -1/2 (r~.w) phi
      }
      Cl.noalias() += cv.JxW[q] * (G.transpose() * (K * G));
    }
    for (int j = 0; j < L; ++j) {
      for (int i = 0; i < L; ++i) {
        if (Cl(i, j) != 0.0) trip.emplace_back(idx[i], idx[j], Cl(i, j));
      }
    }
  }
  SparseMatrix C(s.n_total, s.n_total);
  C.setFromTriplets(trip.begin(), trip.end());
  return C;
}

}  // namespace bioconv
