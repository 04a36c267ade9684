#include "bioconv/estimator.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>

#include "bioconv/forms.hpp"
#include "bioconv/interpolate.hpp"
#include "bioconv/quadrature.hpp"

namespace bioconv {

namespace {

constexpr int kDim = 2;

Mat2 deviator(const Mat2& a) { return a - 0.5 * a.trace() * Mat2::Identity(); }

Mat2 tensor_at(const Eigen::VectorXd& coeffs, const DofMap& dm, const Triangulation& mesh, int c, const Vec2& x) {
  const Eigen::VectorXd v = evaluate(coeffs, dm, mesh, c, cell_geometry(mesh, c).pull(x));
  Mat2 t;
  t << v[0], v[1], v[2], v[3];
  return t;
}

Vec2 vector_at(const Eigen::VectorXd& coeffs, const DofMap& dm, const Triangulation& mesh, int c, const Vec2& x) {
  const Eigen::VectorXd v = evaluate(coeffs, dm, mesh, c, cell_geometry(mesh, c).pull(x));
  return {v[0], v[1]};
}

}  // namespace

IndicatorField local_indicators(const Eigen::VectorXd& x, const ModelData& data, const DiscreteSpaces& s) {
  data.validate();
  if (data.u_dirichlet && !data.u_dirichlet_grad) {
    throw ParameterError("boundary velocity is given without its gradient; the estimator needs both");
  }
  const Triangulation& mesh = s.mesh;
  const int M = mesh.n_cells();
  IndicatorField out;
  out.theta_bar_sq = Eigen::VectorXd::Zero(M);
  out.theta_hat_pow = Eigen::VectorXd::Zero(M);
  const double hexp = 2.0 - kDim / 2.0;

  CellValues cv(s, quadrature_rule(volume_quadrature_degree(s.degree)));
  for (int c = 0; c < M; ++c) {
    cv.reinit(c);
    const Eigen::VectorXd loc = gather(s, x, c);
    const double hT = mesh.cell_diameter(c);
    double consist = 0.0, constit = 0.0, curl = 0.0, hat = 0.0;
    for (int q = 0; q < cv.size(); ++q) {
      const double w = cv.JxW[q];
      const Vec2& xq = cv.x[q];
      const PointValues v = cv.values(q, loc);
      const double arg = v.phi + data.alpha;
      const double mu = data.mu(arg);
      consist += w * ((v.t - v.grad_u).squaredNorm() + (v.ttilde - v.grad_phi).squaredNorm());
      const Mat2 tsym = 0.5 * (v.t + v.t.transpose());
      const Mat2 uu = v.u * v.u.transpose();
      constit += w * (deviator(v.sigma) - 2.0 * mu * tsym + 0.5 * deviator(uu)).squaredNorm();
      const Vec2 st_res = v.sigtilde - data.kappa * v.ttilde + 0.5 * v.phi * v.u + data.U * arg * data.e_d;
      constit += w * st_res.squaredNorm();
      Vec2 curl_t;
      for (int i = 0; i < 2; ++i) curl_t[i] = v.grad_t[0](i, 1) - v.grad_t[1](i, 0);
      const double curl_tt = v.grad_ttilde(1, 0) - v.grad_ttilde(0, 1);
      curl += w * (curl_t.squaredNorm() + curl_tt * curl_tt);

      const Vec2 f = data.f ? data.f(xq) : Vec2::Zero();
      const double gt = data.conc_source ? data.conc_source(xq) : 0.0;
      const Vec2 mom = v.div_sigma - 0.5 * v.t * v.u + f - data.g * (1.0 + data.gamma * arg) * data.e_d;
      const double mass = v.div_sigtilde - 0.5 * v.ttilde.dot(v.u) + gt;
      hat += w * (std::pow(mom.norm(), 4.0 / 3.0) + std::pow(std::abs(mass), 4.0 / 3.0));
    }
    out.theta_bar_sq[c] = std::pow(hT, hexp) * consist + constit + hT * hT * curl;
    out.theta_hat_pow[c] = hat;
  }

  // tangential jumps
  const SystemState st = unpack(s, x);
  const LineRule& lr = line_rule(edge_quadrature_degree(s.degree));
  for (int f = 0; f < mesh.n_facets(); ++f) {
    const Facet& F = mesh.facet(f);
    const FacetGeometry geo = mesh.facet_geometry(f);
    const Vec2& a = mesh.vertex(F.vertices[0]);
    const Vec2& b = mesh.vertex(F.vertices[1]);
    double jt = 0.0, jtt = 0.0;
    for (int q = 0; q < lr.size(); ++q) {
      const Vec2 xq = a + lr.points[q] * (b - a);
      const double w = lr.weights[q] * geo.length;
      const Mat2 t0 = tensor_at(st.t, s.t, mesh, F.cells[0], xq);
      if (F.is_boundary()) {
        const Mat2 g = data.u_dirichlet_grad ? data.u_dirichlet_grad(xq) : Mat2::Zero();
        jt += w * ((t0 - g) * geo.tangent).squaredNorm();
      } else {
        const Mat2 t1 = tensor_at(st.t, s.t, mesh, F.cells[1], xq);
        jt += w * ((t0 - t1) * geo.tangent).squaredNorm();
        const Vec2 d = vector_at(st.ttilde, s.ttilde, mesh, F.cells[0], xq) -
                       vector_at(st.ttilde, s.ttilde, mesh, F.cells[1], xq);
        jtt += w * std::pow(d.dot(geo.tangent), 2);
      }
    }
    const double contrib = geo.length * (jt + jtt);
    for (int k = 0; k < F.n_cells; ++k) out.theta_bar_sq[F.cells[k]] += contrib;
  }
  out.theta_global = global_theta(out);
  return out;
}

double global_theta(const IndicatorField& field) {
  return std::sqrt(field.theta_bar_sq.sum()) + std::pow(field.theta_hat_pow.sum(), 0.75);
}

double effectivity(double e_tot, double theta) {
  if (theta == 0.0) {
    if (e_tot == 0.0) return 0.0;
    std::cerr << "warning: estimator vanishes while the error does not\n";
    return std::numeric_limits<double>::infinity();
  }
  return e_tot / theta;
}

void write_indicators_csv(const IndicatorField& field, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path);
  os << "cell,theta_bar_sq,theta_hat_pow\n";
  char buf[96];
  for (int c = 0; c < field.theta_bar_sq.size(); ++c) {
    std::snprintf(buf, sizeof buf, "%d,%.6e,%.6e\n", c, field.theta_bar_sq[c], field.theta_hat_pow[c]);
    os << buf;
  }
  if (!os) throw std::runtime_error("write failed for " + path);
}

}  // namespace bioconv
