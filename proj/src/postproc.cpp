#include "bioconv/postproc.hpp"

#include <algorithm>
#include <cmath>

#include "bioconv/interpolate.hpp"
#include "bioconv/quadrature.hpp"

namespace bioconv {

namespace {

Eigen::VectorXd as_vector(const Vec2& v) { return Eigen::Vector2d(v); }

Eigen::VectorXd as_vector(const Mat2& m) { return Eigen::Vector4d(m(0, 0), m(0, 1), m(1, 0), m(1, 1)); }

}  // namespace

Eigen::VectorXd interpolate_exact(const ExactFields& ex, const DiscreteSpaces& s) {
  SystemState st;
  const Triangulation& mesh = s.mesh;
  st.t = interpolate([&](const Vec2& x) { return as_vector(ex.t(x)); }, s.t, mesh);
  st.u = interpolate([&](const Vec2& x) { return as_vector(ex.u(x)); }, s.u, mesh);
  st.sigma = interpolate([&](const Vec2& x) { return as_vector(ex.sigma(x)); }, s.sigma, mesh);
  st.phi = interpolate([&](const Vec2& x) { return Eigen::VectorXd::Constant(1, ex.phi(x)); }, s.phi, mesh);
  st.ttilde = interpolate([&](const Vec2& x) { return as_vector(ex.ttilde(x)); }, s.ttilde, mesh);
  st.sigtilde = interpolate([&](const Vec2& x) { return as_vector(ex.sigtilde(x)); }, s.sigtilde, mesh);
  return pack(s, st);
}

PressureField recover_pressure(const Eigen::VectorXd& x, const DiscreteSpaces& s) {
  const Triangulation& mesh = s.mesh;
  const int pdeg = std::min(2 * s.degree, 5);
  PressureField out;
  out.dofmap = build_dofmap({ElementKind::DGScalar, pdeg}, mesh);
  out.coeffs = Eigen::VectorXd::Zero(out.dofmap.n_dofs);
  const QuadratureRule& qr = quadrature_rule(std::min(10, std::max(4, 2 * pdeg)));
  const DGBasis& pb = dg_basis(pdeg);
  CellValues cv(s, qr);

  // c_h from the discrete velocity
  double usq = 0.0;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    cv.reinit(c);
    const Eigen::VectorXd loc = gather(s, x, c);
    for (int q = 0; q < cv.size(); ++q) usq += cv.JxW[q] * cv.values(q, loc).u.squaredNorm();
  }
  out.c_u = -usq / (4.0 * mesh.domain_area());

  for (int c = 0; c < mesh.n_cells(); ++c) {
    cv.reinit(c);
    const Eigen::VectorXd loc = gather(s, x, c);
    const auto dofs = out.dofmap.dofs(c);
    for (int q = 0; q < cv.size(); ++q) {
      const PointValues v = cv.values(q, loc);
      const double p = -0.25 * (2.0 * v.sigma.trace() + v.u.squaredNorm()) - out.c_u;
      const Eigen::VectorXd phi = pb.values(qr.points[q]);
      for (int j = 0; j < pb.size(); ++j) out.coeffs[dofs[j]] += qr.weights[q] * p * phi[j];
      out.integral += cv.JxW[q] * p;
    }
  }
  return out;
}

double evaluate_pressure(const PressureField& p, const Triangulation& mesh, int c, const Vec2& xhat) {
  return evaluate(p.coeffs, p.dofmap, mesh, c, xhat)[0];
}

double lebesgue_norm(const Eigen::VectorXd& values, const Eigen::VectorXd& weights, double r) {
  if (!(std::abs(r - 2.0) < 1e-12 || std::abs(r - 4.0) < 1e-12 || std::abs(r - 4.0 / 3.0) < 1e-12)) {
    throw ParameterError("unsupported Lebesgue exponent " + std::to_string(r));
  }
  if (values.size() != weights.size()) throw ParameterError("values and weights differ in length");
  double sum = 0.0;
  for (int i = 0; i < values.size(); ++i) sum += weights[i] * std::pow(std::abs(values[i]), r);
  return std::pow(sum, 1.0 / r);
}

double convergence_rate(double e, double e_prev, double N, double N_prev, int d) {
  if (!(e > 0.0 && e_prev > 0.0 && N > 0.0 && N_prev > 0.0)) {
    throw ParameterError("convergence_rate needs positive errors and sizes");
  }
  if (N == N_prev) throw ParameterError("convergence_rate needs distinct sizes");
  return -d * std::log(e / e_prev) / std::log(N / N_prev);
}

double ErrorRecord::e_tot() const {
  return std::sqrt(e_u * e_u + e_t * e_t + e_sigma * e_sigma + e_phi * e_phi + e_ttilde * e_ttilde +
                   e_sigtilde * e_sigtilde);
}

int error_quadrature_degree(int degree) { return std::min(10, std::max(8, 2 * degree + 4)); }

ErrorRecord compute_errors(const Eigen::VectorXd& x, const ExactFields& ex, const DiscreteSpaces& s) {
  if (!ex.u || !ex.t || !ex.sigma || !ex.div_sigma || !ex.p || !ex.phi || !ex.ttilde || !ex.sigtilde ||
      !ex.div_sigtilde) {
    throw ParameterError("exact solution is missing fields needed for the errors");
  }
  const Triangulation& mesh = s.mesh;
  const QuadratureRule& qr = quadrature_rule(error_quadrature_degree(s.degree));
  const PressureField ph = recover_pressure(x, s);
  const DGBasis& pb = dg_basis(ph.dofmap.family.degree);
  CellValues cv(s, qr);
  double u4 = 0, t2 = 0, s2 = 0, ds43 = 0, p4 = 0, tt2 = 0, st2 = 0, dst43 = 0, pr2 = 0;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    cv.reinit(c);
    const Eigen::VectorXd loc = gather(s, x, c);
    const auto pd = ph.dofmap.dofs(c);
    for (int q = 0; q < cv.size(); ++q) {
      const double w = cv.JxW[q];
      const Vec2& xq = cv.x[q];
      const PointValues v = cv.values(q, loc);
      u4 += w * std::pow((ex.u(xq) - v.u).squaredNorm(), 2.0);
      t2 += w * (ex.t(xq) - v.t).squaredNorm();
      s2 += w * (ex.sigma(xq) - v.sigma).squaredNorm();
      ds43 += w * std::pow((ex.div_sigma(xq) - v.div_sigma).norm(), 4.0 / 3.0);
      p4 += w * std::pow(ex.phi(xq) - v.phi, 4.0);
      tt2 += w * (ex.ttilde(xq) - v.ttilde).squaredNorm();
      st2 += w * (ex.sigtilde(xq) - v.sigtilde).squaredNorm();
      dst43 += w * std::pow(std::abs(ex.div_sigtilde(xq) - v.div_sigtilde), 4.0 / 3.0);
      const Eigen::VectorXd pv = pb.values(qr.points[q]);
      double p = 0.0;
      for (int j = 0; j < pb.size(); ++j) p += ph.coeffs[pd[j]] * pv[j];
      pr2 += w * std::pow(ex.p(xq) - p, 2.0);
    }
  }
  ErrorRecord rec;
  rec.N = s.n_total;
  rec.h = mesh.max_diameter();
  rec.e_u = std::pow(u4, 0.25);
  rec.e_t = std::sqrt(t2);
  rec.e_sigma = std::sqrt(s2 + std::pow(ds43, 1.5));
  rec.e_phi = std::pow(p4, 0.25);
  rec.e_ttilde = std::sqrt(tt2);
  rec.e_sigtilde = std::sqrt(st2 + std::pow(dst43, 1.5));
  rec.e_p = std::sqrt(pr2);
  return rec;
}

void fill_rates(std::vector<ErrorRecord>& recs) {
  auto rate = [](double e, double ep, double N, double Np) -> std::optional<double> {
    if (!(e > 0.0 && ep > 0.0) || N == Np) return std::nullopt;
    return convergence_rate(e, ep, N, Np);
  };
  for (std::size_t i = 1; i < recs.size(); ++i) {
    ErrorRecord& r = recs[i];
    const ErrorRecord& p = recs[i - 1];
    const double N = static_cast<double>(r.N), Np = static_cast<double>(p.N);
    r.r_u = rate(r.e_u, p.e_u, N, Np);
    r.r_t = rate(r.e_t, p.e_t, N, Np);
    r.r_sigma = rate(r.e_sigma, p.e_sigma, N, Np);
    r.r_phi = rate(r.e_phi, p.e_phi, N, Np);
    r.r_ttilde = rate(r.e_ttilde, p.e_ttilde, N, Np);
    r.r_sigtilde = rate(r.e_sigtilde, p.e_sigtilde, N, Np);
    r.r_p = rate(r.e_p, p.e_p, N, Np);
  }
}

}  // namespace bioconv
