#include "bioconv/problems.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "bioconv/basis.hpp"
#include "bioconv/quadrature.hpp"

namespace bioconv {

namespace {

constexpr double kPi = std::numbers::pi;

Mat2 outer(const Vec2& a, const Vec2& b) { return a * b.transpose(); }

Mat2 deviator(const Mat2& a) { return a - 0.5 * a.trace() * Mat2::Identity(); }

// Verfuerth corner function and its derivatives.
struct CornerFunction {
  double lambda = 856399.0 / 1572864.0;
  double w = 1.5 * kPi;

  // k-th derivative of psi at theta
  double psi(double th, int k) const {
    const double a = 1.0 + lambda, b = 1.0 - lambda;
    const double cw = std::cos(lambda * w);
    auto dsin = [&](double c) { return std::pow(c, k) * std::sin(c * th + 0.5 * k * kPi); };
    auto dcos = [&](double c) { return std::pow(c, k) * std::cos(c * th + 0.5 * k * kPi); };
    return dsin(a) * cw / a - dcos(a) - dsin(b) * cw / b + dcos(b);
  }
};

struct Polar {
  double r, th;
};

Polar polar(const Vec2& x) {
  double th = std::atan2(x[1], x[0]);
  if (th < 0.0) th += 2.0 * kPi;
  return {std::max(x.norm(), 1e-14), th};
}

}  // namespace

double integrate(const Triangulation& mesh, const PointScalar& f, int refinements) {
  Triangulation m = mesh;
  for (int i = 0; i < refinements; ++i) m = refine_uniform(m);
  const QuadratureRule& qr = quadrature_rule(10);
  double sum = 0.0;
  for (int c = 0; c < m.n_cells(); ++c) {
    const CellGeometry g = cell_geometry(m, c);
    for (int q = 0; q < qr.size(); ++q) sum += qr.weights[q] * g.detJ * f(g.map(qr.points[q]));
  }
  return sum;
}

std::vector<Vec2> random_interior_points(const Triangulation& mesh, int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::vector<double> areas(mesh.n_cells());
  for (int c = 0; c < mesh.n_cells(); ++c) areas[c] = mesh.cell_area(c);
  std::discrete_distribution<int> pick(areas.begin(), areas.end());
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::vector<Vec2> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    const int c = pick(rng);
    double a = uni(rng), b = uni(rng);
    if (a + b > 1.0) {
      a = 1.0 - a;
      b = 1.0 - b;
    }
    // keep away from the cell boundary
    a = 0.02 + 0.96 * a;
    b = 0.02 + 0.96 * b;
    const auto& v = mesh.cell(c);
    const Vec2 p0 = mesh.vertex(v[0]), p1 = mesh.vertex(v[1]), p2 = mesh.vertex(v[2]);
    const double s = std::min(1.0, 0.98 / std::max(a + b, 1e-300));
    out.push_back(p0 + s * a * (p1 - p0) + s * b * (p2 - p0));
  }
  return out;
}

void make_manufactured(ProblemSpec& spec, const Primitives& prim) {
  spec.data.validate();
  spec.mode = BoundaryMode::Manufactured;
  spec.primitives = prim;
  const Triangulation mesh = spec.domain();
  const double area = mesh.domain_area();
  const double c_u = -integrate(mesh, [&](const Vec2& x) { return prim.u(x).squaredNorm(); }) / (4.0 * area);

  const ModelData d = spec.data;  // coefficients only; callbacks filled below
  ExactFields ex;
  ex.u = prim.u;
  ex.t = prim.grad_u;
  ex.p = prim.p;
  ex.phi = prim.phi;
  ex.ttilde = prim.grad_phi;
  ex.sigma = [prim, d, c_u](const Vec2& x) -> Mat2 {
    const Mat2 gu = prim.grad_u(x);
    const Vec2 u = prim.u(x);
    const double mu = d.mu(prim.phi(x) + d.alpha);
    return mu * (gu + gu.transpose()) - 0.5 * outer(u, u) - (prim.p(x) + c_u) * Mat2::Identity();
  };
  ex.div_sigma = [prim, d](const Vec2& x) -> Vec2 {
    const Mat2 gu = prim.grad_u(x);
    const double arg = prim.phi(x) + d.alpha;
    return d.dmu(arg) * (gu + gu.transpose()) * prim.grad_phi(x) + d.mu(arg) * prim.lap_u(x) -
           0.5 * gu * prim.u(x) - prim.grad_p(x);
  };
  ex.sigtilde = [prim, d](const Vec2& x) -> Vec2 {
    const double phi = prim.phi(x);
    return d.kappa * prim.grad_phi(x) - 0.5 * phi * prim.u(x) - d.U * (phi + d.alpha) * d.e_d;
  };
  ex.div_sigtilde = [prim, d](const Vec2& x) {
    const Vec2 gp = prim.grad_phi(x);
    return d.kappa * prim.lap_phi(x) - 0.5 * gp.dot(prim.u(x)) - d.U * gp.dot(d.e_d);
  };

  spec.data.f = [prim, d](const Vec2& x) -> Vec2 {
    const Mat2 gu = prim.grad_u(x);
    const double phi = prim.phi(x);
    const double arg = phi + d.alpha;
    const Vec2 visc = d.dmu(arg) * (gu + gu.transpose()) * prim.grad_phi(x) + d.mu(arg) * prim.lap_u(x);
    return -visc + gu * prim.u(x) + prim.grad_p(x) + d.g * (1.0 + d.gamma * arg) * d.e_d;
  };
  spec.data.conc_source = [prim, d](const Vec2& x) {
    const Vec2 gp = prim.grad_phi(x);
    return -d.kappa * prim.lap_phi(x) + prim.u(x).dot(gp) + d.U * gp.dot(d.e_d);
  };
  spec.data.u_dirichlet = prim.u;
  spec.data.u_dirichlet_grad = prim.grad_u;
  const PointVector st = ex.sigtilde;
  spec.data.sigma_tilde_normal = [st](const Vec2& x, const Vec2& n) { return st(x).dot(n); };
  spec.data.phi_mean = integrate(mesh, prim.phi);
  const PointTensor sig = ex.sigma;
  spec.data.trsigma_mean = integrate(mesh, [sig](const Vec2& x) { return sig(x).trace(); });
  spec.exact = ex;
}

ProblemSpec example1_square() {
  ProblemSpec spec;
  spec.name = "example1";
  spec.domain = [] { return build_rectangle(-1.0, -1.0, 1.0, 1.0, 2, 2); };
  spec.uniform_level = [](int k) { return build_rectangle(-1.0, -1.0, 1.0, 1.0, 2 << k, 2 << k); };
  const ViscosityProfile vp = eval_viscosity_profile("exp-decay");
  spec.data.mu = vp.mu;
  spec.data.dmu = vp.dmu;
  spec.data.kappa = 1.0;
  spec.data.g = 1.0;
  spec.data.gamma = 0.5;
  spec.data.alpha = 0.5;
  spec.data.U = 0.01;

  const double pi = kPi;
  Primitives pr;
  pr.u = [pi](const Vec2& x) -> Vec2 {
    return {std::cos(pi * x[0]) * std::sin(pi * x[1]), -std::sin(pi * x[0]) * std::cos(pi * x[1])};
  };
  pr.grad_u = [pi](const Vec2& x) -> Mat2 {
    const double sx = std::sin(pi * x[0]), cx = std::cos(pi * x[0]);
    const double sy = std::sin(pi * x[1]), cy = std::cos(pi * x[1]);
    Mat2 g;
    g << -pi * sx * sy, pi * cx * cy, -pi * cx * cy, pi * sx * sy;
    return g;
  };
  pr.lap_u = [pi, u = pr.u](const Vec2& x) -> Vec2 { return -2.0 * pi * pi * u(x); };
  pr.p = [pi](const Vec2& x) { return std::sin(pi * x[0]) * std::cos(pi * x[1]); };
  pr.grad_p = [pi](const Vec2& x) -> Vec2 {
    return {pi * std::cos(pi * x[0]) * std::cos(pi * x[1]), -pi * std::sin(pi * x[0]) * std::sin(pi * x[1])};
  };
  pr.phi = [pi](const Vec2& x) { return 1.0 + std::sin(pi * x[0]) * std::sin(pi * x[1]); };
  pr.grad_phi = [pi](const Vec2& x) -> Vec2 {
    return {pi * std::cos(pi * x[0]) * std::sin(pi * x[1]), pi * std::sin(pi * x[0]) * std::cos(pi * x[1])};
  };
  pr.lap_phi = [pi](const Vec2& x) { return -2.0 * pi * pi * std::sin(pi * x[0]) * std::sin(pi * x[1]); };
  make_manufactured(spec, pr);
  return spec;
}

ProblemSpec example2_lshape() {
  ProblemSpec spec;
  spec.name = "example2";
  spec.domain = [] { return build_lshape(1); };
  spec.uniform_level = [](int k) { return build_lshape(1 << k); };
  const double nu = 1.0;
  const ViscosityProfile vp = eval_viscosity_profile("constant");
  spec.data.mu = vp.mu;
  spec.data.dmu = vp.dmu;
  spec.data.kappa = 1.0;
  spec.data.g = 1.0;
  spec.data.gamma = 1.0;
  spec.data.alpha = 1.0;
  spec.data.U = 1.0;

  const CornerFunction cf;
  const double lam = cf.lambda;
  // velocity in polar form: u = r^lam * a(theta), a_1 = (1+lam) sin psi + cos psi',
  // a_2 = sin psi' - (1+lam) cos psi
  auto a_vec = [cf, lam](double th) -> Vec2 {
    const double s = std::sin(th), c = std::cos(th);
    return {(1.0 + lam) * s * cf.psi(th, 0) + c * cf.psi(th, 1), s * cf.psi(th, 1) - (1.0 + lam) * c * cf.psi(th, 0)};
  };
  auto da_vec = [cf, lam](double th) -> Vec2 {
    const double s = std::sin(th), c = std::cos(th);
    return {(1.0 + lam) * c * cf.psi(th, 0) + lam * s * cf.psi(th, 1) + c * cf.psi(th, 2),
            (1.0 + lam) * s * cf.psi(th, 0) - lam * c * cf.psi(th, 1) + s * cf.psi(th, 2)};
  };
  // pressure p = r^(lam-1) * b(theta)
  auto b_fun = [cf, lam, nu](double th, int k) {
    return -nu * ((1.0 + lam) * (1.0 + lam) * cf.psi(th, 1 + k) + cf.psi(th, 3 + k)) / (1.0 - lam);
  };

  Primitives pr;
  pr.u = [a_vec, lam](const Vec2& x) -> Vec2 {
    const Polar p = polar(x);
    return std::pow(p.r, lam) * a_vec(p.th);
  };
  pr.grad_u = [a_vec, da_vec, lam](const Vec2& x) -> Mat2 {
    const Polar p = polar(x);
    const double rl = std::pow(p.r, lam - 1.0);
    const Vec2 dr = lam * rl * a_vec(p.th);  // d/dr
    const Vec2 dth = rl * da_vec(p.th);      // (1/r) d/dtheta
    const double s = std::sin(p.th), c = std::cos(p.th);
    Mat2 g;
    g.col(0) = c * dr - s * dth;
    g.col(1) = s * dr + c * dth;
    return g;
  };
  pr.p = [b_fun, lam](const Vec2& x) {
    const Polar p = polar(x);
    return std::pow(p.r, lam - 1.0) * b_fun(p.th, 0);
  };
  pr.grad_p = [b_fun, lam](const Vec2& x) -> Vec2 {
    const Polar p = polar(x);
    const double rl = std::pow(p.r, lam - 2.0);
    const double dr = (lam - 1.0) * rl * b_fun(p.th, 0);
    const double dth = rl * b_fun(p.th, 1);
    const double s = std::sin(p.th), c = std::cos(p.th);
    return {c * dr - s * dth, s * dr + c * dth};
  };
  // Stokes pair: nu lap u = grad p
  pr.lap_u = [gp = pr.grad_p, nu](const Vec2& x) -> Vec2 { return gp(x) / nu; };
  pr.phi = [](const Vec2& x) {
    const Polar p = polar(x);
    return std::pow(p.r, 2.0 / 3.0) * std::sin(2.0 * p.th / 3.0);
  };
  pr.grad_phi = [](const Vec2& x) -> Vec2 {
    const Polar p = polar(x);
    const double f = (2.0 / 3.0) * std::pow(p.r, -1.0 / 3.0);
    return {-f * std::sin(p.th / 3.0), f * std::cos(p.th / 3.0)};
  };
  pr.lap_phi = [](const Vec2&) { return 0.0; };
  make_manufactured(spec, pr);
  return spec;
}

ProblemSpec patch_test() {
  ProblemSpec spec;
  spec.name = "patch";
  spec.domain = [] { return build_rectangle(-1.0, -1.0, 1.0, 1.0, 2, 2); };
  spec.uniform_level = [](int k) { return build_rectangle(-1.0, -1.0, 1.0, 1.0, 2 << k, 2 << k); };
  const ViscosityProfile vp = eval_viscosity_profile("constant");
  spec.data.mu = vp.mu;
  spec.data.dmu = vp.dmu;
  spec.data.kappa = 1.0;
  spec.data.g = 1.0;
  spec.data.gamma = 0.5;
  spec.data.alpha = 0.5;
  spec.data.U = 0.01;
  Primitives pr;
  pr.u = [](const Vec2& x) -> Vec2 { return {x[1], -x[0]}; };
  pr.grad_u = [](const Vec2&) -> Mat2 {
    Mat2 g;
    g << 0.0, 1.0, -1.0, 0.0;
    return g;
  };
  pr.lap_u = [](const Vec2&) -> Vec2 { return Vec2::Zero(); };
  pr.p = [](const Vec2& x) { return -0.5 * x.squaredNorm(); };
  pr.grad_p = [](const Vec2& x) -> Vec2 { return -x; };
  pr.phi = [](const Vec2&) { return 0.3; };
  pr.grad_phi = [](const Vec2&) -> Vec2 { return Vec2::Zero(); };
  pr.lap_phi = [](const Vec2&) { return 0.0; };
  make_manufactured(spec, pr);
  return spec;
}

ProblemSpec zero_problem() {
  ProblemSpec spec;
  spec.name = "zero";
  spec.domain = [] { return build_rectangle(-1.0, -1.0, 1.0, 1.0, 2, 2); };
  spec.uniform_level = [](int k) { return build_rectangle(-1.0, -1.0, 1.0, 1.0, 2 << k, 2 << k); };
  const ViscosityProfile vp = eval_viscosity_profile("constant");
  spec.data.mu = vp.mu;
  spec.data.dmu = vp.dmu;
  return spec;
}

std::vector<std::string> problem_names() { return {"example1", "example2", "lshape", "patch", "zero"}; }

ProblemSpec make_problem(const std::string& name) {
  if (name == "example1") return example1_square();
  if (name == "example2" || name == "lshape") return example2_lshape();
  if (name == "patch") return patch_test();
  if (name == "zero") return zero_problem();
  throw ParameterError("unknown problem '" + name + "'");
}

double strong_form_residual(const ProblemSpec& spec, int n_points, unsigned seed) {
  if (!spec.exact) throw ParameterError("problem '" + spec.name + "' has no exact solution");
  const ExactFields& ex = *spec.exact;
  const ModelData& d = spec.data;
  double worst = 0.0;
  for (const Vec2& x : random_interior_points(spec.domain(), n_points, seed)) {
    const Vec2 u = ex.u(x);
    const Mat2 t = ex.t(x);
    const double phi = ex.phi(x);
    const double arg = phi + d.alpha;
    const Vec2 tt = ex.ttilde(x);
    const Mat2 sig = ex.sigma(x);
    const Mat2 r1 = deviator(sig) - deviator(d.mu(arg) * (t + t.transpose()) - 0.5 * outer(u, u));
    const Vec2 r2 = -ex.div_sigma(x) + 0.5 * t * u - d.f(x) + d.g * (1.0 + d.gamma * arg) * d.e_d;
    const Vec2 r3 = ex.sigtilde(x) - (d.kappa * tt - 0.5 * phi * u - d.U * arg * d.e_d);
    const double r4 = 0.5 * tt.dot(u) - ex.div_sigtilde(x) - d.conc_source(x);
    const double r5 = t.trace();
    const double scale = 1.0 + sig.norm() + u.norm() + t.norm() + tt.norm() + std::abs(phi);
    worst = std::max({worst, r1.norm() / scale, r2.norm() / scale, r3.norm() / scale, std::abs(r4) / scale,
                      std::abs(r5) / scale});
  }
  return worst;
}

double derivative_mismatch(const ProblemSpec& spec, int n_points, unsigned seed, double h, double min_dist) {
  if (!spec.exact || !spec.primitives) throw ParameterError("problem '" + spec.name + "' has no exact solution");
  const ExactFields& ex = *spec.exact;
  const Primitives& pr = *spec.primitives;
  double worst = 0.0;
  auto rel = [&](double fd, double exact, double scale) {
    worst = std::max(worst, std::abs(fd - exact) / std::max(1.0, scale));
  };
  const Vec2 e[2] = {Vec2(h, 0.0), Vec2(0.0, h)};
  int found = 0;
  unsigned s = seed;
  while (found < n_points) {
    for (const Vec2& x : random_interior_points(spec.domain(), n_points, s++)) {
      if (found >= n_points) break;
      if (x.norm() < min_dist) continue;
      ++found;
      Vec2 div_sig = Vec2::Zero();
      double div_st = 0.0;
      Vec2 lap_u = Vec2::Zero();
      double lap_phi = 0.0, div_u = 0.0;
      const Mat2 t = ex.t(x);
      const Vec2 tt = ex.ttilde(x);
      for (int k = 0; k < 2; ++k) {
        const Vec2 du = (ex.u(x + e[k]) - ex.u(x - e[k])) / (2.0 * h);
        for (int i = 0; i < 2; ++i) rel(du[i], t(i, k), t.norm());
        div_u += du[k];
        rel((ex.phi(x + e[k]) - ex.phi(x - e[k])) / (2.0 * h), tt[k], tt.norm());
        rel((pr.p(x + e[k]) - pr.p(x - e[k])) / (2.0 * h), pr.grad_p(x)[k], pr.grad_p(x).norm());
        div_sig += (ex.sigma(x + e[k]).col(k) - ex.sigma(x - e[k]).col(k)) / (2.0 * h);
        div_st += (ex.sigtilde(x + e[k])[k] - ex.sigtilde(x - e[k])[k]) / (2.0 * h);
        lap_u += (ex.t(x + e[k]).col(k) - ex.t(x - e[k]).col(k)) / (2.0 * h);
        lap_phi += (ex.ttilde(x + e[k])[k] - ex.ttilde(x - e[k])[k]) / (2.0 * h);
      }
      const Vec2 ds = ex.div_sigma(x), lu = pr.lap_u(x);
      for (int i = 0; i < 2; ++i) {
        rel(div_sig[i], ds[i], ds.norm());
        rel(lap_u[i], lu[i], lu.norm());
      }
      rel(div_st, ex.div_sigtilde(x), std::abs(ex.div_sigtilde(x)));
      rel(lap_phi, pr.lap_phi(x), std::abs(pr.lap_phi(x)));
      rel(div_u, 0.0, t.norm());
    }
  }
  return worst;
}

}  // namespace bioconv
