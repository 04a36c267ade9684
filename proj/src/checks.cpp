#include "bioconv/checks.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>

#include "bioconv/estimator.hpp"
#include "bioconv/forms.hpp"
#include "bioconv/postproc.hpp"
#include "bioconv/problems.hpp"
#include "bioconv/quadrature.hpp"
#include "bioconv/solver.hpp"

namespace bioconv {

namespace {

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

CheckResult quadrature_check() {
  double worst = 0.0;
  for (int deg = 1; deg <= 10; ++deg) {
    const QuadratureRule& qr = quadrature_rule(deg);
    for (int a = 0; a <= deg; ++a) {
      for (int b = 0; a + b <= deg; ++b) {
        double s = 0.0;
        for (int q = 0; q < qr.size(); ++q) s += qr.weights[q] * std::pow(qr.points[q][0], a) * std::pow(qr.points[q][1], b);
        const double exact = factorial(a) * factorial(b) / factorial(a + b + 2);
        worst = std::max(worst, std::abs(s - exact) / exact);
      }
    }
  }
  return {"quadrature exactness (degrees 1-10)", worst <= 1e-13, "max rel error " + sci(worst)};
}

CheckResult jacobian_check() {
  const DiscreteSpaces s = build_spaces(barycentric_refine(build_rectangle(-1, -1, 1, 1, 2, 2)).bary, 1);
  double worst = 0.0;
  for (const char* profile : {"exp-decay", "constant(0.01)"}) {
    ProblemSpec p = example1_square();
    const ViscosityProfile vp = eval_viscosity_profile(profile);
    p.data.mu = vp.mu;
    p.data.dmu = vp.dmu;
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    Eigen::VectorXd x(s.n_total), d(s.n_total);
    for (int i = 0; i < s.n_total; ++i) {
      x[i] = u(rng);
      d[i] = 2.0 * u(rng);
    }
    const double eps = 1e-6;
    const Eigen::VectorXd jd = assemble_jacobian(x, p.data, s).jacobian * d;
    const Eigen::VectorXd fd = (assemble_residual(Eigen::VectorXd(x + eps * d), p.data, s) -
                                assemble_residual(Eigen::VectorXd(x - eps * d), p.data, s)) /
                               (2.0 * eps);
    worst = std::max(worst, (fd - jd).norm() / jd.norm());
  }
  return {"Jacobian vs central differences", worst <= 1e-6, "max rel mismatch " + sci(worst)};
}

CheckResult patch_check() {
  const ProblemSpec p = patch_test();
  const DiscreteSpaces s = build_spaces(barycentric_refine(p.domain()).bary, 1);
  const SolveResult res = solve(Eigen::VectorXd::Zero(s.n_total), p.data, s);
  const ErrorRecord e = compute_errors(res.x, *p.exact, s);
  const double theta = local_indicators(res.x, p.data, s).theta_global;
  const bool ok = res.report.converged && e.e_tot() <= 1e-9 && theta <= 1e-8;
  return {"patch test", ok, "e_tot " + sci(e.e_tot()) + ", theta " + sci(theta)};
}

CheckResult data_check() {
  double worst = 0.0;
  for (const ProblemSpec& p : {example1_square(), example2_lshape(), patch_test()}) {
    worst = std::max(worst, strong_form_residual(p, 50, 7));
  }
  return {"manufactured data satisfy the strong form", worst <= 1e-8, "max residual " + sci(worst)};
}

}  // namespace

std::vector<CheckResult> run_checks() { return {quadrature_check(), jacobian_check(), patch_check(), data_check()}; }

bool report_checks(const std::vector<CheckResult>& results, std::ostream& os) {
  bool all = true;
  for (const CheckResult& r : results) {
    os << (r.pass ? "PASS  " : "FAIL  ") << r.name << "  (" << r.detail << ")\n";
    all = all && r.pass;
  }
  return all;
}

}  // namespace bioconv
