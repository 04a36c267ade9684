#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "bioconv/forms.hpp"
#include "bioconv/postproc.hpp"
#include "bioconv/problems.hpp"
#include "bioconv/solver.hpp"

using namespace bioconv;

namespace {

DiscreteSpaces coarse(const ProblemSpec& p, int degree = 1) {
  return build_spaces(barycentric_refine(p.domain()).bary, degree);
}

}  // namespace

TEST_CASE("linear_solve: small systems") {
  std::vector<Eigen::Triplet<double>> trip{{0, 0, 4.0}, {0, 1, 1.0}, {1, 0, 1.0}, {1, 1, 3.0}, {2, 2, -2.0}};
  SparseMatrix A(3, 3);
  A.setFromTriplets(trip.begin(), trip.end());
  Eigen::VectorXd b(3);
  b << 1.0, 2.0, 4.0;
  const Eigen::VectorXd x = linear_solve(A, b);
  CHECK(x[0] == doctest::Approx(1.0 / 11.0).epsilon(1e-14));
  CHECK(x[1] == doctest::Approx(7.0 / 11.0).epsilon(1e-14));
  CHECK(x[2] == doctest::Approx(-2.0).epsilon(1e-14));

  SUBCASE("identity") {
    SparseMatrix I(5, 5);
    I.setIdentity();
    const Eigen::VectorXd r = Eigen::VectorXd::LinSpaced(5, -2.0, 2.0);
    CHECK((linear_solve(I, r) - r).norm() == 0.0);
  }
}

TEST_CASE("linear_solve: singular matrix throws") {
  std::vector<Eigen::Triplet<double>> trip{{0, 0, 1.0}, {0, 1, 2.0}, {1, 0, 2.0}, {1, 1, 4.0}};
  SparseMatrix A(2, 2);
  A.setFromTriplets(trip.begin(), trip.end());
  CHECK_THROWS_AS(linear_solve(A, Eigen::VectorXd::Ones(2)), SolverError);
}

TEST_CASE("solver config validation") {
  SolverConfig c;
  CHECK_NOTHROW(c.validate());
  c.tol = 0.0;
  CHECK_THROWS_AS(c.validate(), ParameterError);
  c = SolverConfig{};
  c.max_iter = 0;
  CHECK_THROWS_AS(c.validate(), ParameterError);
}

TEST_CASE("zero problem converges immediately to zero") {
  const ProblemSpec p = zero_problem();
  const DiscreteSpaces s = coarse(p);
  const SolveResult r = solve(Eigen::VectorXd::Zero(s.n_total), p.data, s);
  CHECK(r.report.converged);
  CHECK(r.report.iterations <= 1);
  CHECK(r.x.lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("Newton on example 1: few iterations, small final residual") {
  const ProblemSpec p = example1_square();
  const DiscreteSpaces s = coarse(p);
  const SolveResult r = solve(Eigen::VectorXd::Zero(s.n_total), p.data, s);
  REQUIRE(r.report.converged);
  CHECK(r.report.iterations <= 6);
  CHECK(r.report.residual_max < 1e-8);
  // quadratic convergence: last increments shrink fast
  const auto& inc = r.report.increment_history;
  REQUIRE(inc.size() >= 3);
  CHECK(inc[inc.size() - 1] < inc[inc.size() - 2]);
}

TEST_CASE("Picard converges to the Newton solution") {
  const ProblemSpec p = example1_square();
  const DiscreteSpaces s = coarse(p);
  const SolveResult newton = solve(Eigen::VectorXd::Zero(s.n_total), p.data, s);
  SolverConfig cfg;
  cfg.mode = Linearization::Picard;
  cfg.max_iter = 60;
  const SolveResult picard = solve(Eigen::VectorXd::Zero(s.n_total), p.data, s, cfg);
  REQUIRE(picard.report.converged);
  CHECK(picard.report.iterations >= newton.report.iterations);
  CHECK((picard.x - newton.x).norm() / newton.x.norm() < 1e-6);
}

TEST_CASE("non-convergence is reported, not thrown") {
  const ProblemSpec p = example1_square();
  const DiscreteSpaces s = coarse(p);
  SolverConfig cfg;
  cfg.max_iter = 1;
  const SolveResult r = solve(Eigen::VectorXd::Zero(s.n_total), p.data, s, cfg);
  CHECK_FALSE(r.report.converged);
  CHECK(r.report.iterations == 1);
}

TEST_CASE("solve from the exact solution of the patch test takes one step") {
  const ProblemSpec p = patch_test();
  const DiscreteSpaces s = coarse(p);
  const Eigen::VectorXd xi = interpolate_exact(*p.exact, s);
  const SolveResult r = solve(xi, p.data, s);
  CHECK(r.report.converged);
  CHECK(r.report.iterations <= 1);
  CHECK((r.x - xi).norm() <= 1e-9 * (1.0 + xi.norm()));
}
