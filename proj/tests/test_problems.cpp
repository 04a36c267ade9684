#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bioconv/problems.hpp"

using namespace bioconv;

namespace {

const double kPi = std::acos(-1.0);

}  // namespace

TEST_CASE("corner exponent solves sin^2(lam w) = lam^2 sin^2(w) for w = 3pi/2") {
  const double lam = 856399.0 / 1572864.0;
  const double w = 1.5 * kPi;
  CHECK(std::abs(std::pow(std::sin(lam * w), 2) - lam * lam * std::pow(std::sin(w), 2)) < 1e-6);
  CHECK(lam == doctest::Approx(0.54448).epsilon(1e-4));
}

TEST_CASE("L-shape velocity vanishes on the reentrant edges") {
  const ProblemSpec p = example2_lshape();
  REQUIRE(p.exact);
  for (double r : {1e-3, 0.1, 0.5, 0.99}) {
    CHECK(p.exact->u({r, 0.0}).norm() < 1e-9);  // theta = 0
    // exponent is a rational approximation, good to ~1e-6
    CHECK(p.exact->u({0.0, -r}).norm() < 1e-5);  // theta = 3pi/2
  }
  // but not elsewhere
  CHECK(p.exact->u({-0.5, 0.5}).norm() > 1e-3);
}

TEST_CASE("L-shape concentration") {
  const ProblemSpec p = example2_lshape();
  CHECK(p.exact->phi({std::cos(0.75 * kPi), std::sin(0.75 * kPi)}) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(p.exact->phi({0.7, 0.0})) < 1e-14);
  CHECK(p.exact->phi({1e-20, 0.0}) == doctest::Approx(0.0));  // radius clamp keeps it finite
}

TEST_CASE("hand-coded derivatives agree with central differences") {
  CHECK(derivative_mismatch(example1_square(), 40, 1) < 1e-6);
  CHECK(derivative_mismatch(patch_test(), 40, 2) < 1e-6);
  CHECK(derivative_mismatch(example2_lshape(), 40, 3, 1e-6, 0.05) < 1e-5);
}

TEST_CASE("exact fields satisfy the first-order system") {
  CHECK(strong_form_residual(example1_square(), 60, 11) < 1e-9);
  CHECK(strong_form_residual(example2_lshape(), 60, 12) < 1e-8);
  CHECK(strong_form_residual(patch_test(), 60, 13) < 1e-12);
}

TEST_CASE("example 1 viscosity stays within its bounds") {
  const ProblemSpec p = example1_square();
  const Triangulation mesh = p.domain();
  const double lo = std::exp(-2.0 - p.data.alpha), hi = std::exp(-p.data.alpha);
  for (const Vec2& x : random_interior_points(mesh, 200, 4)) {
    const double mu = p.data.mu(p.exact->phi(x) + p.data.alpha);
    CHECK(mu >= lo);
    CHECK(mu <= hi);
  }
}

TEST_CASE("velocity is divergence free and t is trace free") {
  for (const ProblemSpec& p : {example1_square(), example2_lshape(), patch_test()}) {
    for (const Vec2& x : random_interior_points(p.domain(), 30, 9)) {
      CHECK(std::abs(p.exact->t(x).trace()) < 1e-10 * (1.0 + p.exact->t(x).norm()));
    }
  }
}

TEST_CASE("prescribed means match the exact fields") {
  for (const ProblemSpec& p : {example1_square(), patch_test()}) {
    const Triangulation mesh = p.domain();
    CHECK(integrate(mesh, p.exact->phi) == doctest::Approx(p.data.phi_mean).epsilon(1e-10));
    CHECK(integrate(mesh, [&](const Vec2& x) { return p.exact->sigma(x).trace(); }) ==
          doctest::Approx(p.data.trsigma_mean).epsilon(1e-10));
  }
}

TEST_CASE("integrate is exact for polynomials") {
  const Triangulation sq = build_rectangle(-1, -1, 1, 1, 2, 2);
  CHECK(integrate(sq, [](const Vec2& x) { return x[0] * x[0] * x[1] * x[1]; }, 0) ==
        doctest::Approx(4.0 / 9.0).epsilon(1e-14));
  CHECK(integrate(build_lshape(1), [](const Vec2&) { return 1.0; }, 1) == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("problem registry") {
  for (const std::string& n : problem_names()) CHECK_NOTHROW(make_problem(n));
  CHECK(make_problem("lshape").name == "example2");
  CHECK_THROWS_AS(make_problem("nope"), ParameterError);
  const ProblemSpec z = zero_problem();
  CHECK(z.data.phi_mean == 0.0);
  CHECK(z.data.trsigma_mean == 0.0);
}

TEST_CASE("uniform level meshes halve h") {
  for (const ProblemSpec& p : {example1_square(), example2_lshape()}) {
    REQUIRE(p.uniform_level);
    const double h0 = p.uniform_level(0).max_diameter();
    CHECK(p.uniform_level(0).n_cells() == p.domain().n_cells());
    CHECK(p.uniform_level(2).max_diameter() == doctest::Approx(h0 / 4.0));
    CHECK(p.uniform_level(2).n_cells() == 16 * p.domain().n_cells());
  }
}
