#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "bioconv/adapt.hpp"

using namespace bioconv;

namespace {

// Smallest cardinality of any subset reaching theta * total (exhaustive).
int minimal_cardinality(const Eigen::VectorXd& v, double theta) {
  const int n = static_cast<int>(v.size());
  const double target = theta * v.sum();
  int best = n;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) s += v[i];
    if (s >= target) best = std::min(best, __builtin_popcount(mask));
  }
  return best;
}

}  // namespace

TEST_CASE("dorfler_mark: hand examples") {
  Eigen::VectorXd v(5);
  v << 1.0, 5.0, 2.0, 2.0, 0.0;  // total 10
  CHECK(dorfler_mark(v, 0.5) == std::vector<int>{1});
  CHECK(dorfler_mark(v, 0.6) == std::vector<int>{1, 2});  // tie 2/3: lower index first
  CHECK(dorfler_mark(v, 0.9) == std::vector<int>{1, 2, 3});
  CHECK(dorfler_mark(v, 1.0) == std::vector<int>{0, 1, 2, 3});
  CHECK(dorfler_mark(Eigen::VectorXd::Zero(4), 0.5).empty());
  CHECK_THROWS_AS(dorfler_mark(v, 0.0), ParameterError);
  CHECK_THROWS_AS(dorfler_mark(v, 1.5), ParameterError);
  v[4] = -1.0;
  CHECK_THROWS_AS(dorfler_mark(v, 0.5), ParameterError);
}

TEST_CASE("dorfler_mark is minimal on random vectors") {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> len(1, 12);
  for (int trial = 0; trial < 300; ++trial) {
    Eigen::VectorXd v(len(rng));
    for (int i = 0; i < v.size(); ++i) v[i] = std::pow(u(rng), 3.0);
    const double theta = 0.05 + 0.95 * u(rng);
    const std::vector<int> m = dorfler_mark(v, theta);
    double s = 0.0;
    for (int i : m) s += v[i];
    CHECK(s >= theta * v.sum() * (1.0 - 1e-14));
    CHECK(static_cast<int>(m.size()) == minimal_cardinality(v, theta));
    CHECK(std::is_sorted(m.begin(), m.end()));
  }
}

TEST_CASE("maximum_mark") {
  Eigen::VectorXd v(4);
  v << 1.0, 4.0, 2.0, 3.9;
  CHECK(maximum_mark(v, 0.5) == std::vector<int>{1, 2, 3});
  CHECK(maximum_mark(v, 1.0) == std::vector<int>{1});
  CHECK(maximum_mark(Eigen::VectorXd::Zero(3), 0.5).empty());
}

TEST_CASE("aggregate_to_macro sums the three children") {
  const MeshHierarchy h = barycentric_refine(build_rectangle(0, 0, 1, 1, 1, 1));
  IndicatorField f;
  f.theta_bar_sq = Eigen::VectorXd::LinSpaced(6, 1.0, 6.0);
  f.theta_hat_pow = Eigen::VectorXd::Constant(6, 0.5);
  const Eigen::VectorXd m = aggregate_to_macro(f, h);
  REQUIRE(m.size() == 2);
  CHECK(m[0] == doctest::Approx(1 + 2 + 3 + 1.5));
  CHECK(m[1] == doctest::Approx(4 + 5 + 6 + 1.5));

  f.theta_bar_sq = Eigen::VectorXd::Zero(5);
  f.theta_hat_pow = Eigen::VectorXd::Zero(5);
  CHECK_THROWS_AS(aggregate_to_macro(f, h), HierarchyError);
}

TEST_CASE("PointLocator") {
  const Triangulation mesh = build_lshape(2);
  const PointLocator loc(mesh);
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int c = 0; c < mesh.n_cells(); ++c) {
    double a = u(rng), b = u(rng);
    if (a + b > 1.0) a = 1.0 - a, b = 1.0 - b;
    const auto& v = mesh.cell(c);
    const Vec2 x = mesh.vertex(v[0]) + a * (mesh.vertex(v[1]) - mesh.vertex(v[0])) +
                   b * (mesh.vertex(v[2]) - mesh.vertex(v[0]));
    CHECK(loc.locate(x) == c);
  }
  CHECK(loc.locate(Vec2(0.5, -0.5)) == -1);  // removed quadrant
  CHECK(loc.locate(Vec2(3.0, 0.0)) == -1);
}

TEST_CASE("transfer_state is exact for nested fields") {
  const ProblemSpec p = patch_test();
  const Triangulation coarse = p.domain();
  const DiscreteSpaces a = build_spaces(barycentric_refine(coarse).bary, 1);
  std::vector<int> all(coarse.n_cells());
  std::iota(all.begin(), all.end(), 0);
  const DiscreteSpaces b = build_spaces(barycentric_refine(refine_marked(coarse, all)).bary, 1);
  // patch fields are global polynomials, so nesting is not needed
  const Eigen::VectorXd xb = transfer_state(interpolate_exact(*p.exact, a), a, b);
  CHECK((xb - interpolate_exact(*p.exact, b)).norm() < 1e-10);
}

TEST_CASE("amr_loop on example 1: estimator decreases and N grows") {
  AmrConfig cfg;
  cfg.max_levels = 3;
  const AmrTrace tr = amr_loop(example1_square(), cfg);
  REQUIRE(tr.completed);
  REQUIRE(tr.records.size() == 3);
  for (std::size_t i = 1; i < tr.records.size(); ++i) {
    CHECK(tr.records[i].N > tr.records[i - 1].N);
    CHECK(tr.records[i].theta < tr.records[i - 1].theta);
    CHECK(tr.wall_time[i] >= tr.wall_time[i - 1]);
  }
  CHECK(tr.marked.size() >= 2);
  CHECK(tr.macro.size() == 3);
}

TEST_CASE("amr_loop stops at the dof budget and on tol_theta") {
  AmrConfig cfg;
  cfg.max_levels = 10;
  cfg.dof_budget = 2000;
  AmrTrace tr = amr_loop(example1_square(), cfg);
  REQUIRE(tr.records.size() >= 2);
  CHECK(tr.records.size() < 10);
  CHECK(tr.records.back().N >= 2000);
  for (std::size_t i = 0; i + 1 < tr.records.size(); ++i) CHECK(tr.records[i].N < 2000);

  cfg.dof_budget = 2000000;
  cfg.tol_theta = 1e9;
  tr = amr_loop(example1_square(), cfg);
  CHECK(tr.records.size() == 1);
}

TEST_CASE("AmrConfig validation") {
  AmrConfig cfg;
  cfg.dorfler_theta = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ParameterError);
  cfg = AmrConfig{};
  cfg.max_levels = 0;
  CHECK_THROWS_AS(cfg.validate(), ParameterError);
}
