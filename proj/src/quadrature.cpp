#include "bioconv/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

namespace bioconv {

namespace {

// Orbit parameters of the symmetric rules. For each degree: number of
// centroid, S21 and S111 orbits followed by the parameters, orbit by orbit:
// centroid (w), S21 (a, w) with barycentric point (a, a, 1-2a), S111
// (a, b, w) with barycentric point (a, b, 1-a-b). Weights are per point and
// already scaled to the reference area.
struct OrbitTable {
  int n3, n21, n111;
  std::vector<double> params;
};

const OrbitTable& orbit_table(int degree) {
  static const OrbitTable tables[] = {
      {1, 0, 0, {0.5}},
      {0, 1, 0, {0.16666666666666682, 0.16666666666666666}},
      {0, 2, 0, {0.166399521844703, 0.1492837755582301, 0.4976878916378938, 0.017382891108436552}},
      {0, 2, 0,
       {0.0915762135097713, 0.05497587182766119, 0.44594849091596495, 0.11169079483900547}},
      {1, 2, 0,
       {0.11249999999999354, 0.470142064105113, 0.06619707639425575, 0.10128650732345583,
        0.06296959027241308}},
      {0, 2, 1,
       {0.24928674517087643, 0.05839313786321789, 0.06308901449150923, 0.02542245318510837,
        0.3103524510338102, 0.6365024991213962, 0.04142553780917021}},
      {0, 3, 1,
       {0.06448157720657181, 0.026174278763930428, 0.23474097897852467, 0.05440594238522809,
        0.41633175228577457, 0.016504934075837283, 0.6438749631076659, 0.31224901659726806,
        0.03479075572083543}},
      {1, 3, 1,
       {0.07215780383891243, 0.05054722831703118, 0.016229248811598075, 0.170569307751787,
        0.0516086852673622, 0.45929258829274905, 0.0475458171336296, 0.7284923929554524,
        0.26311282963456534, 0.013615157087219661}},
      {1, 4, 1,
       {0.048567898141601784, 0.4896825191989603, 0.015667350113373224, 0.43708959149324017,
        0.03891377050249422, 0.1882035356190929, 0.03982386946360726, 0.044729513394447806,
        0.01278883782934626, 0.036838412054762126, 0.22196298916073698, 0.02164176968865589}},
      {1, 2, 3,
       {0.0454089951921995, 0.4855776333838414, 0.018362978878114784, 0.10948157548457682,
        0.02266052971771102, 0.14170721941377237, 0.3079398387638891, 0.036378958422912035,
        0.025003534762143263, 0.24667256063909332, 0.01416362126533307, 0.009540815400315808,
        0.06680325101168717, 0.004710833481808744}},
  };
  return tables[degree - 1];
}

QuadratureRule expand(int degree) {
  const OrbitTable& t = orbit_table(degree);
  QuadratureRule rule;
  rule.degree = degree;
  std::size_t i = 0;
  // barycentric (l0, l1, l2) -> reference point (l1, l2)
  auto add = [&](double l1, double l2, double w) {
    rule.points.emplace_back(l1, l2);
    rule.weights.push_back(w);
  };
  for (int k = 0; k < t.n3; ++k) add(1.0 / 3, 1.0 / 3, t.params[i++]);
  for (int k = 0; k < t.n21; ++k) {
    const double a = t.params[i], w = t.params[i + 1];
    i += 2;
    const double b = 1.0 - 2.0 * a;
    add(a, b, w);
    add(b, a, w);
    add(a, a, w);
  }
  for (int k = 0; k < t.n111; ++k) {
    const double a = t.params[i], b = t.params[i + 1], w = t.params[i + 2];
    i += 3;
    const double c = 1.0 - a - b;
    add(b, c, w);
    add(c, b, w);
    add(a, c, w);
    add(c, a, w);
    add(a, b, w);
    add(b, a, w);
  }
  return rule;
}

// P_n(x) and P_n'(x) by the three-term recurrence.
std::pair<double, double> legendre_with_derivative(int n, double x) {
  double p0 = 1.0, p1 = x;
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  return {p1, n * (x * p1 - p0) / (x * x - 1.0)};
}

LineRule gauss_legendre(int n) {
  LineRule rule;
  rule.degree = 2 * n - 1;
  rule.points.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = legendre_with_derivative(n, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = legendre_with_derivative(n, x).second;
    rule.points[n - 1 - i] = 0.5 * (x + 1.0);
    rule.weights[n - 1 - i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

constexpr int kMaxLinePoints = 32;

}  // namespace

const QuadratureRule& quadrature_rule(int degree) {
  if (degree < 1 || degree > 10) {
    throw ParameterError("quadrature degree must be in 1..10, got " + std::to_string(degree));
  }
  static const std::vector<QuadratureRule> rules = [] {
    std::vector<QuadratureRule> r;
    for (int d = 1; d <= 10; ++d) r.push_back(expand(d));
    return r;
  }();
  return rules[degree - 1];
}

const LineRule& line_rule(int degree) {
  if (degree < 0) throw ParameterError("negative line quadrature degree");
  const int n = degree / 2 + 1;
  if (n > kMaxLinePoints) throw ParameterError("line quadrature degree too high");
  static const std::vector<LineRule> rules = [] {
    std::vector<LineRule> r;
    for (int k = 1; k <= kMaxLinePoints; ++k) r.push_back(gauss_legendre(k));
    return r;
  }();
  return rules[n - 1];
}

double legendre(int k, double x) {
  if (k == 0) return 1.0;
  double p0 = 1.0, p1 = x;
  for (int j = 2; j <= k; ++j) {
    const double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

}  // namespace bioconv
