#pragma once

#include <vector>

#include "bioconv/mesh.hpp"

namespace bioconv {

/// Quadrature on the reference triangle (0,0),(1,0),(0,1). Points are given
/// in reference coordinates; weights sum to the reference area 1/2.
struct QuadratureRule {
  int degree = 0;
  std::vector<Vec2> points;
  std::vector<double> weights;

  int size() const { return static_cast<int>(weights.size()); }
};

/// Gauss-Legendre rule on [0,1]; weights sum to 1.
struct LineRule {
  int degree = 0;
  std::vector<double> points;
  std::vector<double> weights;

  int size() const { return static_cast<int>(weights.size()); }
};

/// Fully symmetric rule with positive weights and interior points, exact for
/// polynomials of total degree `degree` (1..10). Throws ParameterError
/// otherwise.
const QuadratureRule& quadrature_rule(int degree);

/// Gauss-Legendre rule exact to `degree` (>= 0) on [0,1].
const LineRule& line_rule(int degree);

/// Legendre polynomial P_k at x in [-1,1].
double legendre(int k, double x);

}  // namespace bioconv
