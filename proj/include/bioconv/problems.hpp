#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bioconv/mesh.hpp"
#include "bioconv/model.hpp"

namespace bioconv {

/// Closed-form primary fields of a manufactured solution.
struct Primitives {
  PointVector u;
  PointTensor grad_u;  // (grad u)_ij = d u_i / d x_j
  PointVector lap_u;
  PointScalar p;
  PointVector grad_p;
  PointScalar phi;
  PointVector grad_phi;
  PointScalar lap_phi;
};

/// Exact values of every unknown (and the pressure).
struct ExactFields {
  PointVector u;
  PointTensor t;
  PointTensor sigma;
  PointVector div_sigma;
  PointScalar p;
  PointScalar phi;
  PointVector ttilde;
  PointVector sigtilde;
  PointScalar div_sigtilde;
};

enum class BoundaryMode { Analyzed, Manufactured };

struct ProblemSpec {
  std::string name;
  std::function<Triangulation()> domain;  // macro mesh
  /// Macro mesh of uniform level k (h halves per level). Empty means
  /// refine_uniform applied k times to domain().
  std::function<Triangulation(int)> uniform_level;
  ModelData data;
  std::optional<ExactFields> exact;
  std::optional<Primitives> primitives;
  BoundaryMode mode = BoundaryMode::Analyzed;
};

/**
 * Derives the mixed fields and all manufactured data (f, g~, u_D and its
 * gradient, sigma~.n, both means) from the primitives. Expects div u = 0.
 * The pressure shift c_u = -int |u|^2 / (4 |Omega|) is folded into sigma.
 */
void make_manufactured(ProblemSpec& spec, const Primitives& prim);

/// Smooth solution on (-1,1)^2, mu = exp(-s), kappa = 1, g = 1,
/// gamma = alpha = 0.5, U = 0.01.
ProblemSpec example1_square();

/// Singular Stokes-type solution on the L-shape with reentrant corner at
/// the origin, constant viscosity 1 and kappa = g = gamma = alpha = U = 1.
/// Polar radius is clamped below at 1e-14.
ProblemSpec example2_lshape();

/// u = (y,-x), p = -(x^2+y^2)/2, phi = 0.3, constant viscosity: every exact
/// field lies in the degree-1 spaces.
ProblemSpec patch_test();

/// All data zero on (-1,1)^2.
ProblemSpec zero_problem();

/// Names: example1, example2 (alias lshape), patch, zero.
ProblemSpec make_problem(const std::string& name);
std::vector<std::string> problem_names();

/// Largest violation of the strong first-order system by the stored exact
/// fields and data at `n_points` random interior points (algebraic checks,
/// no differencing).
double strong_form_residual(const ProblemSpec& spec, int n_points, unsigned seed);

/// Largest relative mismatch between the hand-coded derivatives (t, t~,
/// div sigma, div sigma~, lap u, lap phi) and central differences with step
/// h at random points at least `min_dist` away from the origin.
double derivative_mismatch(const ProblemSpec& spec, int n_points, unsigned seed, double h = 1e-5,
                           double min_dist = 0.0);

/// Uniformly distributed points inside the macro domain.
std::vector<Vec2> random_interior_points(const Triangulation& mesh, int n, unsigned seed);

/// Integral of f over the mesh with a degree-10 rule after `refinements`
/// uniform refinements.
double integrate(const Triangulation& mesh, const PointScalar& f, int refinements = 3);

}  // namespace bioconv
