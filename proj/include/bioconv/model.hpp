#pragma once

#include <functional>
#include <string>

#include "bioconv/mesh.hpp"

namespace bioconv {

using ScalarFunction = std::function<double(double)>;
using PointScalar = std::function<double(const Vec2&)>;
using PointVector = std::function<Vec2(const Vec2&)>;
using PointTensor = std::function<Mat2(const Vec2&)>;
/// Boundary flux data as a function of position and outward unit normal.
using NormalData = std::function<double(const Vec2&, const Vec2&)>;

struct ViscosityProfile {
  std::string name;
  ScalarFunction mu;
  ScalarFunction dmu;
};

/// "exp-decay" (mu = exp(-s)), "constant" (mu = 1) or "constant(nu)".
ViscosityProfile eval_viscosity_profile(const std::string& name);

/**
 * Coefficients and data of the coupled flow/concentration problem. The
 * viscosity is evaluated at phi + alpha. Empty callbacks mean zero.
 */
struct ModelData {
  ScalarFunction mu;
  ScalarFunction dmu;
  double kappa = 1.0;
  double g = 0.0;
  double gamma = 0.0;
  double alpha = 0.0;
  double U = 0.0;
  Vec2 e_d{0.0, 1.0};

  PointVector f;                  // body force
  PointVector u_dirichlet;        // velocity on the boundary
  PointTensor u_dirichlet_grad;   // its gradient, for tangential derivatives
  NormalData sigma_tilde_normal;  // prescribed flux normal trace
  PointScalar conc_source;        // concentration source
  double phi_mean = 0.0;          // prescribed integral of phi
  double trsigma_mean = 0.0;      // prescribed integral of tr sigma

  /// Throws ParameterError when mu/dmu are missing or kappa, g, U, alpha < 0.
  void validate() const;
};

}  // namespace bioconv
