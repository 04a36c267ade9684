#pragma once

#include <string>

#include <Eigen/Dense>

#include "bioconv/model.hpp"
#include "bioconv/spaces.hpp"

namespace bioconv {

/// Per-cell indicators on the barycentric mesh.
struct IndicatorField {
  Eigen::VectorXd theta_bar_sq;   // bar theta_T^2
  Eigen::VectorXd theta_hat_pow;  // hat theta_T^(4/3)
  double theta_global = 0.0;
};

/**
 * Residual indicators of a discrete state. The mass-balance residual of
 * the concentration includes the source g~ of the data. On boundary facets
 * the tangential jump of t_h is taken against the gradient of u_D; a
 * ParameterError is thrown if u_D is given without its gradient.
 */
IndicatorField local_indicators(const Eigen::VectorXd& x, const ModelData& data, const DiscreteSpaces& s);

/// (sum bar theta^2)^(1/2) + (sum hat theta^(4/3))^(3/4).
double global_theta(const IndicatorField& field);

/// e_tot / theta; infinity (with a warning on stderr) if theta = 0 < e_tot.
double effectivity(double e_tot, double theta);

/// CSV with columns cell,theta_bar_sq,theta_hat_pow.
void write_indicators_csv(const IndicatorField& field, const std::string& path);

}  // namespace bioconv
