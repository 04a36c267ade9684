#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "bioconv/dofmap.hpp"
#include "bioconv/problems.hpp"
#include "bioconv/spaces.hpp"

namespace bioconv {

/// Interpolant of the exact fields (DG: local L2 projection, RT: canonical
/// moments). Multipliers are zero.
Eigen::VectorXd interpolate_exact(const ExactFields& exact, const DiscreteSpaces& s);

struct PressureField {
  DofMap dofmap;  // scalar DG of degree min(2l, 5)
  Eigen::VectorXd coeffs;
  double c_u = 0.0;
  double integral = 0.0;
};

/// p_h = -tr(2 sigma_h + u_h (x) u_h)/4 - c_h, c_h = -int |u_h|^2 / (4 |Omega|),
/// projected cellwise onto scalar DG.
PressureField recover_pressure(const Eigen::VectorXd& x, const DiscreteSpaces& s);

/// Value of p_h at reference point xhat of cell c.
double evaluate_pressure(const PressureField& p, const Triangulation& mesh, int c, const Vec2& xhat);

/// (sum w_i |v_i|^r)^(1/r) for r in {2, 4/3, 4}.
double lebesgue_norm(const Eigen::VectorXd& values, const Eigen::VectorXd& weights, double r);

/// -d log(e/e_prev) / log(N/N_prev).
double convergence_rate(double e, double e_prev, double N, double N_prev, int d = 2);

struct ErrorRecord {
  long N = 0;
  double h = 0.0;
  double e_u = 0.0, e_t = 0.0, e_sigma = 0.0, e_phi = 0.0, e_ttilde = 0.0, e_sigtilde = 0.0, e_p = 0.0;
  std::optional<double> r_u, r_t, r_sigma, r_phi, r_ttilde, r_sigtilde, r_p;
  int iterations = 0;
  bool converged = true;
  double theta = 0.0;
  double eff = 0.0;

  /// sqrt of the sum of the six squared solution errors (pressure excluded).
  double e_tot() const;
};

int error_quadrature_degree(int degree);  // max(8, 2l+4), at most 10

/**
 * Errors in the norms: L4 for u and phi, L2 for t, t~ and p, and
 * (|.|_0^2 + |div .|_{0,4/3}^2)^(1/2) for sigma and sigma~.
 */
ErrorRecord compute_errors(const Eigen::VectorXd& x, const ExactFields& exact, const DiscreteSpaces& s);

/// Fills the rate fields of records[1..] from their predecessors.
void fill_rates(std::vector<ErrorRecord>& records);

}  // namespace bioconv
