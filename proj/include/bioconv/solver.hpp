#pragma once

#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "bioconv/forms.hpp"

namespace bioconv {

struct SolverConfig {
  double tol = 1e-7;  // both relative and absolute increment
  int max_iter = 25;
  Linearization mode = Linearization::Newton;
  bool line_search = true;  // only used when a full step increases |R|

  void validate() const;
};

struct SolveReport {
  int iterations = 0;
  std::vector<double> increment_history;      // |dx| / |x_new|
  std::vector<double> abs_increment_history;  // |dx|
  std::vector<double> residual_history;       // |R| before each update, then final
  double residual_max = 0.0;                  // max-norm of the final residual
  bool converged = false;
};

struct SolveResult {
  Eigen::VectorXd x;
  SolveReport report;
};

/// Name of the sparse direct backend ("umfpack" or "sparselu").
const char* linear_solver_name();

/**
 * Sparse direct solve of A x = b. Throws SolverError if the factorization
 * fails or the backward error exceeds
 * 1e-9 (|A|_inf |x|_inf + |b|_inf) after two refinement sweeps.
 */
Eigen::VectorXd linear_solve(const SparseMatrix& A, const Eigen::VectorXd& b);

/**
 * Newton (or Picard) iteration from x0. Stops when the relative and the
 * absolute increment are both below tol (0/0 counts as 0). Non-convergence
 * is reported, not thrown; SolverError propagates from singular systems
 * with the iteration number in the message.
 */
SolveResult solve(const Eigen::VectorXd& x0, const ModelData& data, const DiscreteSpaces& s,
                  const SolverConfig& config = {});

/// Pins BLAS/OpenMP thread pools to one thread.
void set_deterministic();

}  // namespace bioconv
