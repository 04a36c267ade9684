#include "bioconv/solver.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#ifdef BIOCONV_HAVE_UMFPACK
#include <Eigen/UmfPackSupport>
#else
#include <Eigen/SparseLU>
#endif

namespace bioconv {

void SolverConfig::validate() const {
  if (!(tol > 0.0)) throw ParameterError("solver tolerance must be positive");
  if (max_iter < 1) throw ParameterError("max_iter must be at least 1");
}

const char* linear_solver_name() {
#ifdef BIOCONV_HAVE_UMFPACK
  return "umfpack";
#else
  return "sparselu";
#endif
}

namespace {

double inf_norm(const SparseMatrix& A) {
  Eigen::VectorXd rows = Eigen::VectorXd::Zero(A.rows());
  for (int k = 0; k < A.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(A, k); it; ++it) rows[it.row()] += std::abs(it.value());
  }
  return rows.size() ? rows.maxCoeff() : 0.0;
}

double max_abs(const Eigen::VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

Eigen::VectorXd linear_solve(const SparseMatrix& A, const Eigen::VectorXd& b) {
  if (A.rows() != A.cols()) throw SolverError("linear_solve: matrix is not square");
  if (A.rows() != b.size()) throw SolverError("linear_solve: right-hand side has the wrong length");
  if (A.rows() == 0) return {};
#ifdef BIOCONV_HAVE_UMFPACK
  Eigen::UmfPackLU<SparseMatrix> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success) throw SolverError("linear_solve: UMFPACK factorization failed (singular matrix)");
#else
  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success) throw SolverError("linear_solve: " + lu.lastErrorMessage());
#endif
  Eigen::VectorXd x = lu.solve(b);
  const double bound_scale = inf_norm(A);
  for (int sweep = 0;; ++sweep) {
    if (!x.allFinite()) throw SolverError("linear_solve: non-finite solution (singular matrix)");
    const Eigen::VectorXd r = b - A * x;
    const double bound = 1e-9 * (bound_scale * max_abs(x) + max_abs(b));
    if (max_abs(r) <= bound) return x;
    if (sweep == 2) {
      throw SolverError("linear_solve: backward error " + std::to_string(max_abs(r)) + " exceeds " +
                        std::to_string(bound));
    }
    x += lu.solve(r);
  }
}

SolveResult solve(const Eigen::VectorXd& x0, const ModelData& data, const DiscreteSpaces& s,
                  const SolverConfig& config) {
  config.validate();
  SolveResult out;
  out.x = x0;
  SolveReport& rep = out.report;
  SparseSystem sys = assemble_jacobian(out.x, data, s, config.mode);
  double rnorm = sys.residual.norm();
  for (int it = 1; it <= config.max_iter; ++it) {
    rep.residual_history.push_back(rnorm);
    Eigen::VectorXd dx;
    try {
      dx = linear_solve(sys.jacobian, -sys.residual);
    } catch (const SolverError& e) {
      throw SolverError(std::string(e.what()) + " at iteration " + std::to_string(it));
    }
    Eigen::VectorXd x_new = out.x + dx;
    Eigen::VectorXd r_new = assemble_residual(x_new, data, s);
    if (config.line_search && r_new.norm() > rnorm) {
      double step = 1.0;
      for (int k = 0; k < 8; ++k) {
        step *= 0.5;
        const Eigen::VectorXd x_try = out.x + step * dx;
        const Eigen::VectorXd r_try = assemble_residual(x_try, data, s);
        x_new = x_try;
        r_new = r_try;
        if (r_try.norm() <= (1.0 - 1e-4 * step) * rnorm) break;
      }
    }
    const double abs_inc = (x_new - out.x).norm();
    const double xn = x_new.norm();
    const double rel_inc = abs_inc == 0.0 ? 0.0 : abs_inc / xn;
    out.x = std::move(x_new);
    rep.iterations = it;
    rep.increment_history.push_back(rel_inc);
    rep.abs_increment_history.push_back(abs_inc);
    if (rel_inc < config.tol && abs_inc < config.tol) {
      rep.converged = true;
      rnorm = r_new.norm();
      rep.residual_max = max_abs(r_new);
      break;
    }
    sys = assemble_jacobian(out.x, data, s, config.mode);
    rnorm = sys.residual.norm();
    rep.residual_max = max_abs(sys.residual);
  }
  rep.residual_history.push_back(rnorm);
  return out;
}

void set_deterministic() {
  setenv("OPENBLAS_NUM_THREADS", "1", 1);
  setenv("OMP_NUM_THREADS", "1", 1);
}

}  // namespace bioconv
