#pragma once

#include <vector>

#include <Eigen/Dense>

#include "bioconv/basis.hpp"
#include "bioconv/dofmap.hpp"
#include "bioconv/quadrature.hpp"

namespace bioconv {

/**
 * The six discrete spaces of the coupled scheme on one (barycentric) mesh
 * and the layout of the global unknown vector:
 *
 *   [ t | u | sigma | phi | t~ | sigma~ | lambda_trsigma | lambda_phi ]
 *
 * Cell-local vectors use the same block order with sizes
 * 3n, 2n, 2m, n, 2n, m (n = dim P_l, m = dim RT_l) followed by the two
 * multipliers.
 */
struct DiscreteSpaces {
  int degree = 1;
  Triangulation mesh;
  DofMap t, u, sigma, phi, ttilde, sigtilde;

  int off_t = 0, off_u = 0, off_sigma = 0, off_phi = 0, off_ttilde = 0, off_sigtilde = 0;
  int idx_lambda_trsigma = 0, idx_lambda_phi = 0;
  int n_total = 0;

  int n = 0;  // scalar DG modes per cell
  int m = 0;  // scalar RT modes per cell
  // local block offsets
  int lt = 0, lu = 0, ls = 0, lp = 0, ltt = 0, lst = 0, local_size = 0;

  /// Global indices of the local vector of cell c (without multipliers).
  void cell_dofs(int c, std::vector<int>& idx) const;
};

/// Builds the spaces of degree l >= 1 on `mesh`.
DiscreteSpaces build_spaces(const Triangulation& mesh, int degree);

struct SystemState {
  Eigen::VectorXd t, u, sigma, phi, ttilde, sigtilde;
  double lambda_trsigma = 0.0;
  double lambda_phimean = 0.0;
};

SystemState zero_state(const DiscreteSpaces& s);
Eigen::VectorXd pack(const DiscreteSpaces& s, const SystemState& state);
SystemState unpack(const DiscreteSpaces& s, const Eigen::VectorXd& x);

/// Values of all unknowns at one point.
struct PointValues {
  Mat2 t;
  Mat2 grad_t[2];  // d t / d x_k
  Vec2 u;
  Mat2 grad_u;     // broken gradient
  Mat2 sigma;
  Vec2 div_sigma;
  double phi = 0.0;
  Vec2 grad_phi;
  Vec2 ttilde;
  Mat2 grad_ttilde;
  Vec2 sigtilde;
  double div_sigtilde = 0.0;
};

/**
 * Mapped basis values on one cell at the points of a quadrature rule.
 * RT values are sign-aligned with the global dofs.
 */
class CellValues {
 public:
  CellValues(const DiscreteSpaces& s, const QuadratureRule& qr);
  /// Evaluates at arbitrary reference points (weights are set to zero).
  CellValues(const DiscreteSpaces& s, std::vector<Vec2> ref_points);

  void reinit(int c);

  int size() const { return static_cast<int>(ref_points_.size()); }
  int cell() const { return cell_; }
  const CellGeometry& geometry() const { return geo_; }

  std::vector<Vec2> x;              // physical points
  std::vector<double> JxW;          // weights times |det J|
  Eigen::MatrixXd phi;              // n x nq
  std::vector<Eigen::MatrixX2d> grad;  // per point, n x 2
  std::vector<Eigen::MatrixX2d> psi;   // per point, m x 2
  Eigen::MatrixXd div;              // m x nq

  /// Values of the unknowns at point q from the local vector of the cell.
  PointValues values(int q, const Eigen::VectorXd& local) const;

 private:
  void tabulate();

  const DiscreteSpaces* s_;
  std::vector<Vec2> ref_points_;
  std::vector<double> ref_weights_;
  Eigen::MatrixXd ref_phi_;
  std::vector<Eigen::MatrixX2d> ref_grad_;
  std::vector<Eigen::MatrixX2d> ref_psi_;
  Eigen::MatrixXd ref_div_;
  CellGeometry geo_;
  int cell_ = -1;
};

/// Gathers the local vector of cell c.
Eigen::VectorXd gather(const DiscreteSpaces& s, const Eigen::VectorXd& x, int c);

}  // namespace bioconv
