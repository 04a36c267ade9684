#pragma once

#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "bioconv/model.hpp"
#include "bioconv/spaces.hpp"

namespace bioconv {

using SparseMatrix = Eigen::SparseMatrix<double>;

struct SparseSystem {
  Eigen::VectorXd residual;
  SparseMatrix jacobian;
  int N = 0;
};

/// Boundary normal-moment dofs of sigma~ (global indices in the full
/// unknown vector) and the values they are fixed to.
struct EssentialData {
  std::vector<int> dofs;
  std::vector<double> values;
};

enum class Linearization { Newton, Picard };

int volume_quadrature_degree(int degree);  // max(4, 2l+2)
int edge_quadrature_degree(int degree);    // 2l+2

EssentialData apply_sigtilde_normal_data(const DiscreteSpaces& s, const ModelData& data);

/**
 * Residual of the discrete system at x. Rows follow the unknown layout:
 * (t,u) tests, sigma tests, (t~,phi) tests, sigma~ tests, then the two
 * constraint rows. Rows of essential sigma~ dofs hold x_i - value_i.
 * Throws ModelError when mu(phi+alpha) <= 0 at a quadrature point.
 */
Eigen::VectorXd assemble_residual(const Eigen::VectorXd& x, const ModelData& data,
                                  const DiscreteSpaces& s);
Eigen::VectorXd assemble_residual(const SystemState& state, const ModelData& data,
                                  const DiscreteSpaces& s);

/// Residual and its exact derivative (Newton) or the frozen-coefficient
/// operator (Picard: convective velocity and viscosity argument frozen).
SparseSystem assemble_jacobian(const Eigen::VectorXd& x, const ModelData& data, const DiscreteSpaces& s,
                               Linearization lin = Linearization::Newton);
SparseSystem assemble_jacobian(const SystemState& state, const ModelData& data, const DiscreteSpaces& s,
                               Linearization lin = Linearization::Newton);

/**
 * Matrix of the convective forms with frozen velocity w (the u-block of
 * `w_state`), rows are tests and columns trials:
 * b^T C a = C(w; (t_a,u_a), (t_b,u_b)) + C~(w; (t~_a,phi_a), (t~_b,phi_b)),
 *   C(w; (t,u), (r,v))    = 1/2 int (t w).v - 1/2 int r:(u (x) w)
 *   C~(w; (t~,p), (r~,q)) = 1/2 int (t~.w) q - 1/2 int (r~.w) p.
 */
SparseMatrix convective_matrix(const DiscreteSpaces& s, const Eigen::VectorXd& w_state);

}  // namespace bioconv
