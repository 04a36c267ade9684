#pragma once

#include <functional>

#include <Eigen/Dense>

#include "bioconv/dofmap.hpp"

namespace bioconv {

/// Point-value callback. Scalars have 1 entry, vectors 2, tensors 4
/// (row-major).
using Field = std::function<Eigen::VectorXd(const Vec2&)>;

/// Local L2 projection (DG) or moment interpolation (RT). Fields already in
/// the space are reproduced exactly up to roundoff. Trace-free tensor
/// spaces receive the projection of the deviatoric part.
Eigen::VectorXd interpolate(const Field& field, const DofMap& dm, const Triangulation& mesh);

/// Value of a discrete function at reference point `xhat` of cell `c`.
Eigen::VectorXd evaluate(const Eigen::VectorXd& coeffs, const DofMap& dm, const Triangulation& mesh,
                         int c, const Vec2& xhat);

/// Physical gradient of a DG function at `xhat`; rows are value entries.
Eigen::MatrixX2d evaluate_gradient(const Eigen::VectorXd& coeffs, const DofMap& dm,
                                   const Triangulation& mesh, int c, const Vec2& xhat);

/// Divergence of an RT function (row-wise for tensors).
Eigen::VectorXd evaluate_divergence(const Eigen::VectorXd& coeffs, const DofMap& dm,
                                    const Triangulation& mesh, int c, const Vec2& xhat);

/// Mapped, sign-aligned RT local basis of cell `c` at `xhat`: physical
/// values (one row per local scalar mode) and divergences.
void rt_cell_basis(const DofMap& dm, const Triangulation& mesh, int c, const Vec2& xhat,
                   Eigen::MatrixX2d& values, Eigen::VectorXd& divs);

}  // namespace bioconv
