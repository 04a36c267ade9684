#pragma once

#include <vector>

#include <Eigen/Dense>

#include "bioconv/mesh.hpp"

namespace bioconv {

enum class ElementKind { DGScalar, DGVector, DGTensorTraceFree, RTVector, RTTensor };

struct ElementFamily {
  ElementKind kind = ElementKind::DGScalar;
  int degree = 0;
};

bool is_rt(ElementKind kind);

/// Number of scalar-space copies making up the family (tensor RT is two
/// vector RT rows, a trace-free tensor has three coefficient components).
int n_copies(ElementKind kind);

/// Number of entries of a point value: 1, 2 or 4 (tensors row-major).
int value_size(ElementKind kind);

int dg_dim(int degree);            // (l+1)(l+2)/2
int rt_dim(int degree);            // (l+1)(l+3)
int rt_edge_dofs(int degree);      // l+1 per edge
int rt_interior_dofs(int degree);  // l(l+1)

/// Trace-free basis tensors E_0 = [[1,0],[0,-1]], E_1 = [[0,1],[0,0]],
/// E_2 = [[0,0],[1,0]].
const Mat2& tracefree_basis(int k);

/// Affine map x = v0 + J xhat from the reference triangle onto a cell.
struct CellGeometry {
  Vec2 v0;
  Mat2 J;
  Mat2 Jinv;
  double detJ = 0.0;

  Vec2 map(const Vec2& xhat) const { return v0 + J * xhat; }
  Vec2 pull(const Vec2& x) const { return Jinv * (x - v0); }
};

CellGeometry cell_geometry(const Triangulation& mesh, int c);

/// Complete polynomials of degree <= l on the reference triangle,
/// orthonormal in L2 of the reference cell.
class DGBasis {
 public:
  explicit DGBasis(int degree);

  int degree() const { return degree_; }
  int size() const { return static_cast<int>(exponents_.size()); }

  Eigen::VectorXd values(const Vec2& xhat) const;
  /// Reference gradients, one row per mode.
  Eigen::MatrixX2d gradients(const Vec2& xhat) const;

 private:
  int degree_;
  std::vector<std::array<int, 2>> exponents_;
  Eigen::MatrixXd coeffs_;  // mode i = sum_j coeffs_(i,j) * monomial j
};

/// Raviart-Thomas RT_l on the reference triangle, dual to the moments
///   edge e, k = 0..l :  int_e psi.n P_k(2s-1) ds
///   interior (c, j)  :  int_T psi_c m_j,  deg m_j <= l-1
/// with edge e opposite vertex e, traversed from vertex (e+1)%3 to (e+2)%3,
/// and n the unit outward normal. Edge dofs come first, edge by edge.
class RTBasis {
 public:
  explicit RTBasis(int degree);

  int degree() const { return degree_; }
  int size() const { return rt_dim(degree_); }

  /// Reference values, one row per mode, and divergences.
  void eval(const Vec2& xhat, Eigen::MatrixX2d& values, Eigen::VectorXd& divs) const;

  /// Monomials used by the interior moments.
  const std::vector<std::array<int, 2>>& interior_monomials() const { return interior_; }

 private:
  void eval_spanning(const Vec2& xhat, Eigen::MatrixX2d& values, Eigen::VectorXd& divs) const;

  int degree_;
  std::vector<std::array<int, 2>> monomials_;  // degree <= l
  std::vector<std::array<int, 2>> interior_;   // degree <= l-1
  Eigen::MatrixXd coeffs_;                     // mode k = sum_j coeffs_(k,j) * spanning j
};

/// Cached reference bases (degree 0..5).
const DGBasis& dg_basis(int degree);
const RTBasis& rt_basis(int degree);

/// Reference triangle vertex i and the unit outward normal of edge e.
Vec2 reference_vertex(int i);
Vec2 reference_normal(int e);

}  // namespace bioconv
