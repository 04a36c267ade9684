#include "bioconv/basis.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

#include "bioconv/quadrature.hpp"

namespace bioconv {

namespace {

std::vector<std::array<int, 2>> monomials_up_to(int degree) {
  std::vector<std::array<int, 2>> out;
  for (int d = 0; d <= degree; ++d) {
    for (int b = 0; b <= d; ++b) out.push_back({d - b, b});
  }
  return out;
}

double ipow(double x, int n) {
  double r = 1.0;
  for (int k = 0; k < n; ++k) r *= x;
  return r;
}

double monomial(const std::array<int, 2>& e, const Vec2& x) { return ipow(x[0], e[0]) * ipow(x[1], e[1]); }

Vec2 monomial_gradient(const std::array<int, 2>& e, const Vec2& x) {
  const double dx = e[0] > 0 ? e[0] * ipow(x[0], e[0] - 1) * ipow(x[1], e[1]) : 0.0;
  const double dy = e[1] > 0 ? e[1] * ipow(x[0], e[0]) * ipow(x[1], e[1] - 1) : 0.0;
  return {dx, dy};
}

// Monomials are taken in the centred, scaled coordinate z = 3 (x - (1/3,1/3))
// for conditioning; d/dx = 3 d/dz.
constexpr double kScale = 3.0;

Vec2 centred(const Vec2& x) { return kScale * (x - Vec2(1.0 / 3.0, 1.0 / 3.0)); }

constexpr int kMaxDegree = 5;
constexpr int kMaxRTDegree = 5;

}  // namespace

bool is_rt(ElementKind kind) { return kind == ElementKind::RTVector || kind == ElementKind::RTTensor; }

int n_copies(ElementKind kind) {
  switch (kind) {
    case ElementKind::DGScalar:
    case ElementKind::RTVector:
      return 1;
    case ElementKind::DGVector:
    case ElementKind::RTTensor:
      return 2;
    case ElementKind::DGTensorTraceFree:
      return 3;
  }
  return 0;
}

int value_size(ElementKind kind) {
  switch (kind) {
    case ElementKind::DGScalar:
      return 1;
    case ElementKind::DGVector:
    case ElementKind::RTVector:
      return 2;
    case ElementKind::DGTensorTraceFree:
    case ElementKind::RTTensor:
      return 4;
  }
  return 0;
}

int dg_dim(int degree) { return (degree + 1) * (degree + 2) / 2; }
int rt_dim(int degree) { return (degree + 1) * (degree + 3); }
int rt_edge_dofs(int degree) { return degree + 1; }
int rt_interior_dofs(int degree) { return degree * (degree + 1); }

const Mat2& tracefree_basis(int k) {
  static const std::array<Mat2, 3> e = [] {
    std::array<Mat2, 3> r;
    r[0] << 1, 0, 0, -1;
    r[1] << 0, 1, 0, 0;
    r[2] << 0, 0, 1, 0;
    return r;
  }();
  return e[k];
}

CellGeometry cell_geometry(const Triangulation& mesh, int c) {
  const auto& cv = mesh.cell(c);
  CellGeometry g;
  g.v0 = mesh.vertex(cv[0]);
  g.J.col(0) = mesh.vertex(cv[1]) - g.v0;
  g.J.col(1) = mesh.vertex(cv[2]) - g.v0;
  g.detJ = g.J.determinant();
  if (!(g.detJ > 0.0)) throw ParameterError("degenerate or clockwise cell " + std::to_string(c));
  g.Jinv = g.J.inverse();
  return g;
}

Vec2 reference_vertex(int i) {
  switch (i) {
    case 0:
      return {0.0, 0.0};
    case 1:
      return {1.0, 0.0};
    default:
      return {0.0, 1.0};
  }
}

Vec2 reference_normal(int e) {
  switch (e) {
    case 0:
      return Vec2(1.0, 1.0) / std::sqrt(2.0);
    case 1:
      return {-1.0, 0.0};
    default:
      return {0.0, -1.0};
  }
}

// ---------------------------------------------------------------------------

DGBasis::DGBasis(int degree) : degree_(degree), exponents_(monomials_up_to(degree)) {
  if (degree < 0) throw ParameterError("negative polynomial degree");
  const int n = size();
  coeffs_ = Eigen::MatrixXd::Identity(n, n);
  const QuadratureRule& qr = quadrature_rule(std::max(1, 2 * degree));
  // two Cholesky passes: the second one removes the roundoff of the first
  for (int pass = 0; pass < 2; ++pass) {
    Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(n, n);
    for (int q = 0; q < qr.size(); ++q) {
      const Eigen::VectorXd v = values(qr.points[q]);
      mass += qr.weights[q] * v * v.transpose();
    }
    Eigen::LLT<Eigen::MatrixXd> llt(mass);
    const Eigen::MatrixXd L = llt.matrixL();
    coeffs_ = L.triangularView<Eigen::Lower>().solve(coeffs_).eval();
  }
}

Eigen::VectorXd DGBasis::values(const Vec2& xhat) const {
  const int n = size();
  Eigen::VectorXd m(n);
  const Vec2 z = centred(xhat);
  for (int j = 0; j < n; ++j) m[j] = monomial(exponents_[j], z);
  return coeffs_ * m;
}

Eigen::MatrixX2d DGBasis::gradients(const Vec2& xhat) const {
  const int n = size();
  Eigen::MatrixX2d g(n, 2);
  const Vec2 z = centred(xhat);
  for (int j = 0; j < n; ++j) g.row(j) = kScale * monomial_gradient(exponents_[j], z).transpose();
  return coeffs_ * g;
}

// ---------------------------------------------------------------------------

RTBasis::RTBasis(int degree)
    : degree_(degree), monomials_(monomials_up_to(degree)), interior_(monomials_up_to(degree - 1)) {
  if (degree < 0) throw ParameterError("negative Raviart-Thomas degree");
  const int m = size();
  const int ne = rt_edge_dofs(degree);
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(m, m);  // D(i,j) = dof_i(spanning_j)
  Eigen::MatrixX2d vals;
  Eigen::VectorXd divs;

  const LineRule& lr = line_rule(2 * degree + 1);
  for (int e = 0; e < 3; ++e) {
    const Vec2 a = reference_vertex((e + 1) % 3);
    const Vec2 b = reference_vertex((e + 2) % 3);
    const Vec2 n = reference_normal(e);
    const double len = (b - a).norm();
    for (int q = 0; q < lr.size(); ++q) {
      const double s = lr.points[q];
      eval_spanning(a + s * (b - a), vals, divs);
      const Eigen::VectorXd vn = vals * n;
      for (int k = 0; k < ne; ++k) {
        D.row(e * ne + k) += lr.weights[q] * len * legendre(k, 2.0 * s - 1.0) * vn.transpose();
      }
    }
  }
  if (degree > 0) {
    const QuadratureRule& qr = quadrature_rule(std::max(1, 2 * degree));
    const int ni = static_cast<int>(interior_.size());
    for (int q = 0; q < qr.size(); ++q) {
      eval_spanning(qr.points[q], vals, divs);
      for (int c = 0; c < 2; ++c) {
        for (int j = 0; j < ni; ++j) {
          D.row(3 * ne + c * ni + j) +=
              qr.weights[q] * monomial(interior_[j], qr.points[q]) * vals.col(c).transpose();
        }
      }
    }
  }
  // dof_i(mode_k) = sum_j coeffs_(k,j) D(i,j) = delta_ik, i.e. coeffs_ = D^{-T}
  coeffs_ = D.partialPivLu().solve(Eigen::MatrixXd::Identity(m, m)).transpose();
}

void RTBasis::eval_spanning(const Vec2& xhat, Eigen::MatrixX2d& values, Eigen::VectorXd& divs) const {
  const int m = size();
  const int np = static_cast<int>(monomials_.size());
  const Vec2 z = centred(xhat);
  values.setZero(m, 2);
  divs.setZero(m);
  for (int j = 0; j < np; ++j) {
    const double v = monomial(monomials_[j], z);
    const Vec2 g = kScale * monomial_gradient(monomials_[j], z);
    values(2 * j, 0) = v;
    divs[2 * j] = g[0];
    values(2 * j + 1, 1) = v;
    divs[2 * j + 1] = g[1];
  }
  // z * homogeneous monomials of degree l; div_z = (l+2) h
  for (int k = 0; k <= degree_; ++k) {
    const double h = ipow(z[0], degree_ - k) * ipow(z[1], k);
    values(2 * np + k, 0) = z[0] * h;
    values(2 * np + k, 1) = z[1] * h;
    divs[2 * np + k] = kScale * (degree_ + 2) * h;
  }
}

void RTBasis::eval(const Vec2& xhat, Eigen::MatrixX2d& values, Eigen::VectorXd& divs) const {
  Eigen::MatrixX2d sv;
  Eigen::VectorXd sd;
  eval_spanning(xhat, sv, sd);
  values = coeffs_ * sv;
  divs = coeffs_ * sd;
}

const DGBasis& dg_basis(int degree) {
  static const std::vector<std::unique_ptr<DGBasis>> cache = [] {
    std::vector<std::unique_ptr<DGBasis>> c;
    for (int d = 0; d <= kMaxDegree; ++d) c.push_back(std::make_unique<DGBasis>(d));
    return c;
  }();
  if (degree < 0 || degree > kMaxDegree) throw ParameterError("unsupported DG degree");
  return *cache[degree];
}

const RTBasis& rt_basis(int degree) {
  static const std::vector<std::unique_ptr<RTBasis>> cache = [] {
    std::vector<std::unique_ptr<RTBasis>> c;
    for (int d = 0; d <= kMaxRTDegree; ++d) c.push_back(std::make_unique<RTBasis>(d));
    return c;
  }();
  if (degree < 0 || degree > kMaxRTDegree) throw ParameterError("unsupported Raviart-Thomas degree");
  return *cache[degree];
}

}  // namespace bioconv
