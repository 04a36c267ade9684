#include "bioconv/spaces.hpp"

#include <string>

namespace bioconv {

DiscreteSpaces build_spaces(const Triangulation& mesh, int degree) {
  if (degree < 1) throw ParameterError("polynomial degree must be at least 1, got " + std::to_string(degree));
  if (mesh.empty()) throw ParameterError("cannot build spaces on an empty mesh");
  DiscreteSpaces s;
  s.degree = degree;
  s.mesh = mesh;
  s.t = build_dofmap({ElementKind::DGTensorTraceFree, degree}, mesh);
  s.u = build_dofmap({ElementKind::DGVector, degree}, mesh);
  s.sigma = build_dofmap({ElementKind::RTTensor, degree}, mesh);
  s.phi = build_dofmap({ElementKind::DGScalar, degree}, mesh);
  s.ttilde = build_dofmap({ElementKind::DGVector, degree}, mesh);
  s.sigtilde = build_dofmap({ElementKind::RTVector, degree}, mesh);

  s.off_t = 0;
  s.off_u = s.off_t + s.t.n_dofs;
  s.off_sigma = s.off_u + s.u.n_dofs;
  s.off_phi = s.off_sigma + s.sigma.n_dofs;
  s.off_ttilde = s.off_phi + s.phi.n_dofs;
  s.off_sigtilde = s.off_ttilde + s.ttilde.n_dofs;
  s.idx_lambda_trsigma = s.off_sigtilde + s.sigtilde.n_dofs;
  s.idx_lambda_phi = s.idx_lambda_trsigma + 1;
  s.n_total = s.idx_lambda_phi + 1;

  s.n = dg_dim(degree);
  s.m = rt_dim(degree);
  s.lt = 0;
  s.lu = s.lt + 3 * s.n;
  s.ls = s.lu + 2 * s.n;
  s.lp = s.ls + 2 * s.m;
  s.ltt = s.lp + s.n;
  s.lst = s.ltt + 2 * s.n;
  s.local_size = s.lst + s.m;
  return s;
}

void DiscreteSpaces::cell_dofs(int c, std::vector<int>& idx) const {
  idx.resize(local_size);
  auto put = [&](const DofMap& dm, int offset, int local) {
    const auto d = dm.dofs(c);
    for (std::size_t i = 0; i < d.size(); ++i) idx[local + i] = offset + d[i];
  };
  put(t, off_t, lt);
  put(u, off_u, lu);
  put(sigma, off_sigma, ls);
  put(phi, off_phi, lp);
  put(ttilde, off_ttilde, ltt);
  put(sigtilde, off_sigtilde, lst);
}

SystemState zero_state(const DiscreteSpaces& s) {
  SystemState st;
  st.t = Eigen::VectorXd::Zero(s.t.n_dofs);
  st.u = Eigen::VectorXd::Zero(s.u.n_dofs);
  st.sigma = Eigen::VectorXd::Zero(s.sigma.n_dofs);
  st.phi = Eigen::VectorXd::Zero(s.phi.n_dofs);
  st.ttilde = Eigen::VectorXd::Zero(s.ttilde.n_dofs);
  st.sigtilde = Eigen::VectorXd::Zero(s.sigtilde.n_dofs);
  return st;
}

Eigen::VectorXd pack(const DiscreteSpaces& s, const SystemState& st) {
  if (st.t.size() != s.t.n_dofs || st.u.size() != s.u.n_dofs || st.sigma.size() != s.sigma.n_dofs ||
      st.phi.size() != s.phi.n_dofs || st.ttilde.size() != s.ttilde.n_dofs ||
      st.sigtilde.size() != s.sigtilde.n_dofs) {
    throw ParameterError("state does not match the discrete spaces");
  }
  Eigen::VectorXd x(s.n_total);
  x.segment(s.off_t, s.t.n_dofs) = st.t;
  x.segment(s.off_u, s.u.n_dofs) = st.u;
  x.segment(s.off_sigma, s.sigma.n_dofs) = st.sigma;
  x.segment(s.off_phi, s.phi.n_dofs) = st.phi;
  x.segment(s.off_ttilde, s.ttilde.n_dofs) = st.ttilde;
  x.segment(s.off_sigtilde, s.sigtilde.n_dofs) = st.sigtilde;
  x[s.idx_lambda_trsigma] = st.lambda_trsigma;
  x[s.idx_lambda_phi] = st.lambda_phimean;
  return x;
}

SystemState unpack(const DiscreteSpaces& s, const Eigen::VectorXd& x) {
  if (x.size() != s.n_total) throw ParameterError("vector does not match the discrete spaces");
  SystemState st;
  st.t = x.segment(s.off_t, s.t.n_dofs);
  st.u = x.segment(s.off_u, s.u.n_dofs);
  st.sigma = x.segment(s.off_sigma, s.sigma.n_dofs);
  st.phi = x.segment(s.off_phi, s.phi.n_dofs);
  st.ttilde = x.segment(s.off_ttilde, s.ttilde.n_dofs);
  st.sigtilde = x.segment(s.off_sigtilde, s.sigtilde.n_dofs);
  st.lambda_trsigma = x[s.idx_lambda_trsigma];
  st.lambda_phimean = x[s.idx_lambda_phi];
  return st;
}

Eigen::VectorXd gather(const DiscreteSpaces& s, const Eigen::VectorXd& x, int c) {
  std::vector<int> idx;
  s.cell_dofs(c, idx);
  Eigen::VectorXd local(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) local[i] = x[idx[i]];
  return local;
}

// ---------------------------------------------------------------------------

CellValues::CellValues(const DiscreteSpaces& s, const QuadratureRule& qr)
    : s_(&s), ref_points_(qr.points), ref_weights_(qr.weights) {
  tabulate();
}

CellValues::CellValues(const DiscreteSpaces& s, std::vector<Vec2> ref_points)
    : s_(&s), ref_points_(std::move(ref_points)), ref_weights_(ref_points_.size(), 0.0) {
  tabulate();
}

void CellValues::tabulate() {
  const int nq = size();
  const DGBasis& dg = dg_basis(s_->degree);
  const RTBasis& rt = rt_basis(s_->degree);
  ref_phi_.resize(s_->n, nq);
  ref_div_.resize(s_->m, nq);
  ref_grad_.resize(nq);
  ref_psi_.resize(nq);
  for (int q = 0; q < nq; ++q) {
    ref_phi_.col(q) = dg.values(ref_points_[q]);
    ref_grad_[q] = dg.gradients(ref_points_[q]);
    Eigen::VectorXd d;
    rt.eval(ref_points_[q], ref_psi_[q], d);
    ref_div_.col(q) = d;
  }
  x.resize(nq);
  JxW.resize(nq);
  grad.resize(nq);
  psi.resize(nq);
  phi = ref_phi_;
  div.resize(s_->m, nq);
}

void CellValues::reinit(int c) {
  cell_ = c;
  geo_ = cell_geometry(s_->mesh, c);
  const auto signs = s_->sigtilde.signs(c);
  const int m = s_->m;
  const Mat2 scaledJt = geo_.J.transpose() / geo_.detJ;
  for (int q = 0; q < size(); ++q) {
    x[q] = geo_.map(ref_points_[q]);
    JxW[q] = ref_weights_[q] * geo_.detJ;
    grad[q] = ref_grad_[q] * geo_.Jinv;
    psi[q] = ref_psi_[q] * scaledJt;
    for (int i = 0; i < m; ++i) {
      psi[q].row(i) *= signs[i];
      div(i, q) = signs[i] * ref_div_(i, q) / geo_.detJ;
    }
  }
}

PointValues CellValues::values(int q, const Eigen::VectorXd& local) const {
  const DiscreteSpaces& s = *s_;
  const int n = s.n, m = s.m;
  PointValues v;
  const auto ph = phi.col(q);
  const Eigen::MatrixX2d& g = grad[q];

  const double a = local.segment(s.lt, n).dot(ph);
  const double b = local.segment(s.lt + n, n).dot(ph);
  const double c = local.segment(s.lt + 2 * n, n).dot(ph);
  v.t << a, b, c, -a;
  for (int k = 0; k < 2; ++k) {
    const double da = local.segment(s.lt, n).dot(g.col(k));
    const double db = local.segment(s.lt + n, n).dot(g.col(k));
    const double dc = local.segment(s.lt + 2 * n, n).dot(g.col(k));
    v.grad_t[k] << da, db, dc, -da;
  }
  for (int r = 0; r < 2; ++r) {
    v.u[r] = local.segment(s.lu + r * n, n).dot(ph);
    v.grad_u.row(r) = local.segment(s.lu + r * n, n).transpose() * g;
    v.ttilde[r] = local.segment(s.ltt + r * n, n).dot(ph);
    v.grad_ttilde.row(r) = local.segment(s.ltt + r * n, n).transpose() * g;
    v.sigma.row(r) = local.segment(s.ls + r * m, m).transpose() * psi[q];
    v.div_sigma[r] = local.segment(s.ls + r * m, m).dot(div.col(q));
  }
  v.phi = local.segment(s.lp, n).dot(ph);
  v.grad_phi = (local.segment(s.lp, n).transpose() * g).transpose();
  v.sigtilde = (local.segment(s.lst, m).transpose() * psi[q]).transpose();
  v.div_sigtilde = local.segment(s.lst, m).dot(div.col(q));
  return v;
}

}  // namespace bioconv
