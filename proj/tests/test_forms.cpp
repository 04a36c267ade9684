#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "bioconv/forms.hpp"
#include "bioconv/postproc.hpp"
#include "bioconv/problems.hpp"
#include "bioconv/solver.hpp"

using namespace bioconv;

namespace {

Eigen::VectorXd random_vector(int n, std::mt19937& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = u(rng);
  return v;
}

DiscreteSpaces small_spaces(int degree) {
  return build_spaces(barycentric_refine(build_rectangle(-1, -1, 1, 1, 2, 2)).bary, degree);
}

double fd_mismatch(const ModelData& data, const DiscreteSpaces& s, unsigned seed) {
  std::mt19937 rng(seed);
  const Eigen::VectorXd x = random_vector(s.n_total, rng, 0.5);
  const Eigen::VectorXd d = random_vector(s.n_total, rng);
  const SparseSystem sys = assemble_jacobian(x, data, s);
  const double eps = 1e-6;
  const Eigen::VectorXd fd =
      (assemble_residual(Eigen::VectorXd(x + eps * d), data, s) - assemble_residual(Eigen::VectorXd(x - eps * d), data, s)) /
      (2.0 * eps);
  const Eigen::VectorXd jd = sys.jacobian * d;
  return (fd - jd).norm() / jd.norm();
}

}  // namespace

TEST_CASE("zero state with zero data has zero residual") {
  const ProblemSpec z = zero_problem();
  const DiscreteSpaces s = small_spaces(1);
  const Eigen::VectorXd r = assemble_residual(Eigen::VectorXd(Eigen::VectorXd::Zero(s.n_total)), z.data, s);
  CHECK(r.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("Jacobian matches central differences") {
  for (int degree : {1, 2}) {
    const DiscreteSpaces s = small_spaces(degree);
    for (const char* profile : {"exp-decay", "constant(0.01)"}) {
      ProblemSpec p = example1_square();
      const ViscosityProfile vp = eval_viscosity_profile(profile);
      p.data.mu = vp.mu;
      p.data.dmu = vp.dmu;
      for (unsigned seed : {1u, 2u}) {
        CAPTURE(degree);
        CAPTURE(profile);
        CHECK(fd_mismatch(p.data, s, seed) <= 1e-6);
      }
    }
  }
}

TEST_CASE("Picard operator is the frozen-coefficient linearization") {
  // with t = u = t~ = phi = 0 and constant viscosity the two linearizations agree
  const DiscreteSpaces s = small_spaces(1);
  ProblemSpec p = patch_test();
  std::mt19937 rng(5);
  Eigen::VectorXd x = random_vector(s.n_total, rng);
  x.head(s.off_sigma).setZero();
  x.segment(s.off_ttilde, s.ttilde.n_dofs).setZero();
  x.segment(s.off_phi, s.phi.n_dofs).setZero();
  const SparseMatrix a = assemble_jacobian(x, p.data, s, Linearization::Newton).jacobian;
  const SparseMatrix b = assemble_jacobian(x, p.data, s, Linearization::Picard).jacobian;
  CHECK(SparseMatrix(a - b).norm() <= 1e-12 * a.norm());
}

TEST_CASE("constant-viscosity (t,u) block does not depend on the state") {
  const DiscreteSpaces s = small_spaces(1);
  ProblemSpec p = patch_test();
  p.data.gamma = 0.0;
  std::mt19937 rng(3);
  Eigen::VectorXd x1 = Eigen::VectorXd::Zero(s.n_total), x2 = Eigen::VectorXd::Zero(s.n_total);
  // only sigma/phi-side unknowns vary; the (t,t) block is then state independent
  x1.segment(s.off_sigma, s.sigma.n_dofs) = random_vector(s.sigma.n_dofs, rng);
  x2.segment(s.off_phi, s.phi.n_dofs) = random_vector(s.phi.n_dofs, rng);
  const Eigen::MatrixXd a = Eigen::MatrixXd(assemble_jacobian(x1, p.data, s).jacobian).topLeftCorner(s.off_sigma, s.off_sigma);
  const Eigen::MatrixXd b = Eigen::MatrixXd(assemble_jacobian(x2, p.data, s).jacobian).topLeftCorner(s.off_sigma, s.off_sigma);
  CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-13 * a.cwiseAbs().maxCoeff());
}

TEST_CASE("multiplier coupling is symmetric and equals the trace integrals") {
  const DiscreteSpaces s = small_spaces(1);
  const ProblemSpec p = example1_square();
  const Eigen::MatrixXd J = Eigen::MatrixXd(assemble_jacobian(Eigen::VectorXd(Eigen::VectorXd::Zero(s.n_total)), p.data, s).jacobian);
  const int l1 = s.idx_lambda_trsigma, l2 = s.idx_lambda_phi;
  double total_phi = 0.0;
  for (int i = 0; i < s.n_total; ++i) {
    if (i >= s.off_sigma && i < s.off_sigma + s.sigma.n_dofs) CHECK(J(i, l1) == doctest::Approx(J(l1, i)).epsilon(1e-14));
    if (i >= s.off_phi && i < s.off_phi + s.phi.n_dofs) {
      CHECK(J(i, l2) == doctest::Approx(J(l2, i)).epsilon(1e-14));
      total_phi += J(l2, i);
    }
  }
  CHECK(J(l1, l1) == 0.0);
  CHECK(J(l2, l2) == 0.0);
  // interpolant of 1 in the orthonormal basis integrates to |Omega|
  const Eigen::VectorXd one = interpolate_exact(
      {[](const Vec2&) { return Vec2::Zero(); }, [](const Vec2&) { return Mat2::Zero(); },
       [](const Vec2&) { return Mat2::Identity(); }, [](const Vec2&) { return Vec2::Zero(); },
       [](const Vec2&) { return 0.0; }, [](const Vec2&) { return 1.0; }, [](const Vec2&) { return Vec2::Zero(); },
       [](const Vec2&) { return Vec2::Zero(); }, [](const Vec2&) { return 0.0; }},
      s);
  CHECK(J.row(l2).dot(one) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(J.row(l1).dot(one) == doctest::Approx(8.0).epsilon(1e-12));
  CHECK(total_phi != 0.0);
}

TEST_CASE("assembled convective forms are skew") {
  for (int degree : {1, 2}) {
    const DiscreteSpaces s = small_spaces(degree);
    std::mt19937 rng(11 + degree);
    for (int trial = 0; trial < 3; ++trial) {
      const Eigen::VectorXd w = random_vector(s.n_total, rng, 3.0);
      const SparseMatrix C = convective_matrix(s, w);
      Eigen::VectorXd v = random_vector(s.n_total, rng);
      CHECK(C.norm() > 0.0);
      // flow pair and concentration pair separately
      Eigen::VectorXd vf = Eigen::VectorXd::Zero(s.n_total), vc = Eigen::VectorXd::Zero(s.n_total);
      vf.head(s.off_sigma) = v.head(s.off_sigma);
      vc.segment(s.off_phi, s.phi.n_dofs + s.ttilde.n_dofs) = v.segment(s.off_phi, s.phi.n_dofs + s.ttilde.n_dofs);
      for (const Eigen::VectorXd* z : {&vf, &vc}) {
        const Eigen::VectorXd Cz = C * *z;
        const double scale = C.norm() * z->squaredNorm();
        CHECK(std::abs(z->dot(Cz)) <= 1e-12 * scale);
      }
    }
  }
}

TEST_CASE("essential sigma~ dofs are the boundary facet moments") {
  const DiscreteSpaces s = small_spaces(2);
  ProblemSpec z = zero_problem();
  const EssentialData e0 = apply_sigtilde_normal_data(s, z.data);
  int nb = 0;
  for (const Facet& f : s.mesh.facets()) nb += f.is_boundary();
  CHECK(static_cast<int>(e0.dofs.size()) == nb * 3);
  for (double v : e0.values) CHECK(v == 0.0);
  const int facet_block = s.mesh.n_facets() * 3;
  for (int d : e0.dofs) {
    CHECK(d >= s.off_sigtilde);
    CHECK(d < s.off_sigtilde + facet_block);
  }
  // data moments agree with the interpolant's boundary moments
  const ProblemSpec p = example1_square();
  const EssentialData e1 = apply_sigtilde_normal_data(s, p.data);
  const Eigen::VectorXd xi = interpolate_exact(*p.exact, s);
  for (std::size_t i = 0; i < e1.dofs.size(); ++i) CHECK(xi[e1.dofs[i]] == doctest::Approx(e1.values[i]).epsilon(1e-12));
}

TEST_CASE("patch test: exact solution lies in the spaces") {
  const ProblemSpec p = patch_test();
  const DiscreteSpaces s = small_spaces(1);
  const Eigen::VectorXd xi = interpolate_exact(*p.exact, s);
  const Eigen::VectorXd r = assemble_residual(xi, p.data, s);
  CHECK(r.cwiseAbs().maxCoeff() <= 1e-9);

  const SolveResult res = solve(Eigen::VectorXd::Zero(s.n_total), p.data, s);
  CHECK(res.report.converged);
  Eigen::VectorXd diff = res.x - xi;
  diff[s.idx_lambda_trsigma] = 0.0;
  diff[s.idx_lambda_phi] = 0.0;
  CHECK(diff.cwiseAbs().maxCoeff() <= 1e-9);
  CHECK(std::abs(res.x[s.idx_lambda_trsigma]) <= 1e-9);
  CHECK(std::abs(res.x[s.idx_lambda_phi]) <= 1e-9);
}

TEST_CASE("viscosity must stay positive") {
  const DiscreteSpaces s = small_spaces(1);
  ProblemSpec p = patch_test();
  p.data.mu = [](double v) { return v; };
  p.data.dmu = [](double) { return 1.0; };
  p.data.alpha = 0.0;
  CHECK_THROWS_AS(assemble_residual(Eigen::VectorXd(Eigen::VectorXd::Zero(s.n_total)), p.data, s), ModelError);
}

TEST_CASE("mismatched vector length is rejected") {
  const DiscreteSpaces s = small_spaces(1);
  const ProblemSpec p = patch_test();
  CHECK_THROWS_AS(assemble_residual(Eigen::VectorXd(Eigen::VectorXd::Zero(5)), p.data, s), ParameterError);
}
