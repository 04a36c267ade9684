#include "bioconv/adapt.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iostream>
#include <numeric>

#include "bioconv/interpolate.hpp"

namespace bioconv {

void AmrConfig::validate() const {
  if (!(dorfler_theta > 0.0 && dorfler_theta <= 1.0)) throw ParameterError("marking parameter must lie in (0,1]");
  if (degree < 1) throw ParameterError("degree must be at least 1");
  if (max_levels < 1) throw ParameterError("max_levels must be at least 1");
  solver.validate();
}

Eigen::VectorXd aggregate_to_macro(const IndicatorField& field, const MeshHierarchy& h) {
  const int nb = static_cast<int>(field.theta_bar_sq.size());
  if (nb != h.bary.n_cells() || static_cast<int>(h.child_of.size()) != nb) {
    throw HierarchyError("indicator field does not match the barycentric mesh");
  }
  Eigen::VectorXd out = Eigen::VectorXd::Zero(h.macro.n_cells());
  for (int c = 0; c < nb; ++c) {
    const int p = h.child_of[c];
    if (p < 0 || p >= h.macro.n_cells()) throw HierarchyError("barycentric cell " + std::to_string(c) + " has no parent");
    out[p] += field.theta_bar_sq[c] + field.theta_hat_pow[c];
  }
  return out;
}

std::vector<int> dorfler_mark(const Eigen::VectorXd& importance, double theta) {
  if (!(theta > 0.0 && theta <= 1.0)) throw ParameterError("marking parameter must lie in (0,1]");
  const int n = static_cast<int>(importance.size());
  for (int i = 0; i < n; ++i) {
    if (!(importance[i] >= 0.0)) throw ParameterError("importance values must be nonnegative");
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return importance[a] > importance[b]; });
  double total = 0.0;
  for (int i : order) total += importance[i];
  if (total == 0.0) {
    std::cerr << "warning: all marking indicators vanish, nothing marked\n";
    return {};
  }
  const double target = theta * total;
  std::vector<int> marked;
  double acc = 0.0;
  for (int i : order) {
    if (acc >= target) break;
    marked.push_back(i);
    acc += importance[i];
  }
  std::sort(marked.begin(), marked.end());
  return marked;
}

std::vector<int> maximum_mark(const Eigen::VectorXd& importance, double theta) {
  if (!(theta > 0.0 && theta <= 1.0)) throw ParameterError("marking parameter must lie in (0,1]");
  std::vector<int> marked;
  if (importance.size() == 0) return marked;
  const double mx = importance.maxCoeff();
  if (mx <= 0.0) {
    std::cerr << "warning: all marking indicators vanish, nothing marked\n";
    return marked;
  }
  for (int i = 0; i < importance.size(); ++i) {
    if (importance[i] >= theta * mx) marked.push_back(i);
  }
  return marked;
}

PointLocator::PointLocator(const Triangulation& mesh) : mesh_(&mesh) {
  lo_ = hi_ = mesh.vertex(0);
  for (const Vec2& v : mesh.vertices()) {
    lo_ = lo_.cwiseMin(v);
    hi_ = hi_.cwiseMax(v);
  }
  const int side = std::max(1, static_cast<int>(std::sqrt(mesh.n_cells() / 2.0)));
  nx_ = ny_ = side;
  buckets_.assign(static_cast<std::size_t>(nx_) * ny_, {});
  const Vec2 ext = (hi_ - lo_).cwiseMax(1e-300);
  auto cell_index = [&](double v, double lo, double len, int n) {
    return std::clamp(static_cast<int>((v - lo) / len * n), 0, n - 1);
  };
  for (int c = 0; c < mesh.n_cells(); ++c) {
    Vec2 a = mesh.vertex(mesh.cell(c)[0]), b = a;
    for (int k = 1; k < 3; ++k) {
      a = a.cwiseMin(mesh.vertex(mesh.cell(c)[k]));
      b = b.cwiseMax(mesh.vertex(mesh.cell(c)[k]));
    }
    const int i0 = cell_index(a[0], lo_[0], ext[0], nx_), i1 = cell_index(b[0], lo_[0], ext[0], nx_);
    const int j0 = cell_index(a[1], lo_[1], ext[1], ny_), j1 = cell_index(b[1], lo_[1], ext[1], ny_);
    for (int j = j0; j <= j1; ++j) {
      for (int i = i0; i <= i1; ++i) buckets_[static_cast<std::size_t>(j) * nx_ + i].push_back(c);
    }
  }
}

int PointLocator::locate(const Vec2& x) const {
  const Vec2 ext = (hi_ - lo_).cwiseMax(1e-300);
  const int i = static_cast<int>((x[0] - lo_[0]) / ext[0] * nx_);
  const int j = static_cast<int>((x[1] - lo_[1]) / ext[1] * ny_);
  if (i < 0 || j < 0 || i > nx_ || j > ny_) return -1;
  const auto& bucket = buckets_[static_cast<std::size_t>(std::min(j, ny_ - 1)) * nx_ + std::min(i, nx_ - 1)];
  int best = -1;
  double best_min = -1e-10;
  for (int c : bucket) {
    const double m = barycentric_coordinates(*mesh_, c, x).minCoeff();
    if (m > best_min) {
      best_min = m;
      best = c;
    }
  }
  return best;
}

Eigen::VectorXd transfer_state(const Eigen::VectorXd& x, const DiscreteSpaces& from, const DiscreteSpaces& to) {
  if (from.degree != to.degree) throw ParameterError("transfer between different degrees");
  const PointLocator loc(from.mesh);
  const SystemState old = unpack(from, x);
  auto field = [&](const Eigen::VectorXd& coeffs, const DofMap& dm) -> Field {
    return [&, coeffs_ptr = &coeffs, dm_ptr = &dm](const Vec2& p) -> Eigen::VectorXd {
      const int c = loc.locate(p);
      if (c < 0) return Eigen::VectorXd::Zero(value_size(dm_ptr->family.kind));
      return evaluate(*coeffs_ptr, *dm_ptr, from.mesh, c, cell_geometry(from.mesh, c).pull(p));
    };
  };
  SystemState st;
  st.t = interpolate(field(old.t, from.t), to.t, to.mesh);
  st.u = interpolate(field(old.u, from.u), to.u, to.mesh);
  st.sigma = interpolate(field(old.sigma, from.sigma), to.sigma, to.mesh);
  st.phi = interpolate(field(old.phi, from.phi), to.phi, to.mesh);
  st.ttilde = interpolate(field(old.ttilde, from.ttilde), to.ttilde, to.mesh);
  st.sigtilde = interpolate(field(old.sigtilde, from.sigtilde), to.sigtilde, to.mesh);
  st.lambda_trsigma = old.lambda_trsigma;
  st.lambda_phimean = old.lambda_phimean;
  return pack(to, st);
}

AmrTrace amr_loop(const ProblemSpec& problem, const AmrConfig& config, const LevelCallback& on_level) {
  config.validate();
  AmrTrace trace;
  Triangulation macro = problem.domain();
  std::optional<DiscreteSpaces> prev_spaces;
  Eigen::VectorXd prev_x;
  const auto t0 = std::chrono::steady_clock::now();
  for (int level = 0; level < config.max_levels; ++level) {
    const MeshHierarchy h = barycentric_refine(macro);
    const DiscreteSpaces s = build_spaces(h.bary, config.degree);
    Eigen::VectorXd x0 = Eigen::VectorXd::Zero(s.n_total);
    if (config.warm_start && prev_spaces) x0 = transfer_state(prev_x, *prev_spaces, s);
    SolveResult res = solve(x0, problem.data, s, config.solver);
    if (!res.report.converged && config.warm_start && prev_spaces) {
      res = solve(Eigen::VectorXd::Zero(s.n_total), problem.data, s, config.solver);
    }
    const IndicatorField ind = local_indicators(res.x, problem.data, s);
    ErrorRecord rec;
    if (problem.exact) rec = compute_errors(res.x, *problem.exact, s);
    rec.N = s.n_total;
    rec.h = s.mesh.max_diameter();
    rec.iterations = res.report.iterations;
    rec.converged = res.report.converged;
    rec.theta = ind.theta_global;
    rec.eff = problem.exact ? effectivity(rec.e_tot(), rec.theta) : 0.0;
    trace.records.push_back(rec);
    trace.macro.push_back(macro);
    trace.wall_time.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    if (on_level) on_level(level, s, res.x, ind);
    if (!res.report.converged) {
      trace.completed = false;
      trace.marked.push_back(0);
      break;
    }
    const bool last = level + 1 == config.max_levels || s.n_total >= config.dof_budget ||
                      rec.theta < config.tol_theta;
    if (last) {
      trace.marked.push_back(0);
      break;
    }
    const Eigen::VectorXd imp = aggregate_to_macro(ind, h);
    const std::vector<int> marked = config.strategy == MarkingStrategy::Dorfler
                                        ? dorfler_mark(imp, config.dorfler_theta)
                                        : maximum_mark(imp, config.dorfler_theta);
    trace.marked.push_back(static_cast<int>(marked.size()));
    if (marked.empty()) break;
    macro = refine_marked(macro, marked);
    prev_spaces = s;
    prev_x = std::move(res.x);
  }
  fill_rates(trace.records);
  return trace;
}

}  // namespace bioconv
