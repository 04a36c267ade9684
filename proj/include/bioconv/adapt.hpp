#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bioconv/estimator.hpp"
#include "bioconv/postproc.hpp"
#include "bioconv/problems.hpp"
#include "bioconv/solver.hpp"

namespace bioconv {

enum class MarkingStrategy { Dorfler, Maximum };

struct AmrConfig {
  int degree = 1;
  double dorfler_theta = 0.5;
  int max_levels = 8;
  long dof_budget = 2000000;
  double tol_theta = 0.0;  // stop once Theta < tol_theta
  MarkingStrategy strategy = MarkingStrategy::Dorfler;
  bool warm_start = true;
  SolverConfig solver;

  void validate() const;
};

struct AmrTrace {
  std::vector<ErrorRecord> records;
  std::vector<int> marked;            // marked macro cells after each level
  std::vector<double> wall_time;      // cumulative seconds
  std::vector<Triangulation> macro;   // macro mesh of each level
  bool completed = true;              // false if a solve failed to converge
};

/// Sum of bar theta^2 + hat theta^(4/3) over the children of each macro cell.
Eigen::VectorXd aggregate_to_macro(const IndicatorField& field, const MeshHierarchy& hierarchy);

/**
 * Smallest prefix of cells sorted by decreasing importance (ties: lower
 * index first) whose sum reaches theta times the total. Returns sorted cell
 * indices. All-zero input gives an empty set and a warning.
 */
std::vector<int> dorfler_mark(const Eigen::VectorXd& importance, double theta);

/// Cells with importance >= theta * max.
std::vector<int> maximum_mark(const Eigen::VectorXd& importance, double theta);

/// Locates points in a triangulation through a bucket grid.
class PointLocator {
 public:
  explicit PointLocator(const Triangulation& mesh);
  /// Cell containing x (best barycentric fit), or -1 outside the mesh.
  int locate(const Vec2& x) const;

 private:
  const Triangulation* mesh_;
  Vec2 lo_, hi_;
  int nx_ = 1, ny_ = 1;
  std::vector<std::vector<int>> buckets_;
};

/// Interpolates the discrete state x (on `from`) into the spaces `to`.
/// Points outside the old mesh take the value zero.
Eigen::VectorXd transfer_state(const Eigen::VectorXd& x, const DiscreteSpaces& from, const DiscreteSpaces& to);

/// Per-level observer: level index, spaces, solution, indicators.
using LevelCallback =
    std::function<void(int, const DiscreteSpaces&, const Eigen::VectorXd&, const IndicatorField&)>;

/**
 * Solve, estimate, mark and refine, starting from the problem's macro
 * mesh. Stops after max_levels, when N exceeds dof_budget, when Theta <
 * tol_theta, or when a solve does not converge (the trace is then partial
 * and `completed` is false).
 */
AmrTrace amr_loop(const ProblemSpec& problem, const AmrConfig& config, const LevelCallback& on_level = {});

}  // namespace bioconv
