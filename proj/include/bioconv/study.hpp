#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "bioconv/adapt.hpp"
#include "bioconv/postproc.hpp"

namespace bioconv {

enum class RunMode { Uniform, Adaptive, Single };

/// Batch run settings, read from flat key=value text.
struct RunConfig {
  std::string problem = "example1";
  int degree = 1;
  RunMode mode = RunMode::Uniform;
  int levels = 4;
  double dorfler_theta = 0.5;
  MarkingStrategy marking = MarkingStrategy::Dorfler;
  long dof_budget = 2000000;
  double tol_theta = 0.0;
  double tol = 1e-7;
  int max_iter = 25;
  Linearization linearization = Linearization::Newton;
  bool warm_start = true;
  std::string out;             // CSV path, empty for stdout
  std::string indicators_out;  // per-cell indicator CSV of the last level
  bool deterministic = false;
  bool verbose = false;

  void validate() const;
  SolverConfig solver_config() const;
};

/// Applies one key=value assignment; throws ParameterError on unknown keys
/// or malformed values.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);

/// Parses "key=value" (surrounding blanks ignored).
void apply_assignment(RunConfig& cfg, const std::string& assignment);

/// Reads a config file: one key=value per line, '#' starts a comment.
/// Errors carry the line number.
void load_config(RunConfig& cfg, const std::string& path);

std::vector<std::string> config_keys();

struct StudyResult {
  std::vector<ErrorRecord> records;
  bool all_converged = true;
};

/// Uniform refinement study: level k uses the macro mesh refined k times.
/// Solves start from zero.
StudyResult run_uniform(const RunConfig& cfg, std::ostream* log = nullptr);

/// Adaptive loop with `levels` levels.
StudyResult run_adaptive(const RunConfig& cfg, std::ostream* log = nullptr);

/// One solve on the macro mesh refined (levels-1) times.
StudyResult run_single(const RunConfig& cfg, std::ostream* log = nullptr);

StudyResult run(const RunConfig& cfg, std::ostream* log = nullptr);

extern const char* const kCsvHeader;

/// Table rows: floats as %.5e, missing rates empty.
void write_csv(const std::vector<ErrorRecord>& records, std::ostream& os);
void write_csv(const std::vector<ErrorRecord>& records, const std::string& path);

/// Parses a CSV produced by write_csv (used for round-trip checks).
std::vector<std::map<std::string, std::string>> read_csv(std::istream& is);

}  // namespace bioconv
