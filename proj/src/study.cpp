#include "bioconv/study.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "bioconv/estimator.hpp"

namespace bioconv {

const char* const kCsvHeader =
    "N,h,e_u,r_u,e_t,r_t,e_sig,r_sig,e_phi,r_phi,e_tt,r_tt,e_st,r_st,e_p,r_p,theta,eff,it";

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& v) {
  std::istringstream is(v);
  T out{};
  is >> out;
  if (is.fail() || !is.eof()) throw ParameterError("bad value '" + v + "' for " + key);
  return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw ParameterError("bad value '" + v + "' for " + key);
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.5e", v);
  return buf;
}

std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }

void log_record(std::ostream* log, int level, const ErrorRecord& r) {
  if (!log) return;
  char buf[256];
  std::snprintf(buf, sizeof buf, "level %d: N=%ld h=%.3e e_tot=%.4e theta=%.4e eff=%.3f it=%d%s\n", level, r.N, r.h,
                r.e_tot(), r.theta, r.eff, r.iterations, r.converged ? "" : " (not converged)");
  *log << buf << std::flush;
}

ErrorRecord level_record(const ProblemSpec& p, const DiscreteSpaces& s, const SolveResult& res,
                         const IndicatorField& ind) {
  ErrorRecord rec;
  if (p.exact) rec = compute_errors(res.x, *p.exact, s);
  rec.N = s.n_total;
  rec.h = s.mesh.max_diameter();
  rec.iterations = res.report.iterations;
  rec.converged = res.report.converged;
  rec.theta = ind.theta_global;
  rec.eff = p.exact ? effectivity(rec.e_tot(), rec.theta) : 0.0;
  return rec;
}

}  // namespace

void RunConfig::validate() const {
  if (degree < 1) throw ParameterError("degree must be at least 1");
  if (degree > 4) throw ParameterError("degree above 4 is not supported");
  if (levels < 1) throw ParameterError("levels must be at least 1");
  if (!(dorfler_theta > 0.0 && dorfler_theta <= 1.0)) throw ParameterError("dorfler_theta must lie in (0,1]");
  solver_config().validate();
}

SolverConfig RunConfig::solver_config() const {
  SolverConfig sc;
  sc.tol = tol;
  sc.max_iter = max_iter;
  sc.mode = linearization;
  return sc;
}

std::vector<std::string> config_keys() {
  return {"problem", "degree",    "mode",      "levels",     "dorfler_theta", "marking",
          "dof_budget", "tol_theta", "tol",   "max_iter",   "solver",        "warm_start",
          "out",     "indicators_out", "deterministic", "verbose"};
}

void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "problem") {
    make_problem(value);  // validates the name
    cfg.problem = value;
  } else if (key == "degree") {
    cfg.degree = parse_number<int>(key, value);
  } else if (key == "mode") {
    if (value == "uniform") cfg.mode = RunMode::Uniform;
    else if (value == "adaptive") cfg.mode = RunMode::Adaptive;
    else if (value == "single" || value == "single-solve") cfg.mode = RunMode::Single;
    else throw ParameterError("unknown mode '" + value + "'");
  } else if (key == "levels") {
    cfg.levels = parse_number<int>(key, value);
  } else if (key == "dorfler_theta") {
    cfg.dorfler_theta = parse_number<double>(key, value);
  } else if (key == "marking") {
    if (value == "dorfler") cfg.marking = MarkingStrategy::Dorfler;
    else if (value == "maximum") cfg.marking = MarkingStrategy::Maximum;
    else throw ParameterError("unknown marking '" + value + "'");
  } else if (key == "dof_budget") {
    cfg.dof_budget = static_cast<long>(parse_number<double>(key, value));
  } else if (key == "tol_theta") {
    cfg.tol_theta = parse_number<double>(key, value);
  } else if (key == "tol") {
    cfg.tol = parse_number<double>(key, value);
  } else if (key == "max_iter") {
    cfg.max_iter = parse_number<int>(key, value);
  } else if (key == "solver") {
    if (value == "newton") cfg.linearization = Linearization::Newton;
    else if (value == "picard") cfg.linearization = Linearization::Picard;
    else throw ParameterError("unknown solver '" + value + "'");
  } else if (key == "warm_start") {
    cfg.warm_start = parse_bool(key, value);
  } else if (key == "out") {
    cfg.out = value;
  } else if (key == "indicators_out") {
    cfg.indicators_out = value;
  } else if (key == "deterministic") {
    cfg.deterministic = parse_bool(key, value);
  } else if (key == "verbose") {
    cfg.verbose = parse_bool(key, value);
  } else {
    throw ParameterError("unknown configuration key '" + key + "'");
  }
}

void apply_assignment(RunConfig& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ParameterError("expected key=value, got '" + assignment + "'");
  apply_setting(cfg, trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

void load_config(RunConfig& cfg, const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ParameterError("cannot open config file " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    try {
      apply_assignment(cfg, line);
    } catch (const ParameterError& e) {
      throw FormatError(path + ": " + e.what(), lineno);
    }
  }
}

StudyResult run_uniform(const RunConfig& cfg, std::ostream* log) {
  cfg.validate();
  const ProblemSpec p = make_problem(cfg.problem);
  StudyResult out;
  Triangulation macro = p.domain();
  for (int level = 0; level < cfg.levels; ++level) {
    if (p.uniform_level) macro = p.uniform_level(level);
    else if (level > 0) macro = refine_uniform(macro);
    const MeshHierarchy h = barycentric_refine(macro);
    const DiscreteSpaces s = build_spaces(h.bary, cfg.degree);
    const SolveResult res = solve(Eigen::VectorXd::Zero(s.n_total), p.data, s, cfg.solver_config());
    const IndicatorField ind = local_indicators(res.x, p.data, s);
    out.records.push_back(level_record(p, s, res, ind));
    log_record(log, level, out.records.back());
    if (level + 1 == cfg.levels && !cfg.indicators_out.empty()) write_indicators_csv(ind, cfg.indicators_out);
    if (!res.report.converged) {
      out.all_converged = false;
      break;
    }
  }
  fill_rates(out.records);
  return out;
}

StudyResult run_adaptive(const RunConfig& cfg, std::ostream* log) {
  cfg.validate();
  const ProblemSpec p = make_problem(cfg.problem);
  AmrConfig ac;
  ac.degree = cfg.degree;
  ac.dorfler_theta = cfg.dorfler_theta;
  ac.max_levels = cfg.levels;
  ac.dof_budget = cfg.dof_budget;
  ac.tol_theta = cfg.tol_theta;
  ac.strategy = cfg.marking;
  ac.warm_start = cfg.warm_start;
  ac.solver = cfg.solver_config();
  IndicatorField last;
  const AmrTrace tr = amr_loop(p, ac, [&](int level, const DiscreteSpaces&, const Eigen::VectorXd&,
                                          const IndicatorField& ind) {
    last = ind;
    (void)level;
  });
  for (std::size_t i = 0; i < tr.records.size(); ++i) log_record(log, static_cast<int>(i), tr.records[i]);
  if (!cfg.indicators_out.empty() && last.theta_bar_sq.size() > 0) write_indicators_csv(last, cfg.indicators_out);
  return {tr.records, tr.completed};
}

StudyResult run_single(const RunConfig& cfg, std::ostream* log) {
  cfg.validate();
  const ProblemSpec p = make_problem(cfg.problem);
  Triangulation macro = p.domain();
  if (p.uniform_level) macro = p.uniform_level(cfg.levels - 1);
  else for (int level = 1; level < cfg.levels; ++level) macro = refine_uniform(macro);
  const MeshHierarchy h = barycentric_refine(macro);
  const DiscreteSpaces s = build_spaces(h.bary, cfg.degree);
  const SolveResult res = solve(Eigen::VectorXd::Zero(s.n_total), p.data, s, cfg.solver_config());
  const IndicatorField ind = local_indicators(res.x, p.data, s);
  StudyResult out;
  out.records.push_back(level_record(p, s, res, ind));
  out.all_converged = res.report.converged;
  log_record(log, cfg.levels - 1, out.records.back());
  if (!cfg.indicators_out.empty()) write_indicators_csv(ind, cfg.indicators_out);
  return out;
}

StudyResult run(const RunConfig& cfg, std::ostream* log) {
  switch (cfg.mode) {
    case RunMode::Uniform:
      return run_uniform(cfg, log);
    case RunMode::Adaptive:
      return run_adaptive(cfg, log);
    default:
      return run_single(cfg, log);
  }
}

void write_csv(const std::vector<ErrorRecord>& records, std::ostream& os) {
  os << kCsvHeader << "\n";
  for (const ErrorRecord& r : records) {
    os << r.N << ',' << fmt(r.h) << ',' << fmt(r.e_u) << ',' << fmt(r.r_u) << ',' << fmt(r.e_t) << ','
       << fmt(r.r_t) << ',' << fmt(r.e_sigma) << ',' << fmt(r.r_sigma) << ',' << fmt(r.e_phi) << ','
       << fmt(r.r_phi) << ',' << fmt(r.e_ttilde) << ',' << fmt(r.r_ttilde) << ',' << fmt(r.e_sigtilde) << ','
       << fmt(r.r_sigtilde) << ',' << fmt(r.e_p) << ',' << fmt(r.r_p) << ',' << fmt(r.theta) << ','
       << fmt(r.eff) << ',' << r.iterations << "\n";
  }
}

void write_csv(const std::vector<ErrorRecord>& records, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path);
  write_csv(records, os);
  os.flush();
  if (!os) throw std::runtime_error("write failed for " + path);
}

std::vector<std::map<std::string, std::string>> read_csv(std::istream& is) {
  std::vector<std::map<std::string, std::string>> rows;
  std::string line;
  if (!std::getline(is, line)) return rows;
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) header.push_back(cell);
  }
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      cells.push_back(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (cells.size() != header.size()) throw FormatError("wrong number of fields", lineno);
    std::map<std::string, std::string> row;
    for (std::size_t i = 0; i < header.size(); ++i) row[header[i]] = cells[i];
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace bioconv
