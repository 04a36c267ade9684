// Command-line front end: convergence and adaptive studies, single solves
// and self-checks.

#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

#include "bioconv/checks.hpp"
#include "bioconv/solver.hpp"
#include "bioconv/study.hpp"

namespace {

struct Common {
  std::string config;
  std::string out;
  bool deterministic = false;
  std::vector<std::string> overrides;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config, "key=value configuration file")->check(CLI::ExistingFile);
  sub->add_option("--out", c.out, "CSV output path (default: stdout)");
  sub->add_flag("--deterministic", c.deterministic, "single-threaded, reproducible run");
  sub->add_option("settings", c.overrides, "key=value overrides");
}

int run_study(const Common& c, bioconv::RunMode mode) {
  bioconv::RunConfig cfg;
  cfg.mode = mode;
  if (!c.config.empty()) bioconv::load_config(cfg, c.config);
  for (const std::string& kv : c.overrides) bioconv::apply_assignment(cfg, kv);
  cfg.mode = mode;
  if (!c.out.empty()) cfg.out = c.out;
  if (c.deterministic) cfg.deterministic = true;
  if (cfg.deterministic) bioconv::set_deterministic();

  const bioconv::StudyResult res = bioconv::run(cfg, &std::cerr);
  if (cfg.out.empty()) {
    bioconv::write_csv(res.records, std::cout);
  } else {
    bioconv::write_csv(res.records, cfg.out);
  }
  if (!res.all_converged) std::cerr << "error: nonlinear solver did not converge\n";
  return res.all_converged ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive mixed finite element solver for stationary bioconvection"};
  app.require_subcommand(1);
  Common conv, adapt, single;
  add_common(app.add_subcommand("converge", "uniform refinement study"), conv);
  add_common(app.add_subcommand("adapt", "adaptive refinement study"), adapt);
  add_common(app.add_subcommand("solve", "single solve"), single);
  auto* check = app.add_subcommand("check", "run quick self-checks");

  CLI11_PARSE(app, argc, argv);
  try {
    if (app.got_subcommand("converge")) return run_study(conv, bioconv::RunMode::Uniform);
    if (app.got_subcommand("adapt")) return run_study(adapt, bioconv::RunMode::Adaptive);
    if (app.got_subcommand("solve")) return run_study(single, bioconv::RunMode::Single);
    if (check->parsed()) {
      bioconv::set_deterministic();
      return bioconv::report_checks(bioconv::run_checks(), std::cout) ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
