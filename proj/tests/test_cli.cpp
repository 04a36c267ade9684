#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "bioconv/study.hpp"

using namespace bioconv;

namespace {

std::string write_temp(const std::string& name, const std::string& text) {
  std::ofstream os(name);
  os << text;
  return name;
}

}  // namespace

TEST_CASE("assignments") {
  RunConfig cfg;
  apply_assignment(cfg, "problem = lshape");
  apply_assignment(cfg, "degree=2");
  apply_assignment(cfg, "mode=adaptive");
  apply_assignment(cfg, "dorfler_theta=0.3");
  apply_assignment(cfg, "marking=maximum");
  apply_assignment(cfg, "solver=picard");
  apply_assignment(cfg, "warm_start=false");
  apply_assignment(cfg, "dof_budget=1e5");
  CHECK(cfg.problem == "lshape");
  CHECK(cfg.degree == 2);
  CHECK(cfg.mode == RunMode::Adaptive);
  CHECK(cfg.dorfler_theta == 0.3);
  CHECK(cfg.marking == MarkingStrategy::Maximum);
  CHECK(cfg.linearization == Linearization::Picard);
  CHECK_FALSE(cfg.warm_start);
  CHECK(cfg.dof_budget == 100000);
  CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("bad assignments") {
  RunConfig cfg;
  CHECK_THROWS_AS(apply_assignment(cfg, "colour=red"), ParameterError);
  CHECK_THROWS_AS(apply_assignment(cfg, "degree"), ParameterError);
  CHECK_THROWS_AS(apply_assignment(cfg, "degree=two"), ParameterError);
  CHECK_THROWS_AS(apply_assignment(cfg, "degree=1.5"), ParameterError);
  CHECK_THROWS_AS(apply_assignment(cfg, "problem=circle"), ParameterError);
  CHECK_THROWS_AS(apply_assignment(cfg, "warm_start=maybe"), ParameterError);
  cfg.degree = 0;
  CHECK_THROWS_AS(cfg.validate(), ParameterError);
  cfg = RunConfig{};
  cfg.dorfler_theta = 1.5;
  CHECK_THROWS_AS(cfg.validate(), ParameterError);
}

TEST_CASE("every advertised key is accepted") {
  RunConfig cfg;
  for (const std::string& k : config_keys()) {
    std::string v = "1";
    if (k == "problem") v = "patch";
    if (k == "mode") v = "single";
    if (k == "marking") v = "dorfler";
    if (k == "solver") v = "newton";
    if (k == "dorfler_theta") v = "0.5";
    CHECK_NOTHROW(apply_setting(cfg, k, v));
  }
}

TEST_CASE("config file: comments, blanks and line numbers") {
  RunConfig cfg;
  const std::string good = write_temp("test_cli_good.cfg", "# study\nproblem = patch\n\nlevels=2  # two\n");
  load_config(cfg, good);
  CHECK(cfg.problem == "patch");
  CHECK(cfg.levels == 2);

  const std::string bad = write_temp("test_cli_bad.cfg", "problem=patch\n\nunknown_key=3\n");
  try {
    load_config(cfg, bad);
    FAIL("expected FormatError");
  } catch (const FormatError& e) {
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_AS(load_config(cfg, "does_not_exist.cfg"), ParameterError);
  std::remove(good.c_str());
  std::remove(bad.c_str());
}

TEST_CASE("CSV header and empty table") {
  std::ostringstream os;
  write_csv({}, os);
  CHECK(os.str() == std::string(kCsvHeader) + "\n");
  CHECK(std::string(kCsvHeader) ==
        "N,h,e_u,r_u,e_t,r_t,e_sig,r_sig,e_phi,r_phi,e_tt,r_tt,e_st,r_st,e_p,r_p,theta,eff,it");
}

TEST_CASE("CSV round trip") {
  std::vector<ErrorRecord> recs(2);
  recs[0].N = 962;
  recs[0].h = std::sqrt(2.0);
  recs[0].e_u = 0.25;
  recs[0].iterations = 6;
  recs[1].N = 3794;
  recs[1].e_u = 0.0625;
  recs[1].r_u = 2.0;
  recs[1].theta = 1.5;
  recs[1].eff = 0.2;
  std::ostringstream os;
  write_csv(recs, os);
  std::istringstream is(os.str());
  const auto rows = read_csv(is);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].at("N") == "962");
  CHECK(rows[0].at("h") == "1.41421e+00");
  CHECK(rows[0].at("r_u").empty());
  CHECK(rows[0].at("it") == "6");
  CHECK(std::stod(rows[1].at("r_u")) == 2.0);
  CHECK(std::stod(rows[1].at("e_u")) == 0.0625);
  CHECK(rows[1].at("eff") == "2.00000e-01");
}

TEST_CASE("read_csv rejects ragged rows") {
  std::istringstream is("a,b\n1,2\n3\n");
  CHECK_THROWS_AS(read_csv(is), FormatError);
}

TEST_CASE("single solve of the patch problem") {
  RunConfig cfg;
  cfg.problem = "patch";
  cfg.mode = RunMode::Single;
  cfg.levels = 1;
  const StudyResult r = run(cfg);
  REQUIRE(r.records.size() == 1);
  CHECK(r.all_converged);
  CHECK(r.records[0].e_tot() < 1e-9);
  CHECK(r.records[0].theta < 1e-8);
}
