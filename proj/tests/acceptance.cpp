// Acceptance suite. Runs the reference studies through the command-line
// binary (twice, for the determinism check), then prints one PASS/FAIL
// line per criterion. Exit status is the number of failed criteria.
//
// usage: acceptance <bioconv binary> <unit test dir> <work dir>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bioconv/estimator.hpp"
#include "bioconv/postproc.hpp"
#include "bioconv/problems.hpp"
#include "bioconv/solver.hpp"
#include "bioconv/study.hpp"

using namespace bioconv;

namespace {

using Row = std::map<std::string, std::string>;

struct Study {
  std::string name;
  std::string args;
  std::vector<Row> rows;
  double seconds = 0.0;
  bool ran = false;
};

std::string bin, unit_dir, work;

double wall(const std::function<int()>& f, int* rc) {
  const auto t0 = std::chrono::steady_clock::now();
  *rc = f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int shell(const std::string& cmd) {
  std::cout << "  $ " << cmd << std::endl;
  const int st = std::system(cmd.c_str());
  return st;
}

std::string slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

// Runs `bioconv <args> --deterministic --out <work>/<name>.<tag>.csv`.
bool run_study(Study& s, const std::string& tag) {
  const std::string out = work + "/" + s.name + "." + tag + ".csv";
  const std::string log = work + "/" + s.name + "." + tag + ".log";
  int rc = 0;
  const double t = wall([&] { return shell(bin + " " + s.args + " --deterministic --out " + out + " 2> " + log); }, &rc);
  if (tag == "a") {
    s.seconds = t;
    std::ifstream is(out);
    if (is) s.rows = read_csv(is);
    s.ran = rc == 0;
  }
  return rc == 0;
}

double num(const Row& r, const std::string& k) {
  const auto it = r.find(k);
  if (it == r.end() || it->second.empty()) return std::numeric_limits<double>::quiet_NaN();
  return std::stod(it->second);
}

double e_tot(const Row& r) {
  double s = 0.0;
  for (const char* k : {"e_u", "e_t", "e_sig", "e_phi", "e_tt", "e_st"}) s += num(r, k) * num(r, k);
  return std::sqrt(s);
}

// Least-squares slope of log e_tot against log N over the last three rows.
double tail_slope(const std::vector<Row>& rows) {
  const int n = static_cast<int>(rows.size());
  if (n < 3) return std::numeric_limits<double>::quiet_NaN();
  Eigen::Matrix<double, 3, 2> A;
  Eigen::Vector3d b;
  for (int i = 0; i < 3; ++i) {
    const Row& r = rows[n - 3 + i];
    A(i, 0) = std::log(num(r, "N"));
    A(i, 1) = 1.0;
    b[i] = std::log(e_tot(r));
  }
  return A.colPivHouseholderQr().solve(b)[0];
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

int failures = 0;

void report(int id, const std::string& title, bool pass, const std::string& detail) {
  std::cout << (pass ? "PASS" : "FAIL") << "  criterion " << id << ": " << title << "  [" << detail << "]"
            << std::endl;
  failures += pass ? 0 : 1;
}

bool in(double v, double lo, double hi) { return v >= lo && v <= hi; }

void criterion_smooth_l1(const Study& s) {
  std::string d;
  bool ok = s.ran && s.rows.size() == 4 && s.seconds <= 600.0;
  if (ok) {
    const Row& last = s.rows.back();
    for (const char* k : {"r_u", "r_phi", "r_tt", "r_st", "r_p"}) {
      const double r = num(last, k);
      ok = ok && in(r, 1.7, 2.3);
      d += std::string(k) + "=" + fmt("%.2f", r) + " ";
    }
    for (const char* k : {"r_t", "r_sig"}) {
      double prev = -1.0;
      d += std::string(k) + "=";
      for (std::size_t i = 1; i < s.rows.size(); ++i) {
        const double r = num(s.rows[i], k);
        ok = ok && r >= 1.0 && r >= prev;
        prev = r;
        d += fmt("%.2f", r) + (i + 1 < s.rows.size() ? "," : " ");
      }
    }
  }
  d += "time=" + fmt("%.0fs", s.seconds);
  report(1, "smooth convergence, degree 1", ok, d);
}

void criterion_smooth_l2(const Study& s) {
  std::string d;
  bool ok = s.ran && s.rows.size() == 3 && s.seconds <= 900.0;
  if (ok) {
    for (const char* k : {"r_phi", "r_tt", "r_st"}) {
      const double r = num(s.rows.back(), k);
      ok = ok && in(r, 2.6, 3.3);
      d += std::string(k) + "=" + fmt("%.2f", r) + " ";
    }
  }
  d += "time=" + fmt("%.0fs", s.seconds);
  report(2, "smooth convergence, degree 2", ok, d);
}

void criterion_newton(const Study& a, const Study& b) {
  bool ok = a.ran && b.ran;
  std::string d;
  for (const Study* s : {&a, &b}) {
    int lo = 1000, hi = 0;
    for (const Row& r : s->rows) {
      const int it = static_cast<int>(num(r, "it"));
      lo = std::min(lo, it);
      hi = std::max(hi, it);
    }
    ok = ok && !s->rows.empty() && hi <= 6 && hi - lo <= 2;
    d += s->name + " it in [" + std::to_string(lo) + "," + std::to_string(hi) + "] ";
  }
  report(3, "Newton iteration counts", ok, d);
}

void criterion_effectivity(const Study& s) {
  bool ok = s.ran && s.rows.size() >= 2;
  std::string d = "eff=";
  for (const Row& r : s.rows) {
    ok = ok && in(num(r, "eff"), 0.1, 1.0);
    d += fmt("%.3f", num(r, "eff")) + " ";
  }
  if (s.rows.size() >= 2) {
    const double e1 = num(s.rows.back(), "eff"), e0 = num(s.rows[s.rows.size() - 2], "eff");
    const double rel = std::abs(e1 - e0) / e1;
    ok = ok && rel <= 0.2;
    d += "rel change=" + fmt("%.3f", rel);
  }
  report(4, "effectivity stability", ok, d);
}

void criterion_adaptive(const Study& uni, const Study& ada) {
  bool ok = uni.ran && ada.ran && uni.seconds + ada.seconds <= 1200.0;
  const double su = tail_slope(uni.rows), sa = tail_slope(ada.rows);
  ok = ok && su > -0.45 && sa <= -0.45;
  // closest pair of levels with both N >= 1e4
  double best = std::numeric_limits<double>::infinity(), eu = 0.0, ea = 0.0, nu = 0.0, na = 0.0;
  for (const Row& u : uni.rows) {
    if (num(u, "N") < 1e4) continue;
    for (const Row& a : ada.rows) {
      if (num(a, "N") < 1e4) continue;
      const double dist = std::abs(std::log(num(a, "N") / num(u, "N")));
      if (dist < best) {
        best = dist;
        eu = e_tot(u);
        ea = e_tot(a);
        nu = num(u, "N");
        na = num(a, "N");
      }
    }
  }
  ok = ok && std::isfinite(best) && ea < eu;
  report(5, "adaptive superiority on the L-shape", ok,
         "uniform slope=" + fmt("%.3f", su) + " adaptive slope=" + fmt("%.3f", sa) + " matched N " +
             fmt("%.0f", nu) + "/" + fmt("%.0f", na) + " e_tot " + fmt("%.3e", eu) + "/" + fmt("%.3e", ea) +
             " time=" + fmt("%.0fs", uni.seconds + ada.seconds));
}

void criterion_patch() {
  const ProblemSpec p = patch_test();
  const DiscreteSpaces s = build_spaces(barycentric_refine(p.domain()).bary, 1);
  const SolveResult r = solve(Eigen::VectorXd::Zero(s.n_total), p.data, s);
  const double theta = local_indicators(r.x, p.data, s).theta_global;
  const double et = compute_errors(r.x, *p.exact, s).e_tot();
  report(6, "patch test exactness", r.report.converged && theta <= 1e-8 && et <= 1e-9,
         "theta=" + fmt("%.2e", theta) + " e_tot=" + fmt("%.2e", et));
}

void criterion_properties() {
  struct Suite {
    const char* binary;
    const char* filter;
  };
  const std::vector<Suite> suites = {
      {"test_fem", "quadrature exactness"},
      {"test_fem", "RT normal-trace continuity"},
      {"test_forms", "assembled convective forms are skew"},
      {"test_forms", "Jacobian matches central differences"},
      {"test_postproc", "pressure*"},
      {"test_postproc", "convergence_rate algebra"},
      {"test_adapt", "dorfler_mark is minimal on random vectors"},
      {"test_mesh", "MSH loader fixtures"},
  };
  bool ok = true;
  std::string d;
  double total = 0.0;
  for (const Suite& s : suites) {
    int rc = 0;
    total += wall(
        [&] {
          return shell(unit_dir + "/" + s.binary + " --test-case=\"" + s.filter + "\" --no-version > " + work +
                       "/props.log 2>&1");
        },
        &rc);
    if (rc != 0) {
      ok = false;
      d += std::string("failed: ") + s.filter + "; ";
    }
  }
  ok = ok && total < 60.0;
  report(7, "property suites", ok, d + std::to_string(suites.size()) + " suites in " + fmt("%.1fs", total));
}

void criterion_determinism(std::vector<Study*> studies) {
  bool ok = true;
  std::string d;
  for (Study* s : studies) {
    const bool second = run_study(*s, "b");
    const std::string a = slurp(work + "/" + s->name + ".a.csv");
    const std::string b = slurp(work + "/" + s->name + ".b.csv");
    const bool same = second && !a.empty() && a == b;
    ok = ok && same;
    d += s->name + (same ? " identical " : " differs ");
  }
  report(8, "deterministic output", ok, d);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 4) {
    std::cerr << "usage: acceptance <bioconv binary> <unit test dir> <work dir>\n";
    return 2;
  }
  bin = argv[1];
  unit_dir = argv[2];
  work = argv[3];
  shell("mkdir -p " + work);

  Study l1{"example1_l1", "converge problem=example1 degree=1 levels=4"};
  Study l2{"example1_l2", "converge problem=example1 degree=2 levels=3"};
  Study lu{"lshape_uniform", "converge problem=lshape degree=1 levels=4"};
  Study la{"lshape_adaptive", "adapt problem=lshape degree=1 dorfler_theta=0.5 levels=30 dof_budget=60000"};
  for (Study* s : {&l1, &l2, &lu, &la}) run_study(*s, "a");

  std::cout << "\n";
  criterion_smooth_l1(l1);
  criterion_smooth_l2(l2);
  criterion_newton(l1, l2);
  criterion_effectivity(l1);
  criterion_adaptive(lu, la);
  criterion_patch();
  criterion_properties();
  criterion_determinism({&l1, &lu, &la});

  std::cout << "\n" << (8 - failures) << "/8 criteria passed" << std::endl;
  return failures;
}
