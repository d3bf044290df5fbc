// Acceptance gate: eleven end-to-end checks against closed forms, brute-force
// search, boundary identities, Monte Carlo, and the command line binary.
// Prints one CRITERION line per check; exits nonzero when any fails.
//
// argv[1]: path to the CLI executable (used by the determinism check).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <Eigen/Eigenvalues>

#include "cclqg/agent.hpp"
#include "cclqg/allocation.hpp"
#include "cclqg/kalman.hpp"
#include "cclqg/linalg.hpp"
#include "cclqg/rate_distortion.hpp"
#include "cclqg/simulate.hpp"
#include "cclqg/system.hpp"

namespace {

using cclqg::Matrix;
using cclqg::Vector;

constexpr double kInf = std::numeric_limits<double>::infinity();

int g_failures = 0;
std::string g_detail;

void report(int n, bool pass, const char* description) {
  std::printf("CRITERION %d: %s — %s%s%s\n", n, pass ? "PASS" : "FAIL", description,
              (!pass && !g_detail.empty()) ? ": " : "",
              (!pass && !g_detail.empty()) ? g_detail.c_str() : "");
  if (!pass) ++g_failures;
  g_detail.clear();
}

void note(const std::string& s) {
  if (g_detail.empty()) g_detail = s;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

Matrix random_matrix(std::mt19937_64& rng, int r, int c) {
  std::normal_distribution<double> gauss;
  Matrix m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = gauss(rng);
  return m;
}

Matrix random_stable(std::mt19937_64& rng, int d, double rho) {
  Matrix g = random_matrix(rng, d, d);
  double radius = Eigen::EigenSolver<Matrix>(g, false).eigenvalues().cwiseAbs().maxCoeff();
  return g * (rho / std::max(radius, 1e-12));
}

Matrix random_spd(std::mt19937_64& rng, int d, double floor) {
  Matrix g = random_matrix(rng, d, d);
  return Matrix(g * g.transpose() + floor * Matrix::Identity(d, d));
}

cclqg::LqgSystem random_system(std::mt19937_64& rng, int d) {
  Matrix a = random_stable(rng, d, uniform(rng, 0.3, 0.95));
  Matrix c = random_matrix(rng, d, d);
  Matrix sw = random_spd(rng, d, 0.1);
  Matrix sv = random_spd(rng, d, 0.1);
  Matrix sigma0 = cclqg::solve_lyapunov(a, sw);
  return cclqg::make_system(a, c, sigma0, sw, sv);
}

// Stationary covariances of a scalar system, straight from the closed forms.
struct ScalarForms {
  double sigma, m;
};
ScalarForms scalar_forms(double a, double c, double s2w, double s2v) {
  double sigma = s2w / (1.0 - a * a);
  double b = (a * a - 1.0) * s2v - c * c * s2w;
  double m = (b + std::sqrt(b * b + 4.0 * a * a * c * c * s2w * s2v)) / (2.0 * a * a * c * c);
  return {sigma, m};
}

cclqg::GroupSpec scalar_group(const std::string& label, double a, double c, double s2w,
                              double s2v, int mult = 1) {
  cclqg::GroupSpec g;
  g.label = label;
  g.a = Matrix::Constant(1, 1, a);
  g.c = Matrix::Constant(1, 1, c);
  g.sw = Matrix::Constant(1, 1, s2w);
  g.sv = Matrix::Constant(1, 1, s2v);
  g.mult = mult;
  return g;
}

/* -------------------------------------------------------- criterion 1 ---- */
// Closed-form scalar stationary solution vs the matrix Riccati solver, and
// the reference instance a=0.95 with unit noises.

bool criterion1() {
  std::mt19937_64 rng(101);
  for (int i = 0; i < 1000; ++i) {
    double a = uniform(rng, 0.05, 0.995) * (uniform(rng, 0, 1) < 0.5 ? -1.0 : 1.0);
    double c = uniform(rng, 0.2, 3.0);
    double s2w = uniform(rng, 0.05, 5.0);
    double s2v = uniform(rng, 0.05, 5.0);
    cclqg::ScalarSteady s = cclqg::scalar_steady(a, c, s2w, s2v);
    Matrix p = cclqg::solve_dare(Matrix::Constant(1, 1, a), Matrix::Constant(1, 1, c),
                                 Matrix::Constant(1, 1, s2w), Matrix::Constant(1, 1, s2v));
    double rel = std::abs(s.p - p(0, 0)) / std::max(1.0, std::abs(p(0, 0)));
    if (rel > 1e-9) {
      note("relative gap " + fmt(rel) + " at a=" + fmt(a));
      return false;
    }
  }
  cclqg::ScalarSteady ref = cclqg::scalar_steady(0.95, 1.0, 1.0, 1.0);
  if (std::abs(ref.sigma - 10.256410) > 1e-5 || std::abs(ref.p - 1.548353) > 1e-5 ||
      std::abs(ref.m - 0.607591) > 1e-5) {
    note("reference instance gave (" + fmt(ref.sigma) + ", " + fmt(ref.p) + ", " + fmt(ref.m) +
         ")");
    return false;
  }
  return true;
}

/* -------------------------------------------------------- criterion 2 ---- */
// Scalar distortion-rate law d = e^{-2B} sigma^2 from the channel gains.

bool criterion2() {
  for (double lam : {0.5, 1.0, 3.7, 10.0})
    for (int i = 0; i <= 50; ++i) {
      double b = 0.1 * i;
      cclqg::ChannelGains g = cclqg::dr_gains(Matrix::Constant(1, 1, lam), b);
      double f = g.f(0, 0), psi = g.psi(0, 0);
      double realized = (1.0 - f) * (1.0 - f) * lam + psi;
      double want = std::exp(-2.0 * b) * lam;
      if (std::abs(realized - want) > 1e-12 || std::abs(g.distortion - want) > 1e-12) {
        note("B=" + fmt(b) + " lam=" + fmt(lam) + " realized " + fmt(realized) + " vs " +
             fmt(want));
        return false;
      }
    }
  return true;
}

/* -------------------------------------------------------- criterion 3 ---- */
// Water-filling vs brute-force budget splits on two modes.

bool criterion3() {
  std::mt19937_64 rng(303);
  for (int trial = 0; trial < 200; ++trial) {
    double l1 = uniform(rng, 0.1, 10.0), l2 = uniform(rng, 0.1, 10.0);
    double cap = uniform(rng, 0.05, 4.0);
    Vector lam(2);
    lam << l1, l2;
    cclqg::WaterFillResult wf = cclqg::water_fill(lam, cap);
    double best = kInf;
    for (int s = 0; s <= 10000; ++s) {
      double b1 = cap * (s * 1e-4);
      double d = l1 * std::exp(-2.0 * b1) + l2 * std::exp(-2.0 * (cap - b1));
      best = std::min(best, d);
    }
    if (best < wf.distortion - 1e-9) {
      note("grid beat water-filling by " + fmt(wf.distortion - best));
      return false;
    }
    double grid_error = 2.0 * (l1 + l2) * cap * 1e-4 + 1e-9;
    if (wf.distortion > best + grid_error) {
      note("water-filling worse than grid by " + fmt(wf.distortion - best));
      return false;
    }
  }
  return true;
}

/* -------------------------------------------------------- criterion 4 ---- */
// Boundary capacities: zero capacity costs tr(Sigma), infinite capacity
// costs tr(M) with exactly zero distortion.

bool criterion4() {
  std::mt19937_64 rng(404);
  for (int trial = 0; trial < 100; ++trial) {
    int d = 1 + static_cast<int>(rng() % 6);
    cclqg::LqgSystem sys = random_system(rng, d);
    cclqg::SteadyState ss = cclqg::steady_state(sys);
    cclqg::SteadyPredictor zero = cclqg::steady_predictor(ss, 0.0);
    double tr_sigma = ss.sigma.trace();
    if (std::abs(zero.cost - tr_sigma) > 1e-10 * std::max(1.0, tr_sigma)) {
      note("B=0 cost " + fmt(zero.cost) + " vs tr(Sigma) " + fmt(tr_sigma));
      return false;
    }
    cclqg::SteadyPredictor inf = cclqg::steady_predictor(ss, kInf);
    if (inf.gains.distortion != 0.0 || inf.cost != ss.m.trace()) {
      note("B=inf cost " + fmt(inf.cost) + " vs tr(M) " + fmt(ss.m.trace()) + ", distortion " +
           fmt(inf.gains.distortion));
      return false;
    }
  }
  return true;
}

/* -------------------------------------------------------- criterion 5 ---- */
// Scalar systems always satisfy the incremental construction conditions.

bool criterion5() {
  std::mt19937_64 rng(505);
  int failures = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    double a = uniform(rng, 0.05, 0.995) * (uniform(rng, 0, 1) < 0.5 ? -1.0 : 1.0);
    double c = uniform(rng, 0.2, 3.0);
    double s2w = uniform(rng, 0.05, 5.0);
    double s2v = uniform(rng, 0.05, 5.0);
    double cap = uniform(rng, 1e-3, 5.0);
    cclqg::LqgSystem sys =
        cclqg::make_system(Matrix::Constant(1, 1, a), Matrix::Constant(1, 1, c),
                           Matrix::Constant(1, 1, s2w / (1.0 - a * a)),
                           Matrix::Constant(1, 1, s2w), Matrix::Constant(1, 1, s2v));
    cclqg::PredictorSchedule sched = cclqg::predictor_schedule(sys, cap, 200);
    cclqg::ConditionReport rep = cclqg::check_c3l_conditions(sched, sys);
    if (!rep.overall) {
      ++failures;
      note("a=" + fmt(a) + " B=" + fmt(cap));
    }
  }
  if (failures > 0) note(std::to_string(failures) + " of 1000 systems failed");
  return failures == 0;
}

/* -------------------------------------------------------- criterion 6 ---- */
// Diagonal systems always satisfy the stationary construction conditions.

bool criterion6() {
  std::mt19937_64 rng(606);
  int failures = 0;
  const double caps[] = {0.1, 0.5, 1.0, 2.0, 5.0, 10.0};
  for (int trial = 0; trial < 200; ++trial) {
    int d = 2 + static_cast<int>(rng() % 9);
    Vector a(d), c(d), sw(d), sv(d);
    for (int i = 0; i < d; ++i) {
      a(i) = uniform(rng, 0.05, 0.99) * (uniform(rng, 0, 1) < 0.5 ? -1.0 : 1.0);
      c(i) = uniform(rng, 0.2, 2.0);
      sw(i) = uniform(rng, 0.1, 4.0);
      sv(i) = uniform(rng, 0.1, 4.0);
    }
    Vector sigma0 = sw.array() / (1.0 - a.array().square());
    cclqg::LqgSystem sys = cclqg::make_system(
        Matrix(a.asDiagonal()), Matrix(c.asDiagonal()), Matrix(sigma0.asDiagonal()),
        Matrix(sw.asDiagonal()), Matrix(sv.asDiagonal()));
    cclqg::SteadyState ss = cclqg::steady_state(sys);
    Matrix source = cclqg::symmetrize(ss.sigma - ss.m);
    for (double cap : caps) {
      cclqg::SsConditionReport rep =
          cclqg::check_ss_conditions(ss, cclqg::dr_gains(source, cap));
      if (!rep.overall) {
        ++failures;
        note("d=" + std::to_string(d) + " B=" + fmt(cap) + " residual " +
             fmt(rep.range_residual) + " witness " + fmt(rep.witness));
      }
    }
  }
  if (failures > 0) note(std::to_string(failures) + " condition checks failed");
  return failures == 0;
}

/* -------------------------------------------------------- criterion 7 ---- */
// Monte Carlo cost equality: constructed agent and oracle-access predictor
// both realize the analytic stationary cost, within three standard errors.

bool criterion7() {
  auto t0 = std::chrono::steady_clock::now();
  cclqg::LqgSystem sys =
      cclqg::make_system(Matrix::Constant(1, 1, 0.95), Matrix::Identity(1, 1),
                         Matrix::Constant(1, 1, 1.0 / (1.0 - 0.95 * 0.95)),
                         Matrix::Identity(1, 1), Matrix::Identity(1, 1));
  cclqg::SteadyState ss = cclqg::steady_state(sys);
  cclqg::SteadyPredictor sp = cclqg::steady_predictor(ss, 0.5);

  ScalarForms forms = scalar_forms(0.95, 1.0, 1.0, 1.0);
  double analytic = forms.m + std::exp(-2.0 * 0.5) * (forms.sigma - forms.m);
  if (std::abs(analytic - 4.157198) > 1e-5 || std::abs(sp.cost - analytic) > 1e-9) {
    note("analytic cost " + fmt(sp.cost) + " vs closed form " + fmt(analytic));
    return false;
  }

  auto agent = cclqg::make_agent_predictor(cclqg::build_ss_agent(ss, sp.gains), sp.cost);
  auto direct = cclqg::make_direct_predictor(sys, sp.gains, sp.cost);
  cclqg::EmpiricalReport ra = cclqg::run_experiment(sys, *agent, 1000, 10000, 20260822, 500);
  cclqg::EmpiricalReport rd = cclqg::run_experiment(sys, *direct, 1000, 10000, 20260822, 500);

  bool ok = true;
  if (std::abs(ra.timeavg_empirical - analytic) > 3.0 * ra.timeavg_se) {
    note("agent " + fmt(ra.timeavg_empirical) + " se " + fmt(ra.timeavg_se));
    ok = false;
  }
  if (ok && std::abs(rd.timeavg_empirical - analytic) > 3.0 * rd.timeavg_se) {
    note("direct " + fmt(rd.timeavg_empirical) + " se " + fmt(rd.timeavg_se));
    ok = false;
  }
  double gap_se = std::sqrt(ra.timeavg_se * ra.timeavg_se + rd.timeavg_se * rd.timeavg_se);
  if (ok && std::abs(ra.timeavg_empirical - rd.timeavg_empirical) > 3.0 * gap_se) {
    note("agent vs direct gap " + fmt(ra.timeavg_empirical - rd.timeavg_empirical));
    ok = false;
  }
  double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (seconds >= 60.0) {
    note("took " + fmt(seconds) + " s");
    ok = false;
  }
  return ok;
}

/* -------------------------------------------------------- criterion 8 ---- */
// Consumed capacity never exceeds the budget; it meets the budget exactly
// whenever every mode is active.

bool criterion8() {
  std::mt19937_64 rng(808);
  for (int trial = 0; trial < 50; ++trial) {
    int d = 1 + static_cast<int>(rng() % 6);
    cclqg::LqgSystem sys = random_system(rng, d);
    cclqg::SteadyState ss = cclqg::steady_state(sys);
    const double caps[] = {0.0, 0.3, 1.0, 3.0, uniform(rng, 0.0, 6.0), kInf};
    for (double cap : caps) {
      cclqg::SteadyPredictor sp = cclqg::steady_predictor(ss, cap);
      double used = cclqg::capacity_used(sp.gains);
      if (!(used <= cap + 1e-10)) {
        note("steady used " + fmt(used) + " vs B " + fmt(cap));
        return false;
      }
      bool all_active = true;
      for (bool a : sp.gains.active) all_active = all_active && a;
      if (all_active && std::isfinite(cap) && std::abs(used - cap) > 1e-10) {
        note("steady all-active used " + fmt(used) + " vs B " + fmt(cap));
        return false;
      }
    }
    double cap = uniform(rng, 0.1, 4.0);
    cclqg::PredictorSchedule sched = cclqg::predictor_schedule(sys, cap, 15);
    for (const cclqg::ChannelGains& g : sched.gains) {
      double used = cclqg::capacity_used(g);
      if (!(used <= cap + 1e-10)) {
        note("schedule used " + fmt(used) + " vs B " + fmt(cap));
        return false;
      }
      bool all_active = true;
      for (bool a : g.active) all_active = all_active && a;
      if (all_active && std::abs(used - cap) > 1e-10) {
        note("schedule all-active used " + fmt(used) + " vs B " + fmt(cap));
        return false;
      }
    }
  }
  return true;
}

/* -------------------------------------------------------- criterion 9 ---- */
// Coupled-vs-isolated allocation: over the feasible grid the capacity ratio
// exceeds 2 and decreases in B; infeasible points are flagged, and the flag
// agrees with the stationary condition check run directly per group.

bool criterion9() {
  cclqg::SystemStructure st;
  cclqg::GroupSpec blk;
  blk.label = "dim2";
  blk.a = (Matrix(2, 2) << 0.95, 0.05, 0.0, 0.95).finished();
  blk.c = Matrix::Identity(2, 2);
  blk.sw = Matrix::Identity(2, 2);
  blk.sv = Matrix::Identity(2, 2);
  st.groups.push_back(blk);
  st.groups.push_back(scalar_group("dim1", 0.95, 1.0, 1.0, 1.0));
  cclqg::LqgSystem sys = cclqg::build_structured(st);

  cclqg::LqgSystem blk_sys = cclqg::make_system(
      blk.a, blk.c, cclqg::solve_lyapunov(blk.a, blk.sw), blk.sw, blk.sv);
  cclqg::SteadyState blk_ss = cclqg::steady_state(blk_sys);
  Matrix blk_source = cclqg::symmetrize(blk_ss.sigma - blk_ss.m);
  cclqg::LqgSystem sc_sys = cclqg::make_system(
      Matrix::Constant(1, 1, 0.95), Matrix::Identity(1, 1),
      Matrix::Constant(1, 1, 1.0 / (1.0 - 0.95 * 0.95)), Matrix::Identity(1, 1),
      Matrix::Identity(1, 1));
  cclqg::SteadyState sc_ss = cclqg::steady_state(sc_sys);
  Matrix sc_source = cclqg::symmetrize(sc_ss.sigma - sc_ss.m);

  int infeasible = 0, feasible = 0;
  double prev_ratio = kInf;
  for (int i = 1; i <= 64; ++i) {
    double cap = 0.25 * i;
    cclqg::AllocationResult al = cclqg::allocate_blocks(sys, cap);
    bool blk_ok =
        cclqg::check_ss_conditions(blk_ss,
                                   cclqg::dr_gains(blk_source, al.groups[0].block_budget))
            .overall;
    bool sc_ok =
        cclqg::check_ss_conditions(sc_ss,
                                   cclqg::dr_gains(sc_source, al.groups[1].block_budget))
            .overall;
    if (al.groups[0].feasible != blk_ok || al.groups[1].feasible != sc_ok ||
        al.feasible != (blk_ok && sc_ok)) {
      note("feasibility flag disagrees with the direct check at B=" + fmt(cap));
      return false;
    }
    if (!al.feasible) {
      ++infeasible;
      continue;
    }
    ++feasible;
    double b2 = al.groups[0].total_budget, b1 = al.groups[1].total_budget;
    if (b1 <= 0.0) continue;  // isolated family not yet active
    double ratio = b2 / b1;
    if (!(ratio > 2.0)) {
      note("ratio " + fmt(ratio) + " at B=" + fmt(cap));
      return false;
    }
    if (!(ratio < prev_ratio)) {
      note("ratio not decreasing at B=" + fmt(cap));
      return false;
    }
    prev_ratio = ratio;
  }
  if (infeasible == 0 || feasible == 0) {
    note("expected both flagged and feasible grid points, got " + std::to_string(infeasible) +
         " / " + std::to_string(feasible));
    return false;
  }
  return true;
}

/* ------------------------------------------------------- criterion 10 ---- */
// Group allocation against the whole-system stationary predictor for the
// three diagonal experiment families, one copy per distinct subsystem.

bool criterion10() {
  struct Entry {
    double a, c, s2w, s2v;
  };
  const std::vector<std::vector<Entry>> cases = {
      {{0.99, 1, 1, 1}, {0.95, 1, 1, 1}, {0.90, 1, 1, 1}},
      {{0.95, 1, 10, 1}, {0.95, 1, 3, 1}, {0.95, 1, 1, 1}},
      {{0.95, 1, 1, 0.1}, {0.95, 1, 1, 10}, {0.95, 0.25, 1, 10}},
  };
  for (std::size_t ci = 0; ci < cases.size(); ++ci) {
    cclqg::SystemStructure st;
    for (std::size_t g = 0; g < cases[ci].size(); ++g) {
      const Entry& e = cases[ci][g];
      st.groups.push_back(scalar_group("g" + std::to_string(g), e.a, e.c, e.s2w, e.s2v));
    }
    cclqg::LqgSystem sys = cclqg::build_structured(st);
    cclqg::SteadyState ss = cclqg::steady_state(sys);
    for (double cap : {0.3, 1.0, 2.5, 6.0}) {
      cclqg::AllocationResult al = cclqg::allocate_blocks(sys, cap);
      cclqg::SteadyPredictor sp = cclqg::steady_predictor(ss, cap);

      // match group budgets to the predictor's per-eigenvalue budgets by
      // sorting both on the weight (source variance), descending
      std::vector<std::pair<double, double>> from_alloc, from_pred;
      for (std::size_t g = 0; g < al.groups.size(); ++g) {
        const Entry& e = cases[ci][g];
        ScalarForms f = scalar_forms(e.a, e.c, e.s2w, e.s2v);
        from_alloc.emplace_back(f.sigma - f.m, al.groups[g].budgets(0));
      }
      for (int i = 0; i < sp.gains.lambdas.size(); ++i)
        from_pred.emplace_back(sp.gains.lambdas(i), sp.gains.budgets(i));
      auto desc = [](const auto& x, const auto& y) { return x.first > y.first; };
      std::sort(from_alloc.begin(), from_alloc.end(), desc);
      std::sort(from_pred.begin(), from_pred.end(), desc);
      double formula = 0.0;
      for (std::size_t g = 0; g < cases[ci].size(); ++g) {
        const Entry& e = cases[ci][g];
        ScalarForms f = scalar_forms(e.a, e.c, e.s2w, e.s2v);
        formula += f.m + std::exp(-2.0 * al.groups[g].budgets(0)) * (f.sigma - f.m);
      }
      for (std::size_t i = 0; i < from_alloc.size(); ++i)
        if (std::abs(from_alloc[i].second - from_pred[i].second) > 1e-9) {
          note("case " + std::to_string(ci + 1) + " B=" + fmt(cap) + " budget gap " +
               fmt(from_alloc[i].second - from_pred[i].second));
          return false;
        }
      if (std::abs(al.cost - formula) > 1e-9 || std::abs(sp.cost - formula) > 1e-9) {
        note("case " + std::to_string(ci + 1) + " B=" + fmt(cap) + " cost " + fmt(al.cost) +
             " / " + fmt(sp.cost) + " vs formula " + fmt(formula));
        return false;
      }
    }
  }
  return true;
}

/* ------------------------------------------------------- criterion 11 ---- */
// Repeated CLI runs with a fixed seed produce byte-identical output files.

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

bool criterion11(const char* cli) {
  if (!cli || !std::filesystem::exists(cli)) {
    note("CLI path missing (pass it as argv[1])");
    return false;
  }
  auto root = std::filesystem::temp_directory_path() /
              ("cclqg_accept_" + std::to_string(static_cast<unsigned>(::getpid())));
  std::filesystem::remove_all(root);
  std::filesystem::create_directories(root);
  auto cfg = root / "config.json";
  {
    std::ofstream os(cfg);
    os << R"({"system":{"groups":[
         {"label":"slow","a":0.99,"c":1.0,"s2w":1.0,"s2v":1.0,"mult":2},
         {"label":"fast","a":0.9,"c":1.0,"s2w":1.0,"s2v":1.0}]},
        "capacity":{"grid":[0.5,1.5]},
        "sim":{"horizon":80,"n":500,"seed":321,"burn_in":40},
        "out":{"dir":"unused"}})";
  }
  const std::string q = "\"" + std::string(cli) + "\"";
  const std::string cfg_arg = " --config \"" + cfg.string() + "\"";
  const std::vector<std::string> commands = {
      q + " steady" + cfg_arg,
      q + " allocate" + cfg_arg,
      q + " simulate" + cfg_arg,
      q + " reproduce case4 --scale 100",
  };
  for (std::size_t ci = 0; ci < commands.size(); ++ci) {
    std::filesystem::path runs[2];
    for (int r = 0; r < 2; ++r) {
      runs[r] = root / ("c" + std::to_string(ci) + "_r" + std::to_string(r));
      std::string cmd = commands[ci] + " --out \"" + runs[r].string() + "\" > /dev/null";
      if (std::system(cmd.c_str()) != 0) {
        note("command failed: " + commands[ci]);
        return false;
      }
    }
    int compared = 0;
    for (const auto& entry : std::filesystem::directory_iterator(runs[0])) {
      auto twin = runs[1] / entry.path().filename();
      if (!std::filesystem::exists(twin) || slurp(entry.path()) != slurp(twin)) {
        note("outputs differ for " + entry.path().filename().string());
        return false;
      }
      ++compared;
    }
    if (compared == 0) {
      note("no outputs produced by " + commands[ci]);
      return false;
    }
  }
  std::filesystem::remove_all(root);
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  report(1, criterion1(),
         "scalar stationary closed forms match the Riccati solver (1000 systems, 1e-9) and the "
         "a=0.95 reference values (1e-5)");
  report(2, criterion2(),
         "scalar distortion-rate law e^{-2B} sigma^2 realized by the channel gains (1e-12)");
  report(3, criterion3(),
         "water-filling never beaten by a 1e-4-resolution budget grid (200 two-mode instances)");
  report(4, criterion4(),
         "boundary capacities: B=0 cost equals tr(Sigma), B=inf cost equals tr(M) with zero "
         "distortion (100 systems)");
  report(5, criterion5(),
         "incremental construction conditions hold for every scalar system (1000 x T=200, zero "
         "failures)");
  report(6, criterion6(),
         "stationary construction conditions hold for every diagonal system (200 x capacity "
         "grid, zero failures)");
  report(7, criterion7(),
         "constructed agent and oracle-access predictor realize the analytic cost within 3 SE "
         "(n=10^4, T=1000, under one minute)");
  report(8, criterion8(),
         "consumed capacity never exceeds the budget and meets it exactly when all modes are "
         "active");
  report(9, criterion9(),
         "coupled/isolated capacity ratio exceeds 2 and decreases over the feasible grid; "
         "infeasible points flagged consistently");
  report(10, criterion10(),
         "group allocation equals the whole-system stationary predictor (budgets 1e-9, cost vs "
         "closed-form 1e-9) for the three diagonal families");
  report(11, criterion11(argc > 1 ? argv[1] : nullptr),
         "CLI runs with a fixed seed are byte-identical across repeats (steady, allocate, "
         "simulate, preset)");

  if (g_failures == 0) {
    std::printf("all 11 criteria passed\n");
    return 0;
  }
  std::printf("%d criteria failed\n", g_failures);
  return 1;
}
