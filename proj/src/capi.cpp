#include "cclqg.h"

#include <cmath>
#include <cstring>
#include <fstream>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "cclqg/allocation.hpp"
#include "cclqg/config.hpp"
#include "cclqg/errors.hpp"
#include "cclqg/simulate.hpp"

namespace {

thread_local std::string g_last_error;

template <typename F>
int guarded(F&& fn) {
  try {
    fn();
    g_last_error.clear();
    return CCLQG_OK;
  } catch (const cclqg::Error& e) {
    g_last_error = e.what();
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return CCLQG_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return CCLQG_ERR_INTERNAL;
  }
}

int null_arg(const char* what) {
  g_last_error = std::string(what) + " must not be null";
  return CCLQG_ERR_NULL_POINTER;
}

void copy_str(const std::string& s, char* buf, size_t cap) {
  if (!buf || cap == 0) return;
  size_t n = std::min(cap - 1, s.size());
  std::memcpy(buf, s.data(), n);
  buf[n] = '\0';
}

void copy_matrix(const cclqg::Matrix& m, double* buf) {
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) buf[r * m.cols() + c] = m(r, c);
}

}  // namespace

struct cclqg_config {
  cclqg::ExperimentConfig cfg;
};

struct cclqg_system {
  cclqg::LqgSystem sys;
  std::vector<cclqg::Violation> violations;
  std::vector<cclqg::SubsystemSummary> groups;
  bool groups_ready = false;
};

struct cclqg_steady {
  cclqg::SteadyState ss;
};

struct cclqg_alloc {
  cclqg::AllocationResult al;
};

struct cclqg_predictor {
  std::unique_ptr<cclqg::Predictor> pred;
};

struct cclqg_report {
  cclqg::EmpiricalReport rep;
};

namespace {

void ensure_groups(cclqg_system* sys) {
  if (!sys->groups_ready) {
    sys->groups = cclqg::summarize_groups(sys->sys);
    sys->groups_ready = true;
  }
}

const cclqg::Matrix& steady_select(const cclqg::SteadyState& ss, int which) {
  switch (which) {
    case CCLQG_MAT_SIGMA:
      return ss.sigma;
    case CCLQG_MAT_P:
      return ss.p;
    case CCLQG_MAT_M:
      return ss.m;
    case CCLQG_MAT_K:
      return ss.k;
    case CCLQG_MAT_L:
      return ss.l;
    default:
      cclqg::raise(cclqg::ErrorCode::InvalidArgument, "unknown matrix selector");
  }
}

}  // namespace

extern "C" {

const char* cclqg_version(void) { return "1.0.0"; }

const char* cclqg_error_name(int code) {
  return cclqg::error_code_name(static_cast<cclqg::ErrorCode>(code));
}

const char* cclqg_last_error(void) { return g_last_error.c_str(); }

/* ---- configuration ---- */

int cclqg_config_parse(const char* json, cclqg_config** out) {
  if (!json) return null_arg("json");
  if (!out) return null_arg("out");
  return guarded([&] {
    auto h = std::make_unique<cclqg_config>();
    h->cfg = cclqg::parse_config(json);
    *out = h.release();
  });
}

int cclqg_config_load(const char* path, cclqg_config** out) {
  if (!path) return null_arg("path");
  if (!out) return null_arg("out");
  return guarded([&] {
    auto h = std::make_unique<cclqg_config>();
    h->cfg = cclqg::load_config(path);
    *out = h.release();
  });
}

void cclqg_config_free(cclqg_config* cfg) { delete cfg; }

int cclqg_config_scale(cclqg_config* cfg, int factor) {
  if (!cfg) return null_arg("cfg");
  return guarded([&] { cfg->cfg = cclqg::apply_scale(cfg->cfg, factor); });
}

int cclqg_config_set_seed(cclqg_config* cfg, uint64_t seed) {
  if (!cfg) return null_arg("cfg");
  cfg->cfg.seed = seed;
  return CCLQG_OK;
}

int cclqg_config_set_unit(cclqg_config* cfg, const char* unit) {
  if (!cfg) return null_arg("cfg");
  if (!unit) return null_arg("unit");
  return guarded([&] {
    std::string u = unit;
    if (u != "nats" && u != "bits")
      cclqg::raise(cclqg::ErrorCode::InvalidArgument, "unit must be nats or bits");
    cfg->cfg.unit = u;
  });
}

int cclqg_config_horizon(const cclqg_config* cfg, int* out) {
  if (!cfg) return null_arg("cfg");
  if (!out) return null_arg("out");
  *out = cfg->cfg.horizon;
  return CCLQG_OK;
}

int cclqg_config_sample_count(const cclqg_config* cfg, int* out) {
  if (!cfg) return null_arg("cfg");
  if (!out) return null_arg("out");
  *out = cfg->cfg.n;
  return CCLQG_OK;
}

int cclqg_config_seed(const cclqg_config* cfg, uint64_t* out) {
  if (!cfg) return null_arg("cfg");
  if (!out) return null_arg("out");
  *out = cfg->cfg.seed;
  return CCLQG_OK;
}

int cclqg_config_burn_in(const cclqg_config* cfg, int* out) {
  if (!cfg) return null_arg("cfg");
  if (!out) return null_arg("out");
  *out = cfg->cfg.burn_in;
  return CCLQG_OK;
}

int cclqg_config_mode(const cclqg_config* cfg, char* buf, size_t cap) {
  if (!cfg) return null_arg("cfg");
  if (!buf) return null_arg("buf");
  copy_str(cfg->cfg.mode, buf, cap);
  return CCLQG_OK;
}

int cclqg_config_tol_sigma(const cclqg_config* cfg, double* out) {
  if (!cfg) return null_arg("cfg");
  if (!out) return null_arg("out");
  *out = cfg->cfg.tol_sigma;
  return CCLQG_OK;
}

int cclqg_config_out_dir(const cclqg_config* cfg, char* buf, size_t cap) {
  if (!cfg) return null_arg("cfg");
  if (!buf) return null_arg("buf");
  copy_str(cfg->cfg.out_dir, buf, cap);
  return CCLQG_OK;
}

int cclqg_config_unit(const cclqg_config* cfg, char* buf, size_t cap) {
  if (!cfg) return null_arg("cfg");
  if (!buf) return null_arg("buf");
  copy_str(cfg->cfg.unit, buf, cap);
  return CCLQG_OK;
}

int cclqg_config_grid_count(const cclqg_config* cfg, int* out) {
  if (!cfg) return null_arg("cfg");
  if (!out) return null_arg("out");
  *out = static_cast<int>(cfg->cfg.grid.size());
  return CCLQG_OK;
}

int cclqg_config_grid_value(const cclqg_config* cfg, int index, double* raw, double* nats) {
  if (!cfg) return null_arg("cfg");
  return guarded([&] {
    if (index < 0 || index >= static_cast<int>(cfg->cfg.grid.size()))
      cclqg::raise(cclqg::ErrorCode::InvalidArgument, "grid index out of range");
    double v = cfg->cfg.grid[static_cast<std::size_t>(index)];
    if (raw) *raw = v;
    if (nats) *nats = cclqg::capacity_to_nats(v, cfg->cfg.unit);
  });
}

int cclqg_config_build_system(const cclqg_config* cfg, cclqg_system** out) {
  if (!cfg) return null_arg("cfg");
  if (!out) return null_arg("out");
  return guarded([&] {
    auto h = std::make_unique<cclqg_system>();
    h->sys = cclqg::build_system(cfg->cfg);
    *out = h.release();
  });
}

/* ---- system ---- */

void cclqg_system_free(cclqg_system* sys) { delete sys; }

int cclqg_system_dim(const cclqg_system* sys, int* out) {
  if (!sys) return null_arg("sys");
  if (!out) return null_arg("out");
  *out = static_cast<int>(sys->sys.dim());
  return CCLQG_OK;
}

int cclqg_system_obs_dim(const cclqg_system* sys, int* out) {
  if (!sys) return null_arg("sys");
  if (!out) return null_arg("out");
  *out = static_cast<int>(sys->sys.obs_dim());
  return CCLQG_OK;
}

int cclqg_system_stable(const cclqg_system* sys, int* out) {
  if (!sys) return null_arg("sys");
  if (!out) return null_arg("out");
  *out = sys->sys.stable ? 1 : 0;
  return CCLQG_OK;
}

int cclqg_system_validate(cclqg_system* sys, int* count) {
  if (!sys) return null_arg("sys");
  if (!count) return null_arg("count");
  return guarded([&] {
    sys->violations = cclqg::validate(sys->sys);
    *count = static_cast<int>(sys->violations.size());
  });
}

int cclqg_system_violation(const cclqg_system* sys, int index, char* buf, size_t cap,
                           double* value) {
  if (!sys) return null_arg("sys");
  return guarded([&] {
    if (index < 0 || index >= static_cast<int>(sys->violations.size()))
      cclqg::raise(cclqg::ErrorCode::InvalidArgument, "violation index out of range");
    const cclqg::Violation& v = sys->violations[static_cast<std::size_t>(index)];
    copy_str(v.message, buf, cap);
    if (value) *value = v.value;
  });
}

int cclqg_group_count(const cclqg_system* sys, int* out) {
  if (!sys) return null_arg("sys");
  if (!out) return null_arg("out");
  *out = sys->sys.structure ? static_cast<int>(sys->sys.structure->groups.size()) : 0;
  return CCLQG_OK;
}

int cclqg_group_info(cclqg_system* sys, int index, char* label, size_t cap, int* dim, int* mult) {
  if (!sys) return null_arg("sys");
  return guarded([&] {
    if (!sys->sys.structure)
      cclqg::raise(cclqg::ErrorCode::InvalidArgument, "system has no group structure");
    const auto& groups = sys->sys.structure->groups;
    if (index < 0 || index >= static_cast<int>(groups.size()))
      cclqg::raise(cclqg::ErrorCode::InvalidArgument, "group index out of range");
    const cclqg::GroupSpec& g = groups[static_cast<std::size_t>(index)];
    copy_str(g.label, label, cap);
    if (dim) *dim = static_cast<int>(g.dim());
    if (mult) *mult = g.mult;
  });
}

int cclqg_group_traces(cclqg_system* sys, int index, double traces[5]) {
  if (!sys) return null_arg("sys");
  if (!traces) return null_arg("traces");
  return guarded([&] {
    ensure_groups(sys);
    if (index < 0 || index >= static_cast<int>(sys->groups.size()))
      cclqg::raise(cclqg::ErrorCode::InvalidArgument, "group index out of range");
    const cclqg::SteadyState& ss = sys->groups[static_cast<std::size_t>(index)].steady;
    traces[0] = ss.sigma.trace();
    traces[1] = ss.p.trace();
    traces[2] = ss.m.trace();
    traces[3] = ss.k.trace();
    traces[4] = ss.l.trace();
  });
}

int cclqg_group_weights(cclqg_system* sys, int index, double* buf) {
  if (!sys) return null_arg("sys");
  if (!buf) return null_arg("buf");
  return guarded([&] {
    ensure_groups(sys);
    if (index < 0 || index >= static_cast<int>(sys->groups.size()))
      cclqg::raise(cclqg::ErrorCode::InvalidArgument, "group index out of range");
    const cclqg::Vector& w = sys->groups[static_cast<std::size_t>(index)].weights;
    for (Eigen::Index i = 0; i < w.size(); ++i) buf[i] = w[i];
  });
}

int cclqg_group_matrix(cclqg_system* sys, int index, int which, double* buf) {
  if (!sys) return null_arg("sys");
  if (!buf) return null_arg("buf");
  return guarded([&] {
    ensure_groups(sys);
    if (index < 0 || index >= static_cast<int>(sys->groups.size()))
      cclqg::raise(cclqg::ErrorCode::InvalidArgument, "group index out of range");
    copy_matrix(steady_select(sys->groups[static_cast<std::size_t>(index)].steady, which), buf);
  });
}

/* ---- stationary solution ---- */

int cclqg_steady_compute(const cclqg_system* sys, cclqg_steady** out) {
  if (!sys) return null_arg("sys");
  if (!out) return null_arg("out");
  return guarded([&] {
    auto h = std::make_unique<cclqg_steady>();
    h->ss = cclqg::steady_state(sys->sys);
    *out = h.release();
  });
}

void cclqg_steady_free(cclqg_steady* ss) { delete ss; }

int cclqg_steady_dim(const cclqg_steady* ss, int* out) {
  if (!ss) return null_arg("ss");
  if (!out) return null_arg("out");
  *out = static_cast<int>(ss->ss.m.rows());
  return CCLQG_OK;
}

int cclqg_steady_matrix(const cclqg_steady* ss, int which, double* buf) {
  if (!ss) return null_arg("ss");
  if (!buf) return null_arg("buf");
  return guarded([&] { copy_matrix(steady_select(ss->ss, which), buf); });
}

int cclqg_scalar_steady(double a, double c, double s2w, double s2v, double* sigma, double* p,
                        double* m) {
  return guarded([&] {
    cclqg::ScalarSteady s = cclqg::scalar_steady(a, c, s2w, s2v);
    if (sigma) *sigma = s.sigma;
    if (p) *p = s.p;
    if (m) *m = s.m;
  });
}

/* ---- capacity allocation ---- */

int cclqg_water_fill(const double* lambdas, const int* counts, int n, double capacity,
                     double* budgets_out, double* eta_out, double* distortion_out,
                     int* infinite_out) {
  if (!lambdas) return null_arg("lambdas");
  return guarded([&] {
    if (n < 1) cclqg::raise(cclqg::ErrorCode::InvalidArgument, "n must be positive");
    cclqg::Vector lam(n);
    for (int i = 0; i < n; ++i) lam[i] = lambdas[i];
    cclqg::WaterFillResult r;
    if (counts) {
      Eigen::VectorXi cnt(n);
      for (int i = 0; i < n; ++i) cnt[i] = counts[i];
      r = cclqg::water_fill(lam, cnt, capacity);
    } else {
      r = cclqg::water_fill(lam, capacity);
    }
    if (budgets_out)
      for (int i = 0; i < n; ++i) budgets_out[i] = r.budgets[i];
    if (eta_out) *eta_out = r.eta;
    if (distortion_out) *distortion_out = r.distortion;
    if (infinite_out) *infinite_out = r.infinite ? 1 : 0;
  });
}

int cclqg_steady_cost(const cclqg_steady* ss, double capacity, double* cost) {
  if (!ss) return null_arg("ss");
  if (!cost) return null_arg("cost");
  return guarded([&] { *cost = cclqg::steady_predictor(ss->ss, capacity).cost; });
}

int cclqg_ss_conditions(const cclqg_steady* ss, double capacity, int* overall, int* active_modes,
                        double* range_residual, double* order_witness) {
  if (!ss) return null_arg("ss");
  return guarded([&] {
    cclqg::SteadyPredictor sp = cclqg::steady_predictor(ss->ss, capacity);
    cclqg::SsConditionReport rep = cclqg::check_ss_conditions(ss->ss, sp.gains);
    if (overall) *overall = rep.overall ? 1 : 0;
    if (active_modes) *active_modes = rep.active_modes;
    if (range_residual) *range_residual = rep.range_residual;
    if (order_witness) *order_witness = rep.witness;
  });
}

int cclqg_c3l_conditions(const cclqg_system* sys, double capacity, int horizon, int* overall,
                         int* first_fail) {
  if (!sys) return null_arg("sys");
  return guarded([&] {
    cclqg::PredictorSchedule sched = cclqg::predictor_schedule(sys->sys, capacity, horizon);
    cclqg::ConditionReport rep = cclqg::check_c3l_conditions(sched, sys->sys);
    if (overall) *overall = rep.overall ? 1 : 0;
    int fail = 0;
    for (int t = 1; t <= horizon && fail == 0; ++t) {
      const cclqg::StepCondition& sc = rep.steps[static_cast<std::size_t>(t - 1)];
      if (!sc.f_invertible) fail = t;
      else if (t < horizon && rep.steps[static_cast<std::size_t>(t)].f_invertible &&
               !sc.noise_order_ok)
        fail = t;
    }
    if (first_fail) *first_fail = rep.overall ? 0 : fail;
  });
}

int cclqg_allocate(cclqg_system* sys, double capacity, cclqg_alloc** out) {
  if (!sys) return null_arg("sys");
  if (!out) return null_arg("out");
  return guarded([&] {
    ensure_groups(sys);
    auto h = std::make_unique<cclqg_alloc>();
    h->al = cclqg::allocate_blocks(sys->groups, capacity);
    *out = h.release();
  });
}

void cclqg_alloc_free(cclqg_alloc* alloc) { delete alloc; }

int cclqg_alloc_summary(const cclqg_alloc* alloc, double* cost, double* distortion, double* eta,
                        double* capacity_used, int* feasible, int* infinite) {
  if (!alloc) return null_arg("alloc");
  if (cost) *cost = alloc->al.cost;
  if (distortion) *distortion = alloc->al.distortion;
  if (eta) *eta = alloc->al.eta;
  if (capacity_used) *capacity_used = alloc->al.capacity_used;
  if (feasible) *feasible = alloc->al.feasible ? 1 : 0;
  if (infinite) *infinite = alloc->al.infinite ? 1 : 0;
  return CCLQG_OK;
}

int cclqg_alloc_group_count(const cclqg_alloc* alloc, int* out) {
  if (!alloc) return null_arg("alloc");
  if (!out) return null_arg("out");
  *out = static_cast<int>(alloc->al.groups.size());
  return CCLQG_OK;
}

int cclqg_alloc_group(const cclqg_alloc* alloc, int index, char* label, size_t cap,
                      double* block_budget, double* total_budget, int* feasible) {
  if (!alloc) return null_arg("alloc");
  return guarded([&] {
    if (index < 0 || index >= static_cast<int>(alloc->al.groups.size()))
      cclqg::raise(cclqg::ErrorCode::InvalidArgument, "group index out of range");
    const cclqg::GroupAllocation& g = alloc->al.groups[static_cast<std::size_t>(index)];
    copy_str(g.label, label, cap);
    if (block_budget) *block_budget = g.block_budget;
    if (total_budget) *total_budget = g.total_budget;
    if (feasible) *feasible = g.feasible ? 1 : 0;
  });
}

int cclqg_alloc_group_budgets(const cclqg_alloc* alloc, int index, double* buf, int* n_out) {
  if (!alloc) return null_arg("alloc");
  return guarded([&] {
    if (index < 0 || index >= static_cast<int>(alloc->al.groups.size()))
      cclqg::raise(cclqg::ErrorCode::InvalidArgument, "group index out of range");
    const cclqg::Vector& b = alloc->al.groups[static_cast<std::size_t>(index)].budgets;
    if (buf)
      for (Eigen::Index i = 0; i < b.size(); ++i) buf[i] = b[i];
    if (n_out) *n_out = static_cast<int>(b.size());
  });
}

/* ---- predictors ---- */

int cclqg_predictor_steady_agent(const cclqg_system* sys, double capacity, cclqg_predictor** out) {
  if (!sys) return null_arg("sys");
  if (!out) return null_arg("out");
  return guarded([&] {
    cclqg::SteadyState ss = cclqg::steady_state(sys->sys);
    cclqg::SteadyPredictor sp = cclqg::steady_predictor(ss, capacity);
    cclqg::LinearGaussianAgent agent = cclqg::build_ss_agent(ss, sp.gains);
    auto h = std::make_unique<cclqg_predictor>();
    h->pred = cclqg::make_agent_predictor(std::move(agent), sp.cost);
    *out = h.release();
  });
}

int cclqg_predictor_steady_direct(const cclqg_system* sys, double capacity, cclqg_predictor** out) {
  if (!sys) return null_arg("sys");
  if (!out) return null_arg("out");
  return guarded([&] {
    cclqg::SteadyState ss = cclqg::steady_state(sys->sys);
    cclqg::SteadyPredictor sp = cclqg::steady_predictor(ss, capacity);
    auto h = std::make_unique<cclqg_predictor>();
    h->pred = cclqg::make_direct_predictor(sys->sys, sp.gains, sp.cost);
    *out = h.release();
  });
}

int cclqg_predictor_finite_agent(const cclqg_system* sys, double capacity, int horizon,
                                 cclqg_predictor** out) {
  if (!sys) return null_arg("sys");
  if (!out) return null_arg("out");
  return guarded([&] {
    cclqg::PredictorSchedule sched = cclqg::predictor_schedule(sys->sys, capacity, horizon);
    cclqg::LinearGaussianAgent agent = cclqg::build_incremental_agent(sched, sys->sys);
    auto h = std::make_unique<cclqg_predictor>();
    h->pred = cclqg::make_agent_predictor(std::move(agent), sched.loss);
    *out = h.release();
  });
}

int cclqg_predictor_finite_direct(const cclqg_system* sys, double capacity, int horizon,
                                  cclqg_predictor** out) {
  if (!sys) return null_arg("sys");
  if (!out) return null_arg("out");
  return guarded([&] {
    cclqg::PredictorSchedule sched = cclqg::predictor_schedule(sys->sys, capacity, horizon);
    auto h = std::make_unique<cclqg_predictor>();
    h->pred = cclqg::make_direct_predictor(sys->sys, std::move(sched));
    *out = h.release();
  });
}

void cclqg_predictor_free(cclqg_predictor* pred) { delete pred; }

int cclqg_predictor_loss(const cclqg_predictor* pred, int t, double* out) {
  if (!pred) return null_arg("pred");
  if (!out) return null_arg("out");
  return guarded([&] { *out = pred->pred->analytic_loss(t); });
}

/* ---- experiments ---- */

int cclqg_default_burn_in(const cclqg_system* sys, int* out) {
  if (!sys) return null_arg("sys");
  if (!out) return null_arg("out");
  return guarded([&] { *out = cclqg::default_burn_in(sys->sys); });
}

int cclqg_run_experiment(const cclqg_system* sys, const cclqg_predictor* pred, int horizon, int n,
                         uint64_t seed, int burn_in, cclqg_report** out) {
  if (!sys) return null_arg("sys");
  if (!pred) return null_arg("pred");
  if (!out) return null_arg("out");
  return guarded([&] {
    auto h = std::make_unique<cclqg_report>();
    h->rep = cclqg::run_experiment(sys->sys, *pred->pred, horizon, n, seed, burn_in);
    *out = h.release();
  });
}

void cclqg_report_free(cclqg_report* report) { delete report; }

int cclqg_report_meta(const cclqg_report* report, int* horizon, int* n, int* burn_in) {
  if (!report) return null_arg("report");
  if (horizon) *horizon = report->rep.horizon;
  if (n) *n = report->rep.n;
  if (burn_in) *burn_in = report->rep.burn_in;
  return CCLQG_OK;
}

int cclqg_report_step(const cclqg_report* report, int t, double* analytic, double* empirical,
                      double* se) {
  if (!report) return null_arg("report");
  return guarded([&] {
    if (t < 1 || t > report->rep.horizon)
      cclqg::raise(cclqg::ErrorCode::StepOutOfRange, "step outside the report horizon");
    if (analytic) *analytic = report->rep.analytic[t - 1];
    if (empirical) *empirical = report->rep.empirical[t - 1];
    if (se) *se = report->rep.se[t - 1];
  });
}

int cclqg_report_timeavg(const cclqg_report* report, double* analytic, double* empirical,
                         double* se, double* z) {
  if (!report) return null_arg("report");
  if (analytic) *analytic = report->rep.timeavg_analytic;
  if (empirical) *empirical = report->rep.timeavg_empirical;
  if (se) *se = report->rep.timeavg_se;
  if (z) *z = report->rep.timeavg_z;
  return CCLQG_OK;
}

int cclqg_report_compare(const cclqg_report* report, double tol_sigma, int* pass, int* worst_step,
                         double* worst_z) {
  if (!report) return null_arg("report");
  return guarded([&] {
    cclqg::CompareResult cr = cclqg::compare(report->rep, tol_sigma);
    if (pass) *pass = cr.pass ? 1 : 0;
    if (worst_step) *worst_step = cr.worst_step;
    if (worst_z) *worst_z = cr.worst_z;
  });
}

int cclqg_report_write_csv(const cclqg_report* report, const char* path) {
  if (!report) return null_arg("report");
  if (!path) return null_arg("path");
  return guarded([&] {
    std::ofstream os(path, std::ios::binary);
    if (!os) cclqg::raise(cclqg::ErrorCode::IoError, std::string("cannot open ") + path);
    cclqg::write_report_csv(report->rep, os);
    if (!os) cclqg::raise(cclqg::ErrorCode::IoError, std::string("cannot write ") + path);
  });
}

int cclqg_sample_csv(const cclqg_system* sys, int horizon, int n, uint64_t seed,
                     const char* path) {
  if (!sys) return null_arg("sys");
  if (!path) return null_arg("path");
  return guarded([&] {
    cclqg::TrajectoryBatch batch = cclqg::sample_trajectories(sys->sys, horizon, n, seed);
    std::ofstream os(path, std::ios::binary);
    if (!os) cclqg::raise(cclqg::ErrorCode::IoError, std::string("cannot open ") + path);
    cclqg::write_batch_csv(batch, os);
    if (!os) cclqg::raise(cclqg::ErrorCode::IoError, std::string("cannot write ") + path);
  });
}

}  // extern "C"
