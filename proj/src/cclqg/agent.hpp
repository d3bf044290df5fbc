#pragma once

#include <vector>

#include "cclqg/kalman.hpp"
#include "cclqg/rate_distortion.hpp"
#include "cclqg/rng.hpp"

namespace cclqg {

/// Per-step channel gains for the capacity-constrained predictor over a
/// finite horizon, together with the expected per-step loss
/// tr(m_t) + sum_i e^{-2 b_ti} lambda_ti.
struct PredictorSchedule {
  double capacity = 0.0;  // nats per step
  CovSchedule cov;
  std::vector<ChannelGains> gains;  // index t-1 holds step t
  std::vector<double> loss;
};

PredictorSchedule predictor_schedule(const LqgSystem& system, double capacity, int horizon,
                                     const Tolerances& tols = default_tols());

/// Per-step outcome of the incremental-construction test. The ordering part
/// compares the propagated channel noise against the next step's budget and
/// is evaluated only when both step gains are invertible.
struct StepCondition {
  bool f_invertible = false;
  double min_gain = 0.0;   // smallest diagonal gain of f_t
  int starved_index = -1;  // eigenvalue index attaining min_gain
  bool noise_order_ok = false;
  double witness = 0.0;    // min eig of (rhs - lhs); NaN when skipped
};

struct ConditionReport {
  bool overall = false;
  std::vector<StepCondition> steps;  // index t-1 holds step t
};

ConditionReport check_c3l_conditions(const PredictorSchedule& schedule, const LqgSystem& system,
                                     const Tolerances& tols = default_tols());

/// Linear-Gaussian recursion z_{t+1} = transition z_t + obs_gain y_{t+1} + noise,
/// predicting theta through `readout`. Finite-horizon agents carry one
/// coefficient set per step; steady-state agents carry a single set.
struct LinearGaussianAgent {
  enum class Mode { FiniteHorizon, SteadyState };
  Mode mode = Mode::SteadyState;
  int horizon = 0;  // 0 when unlimited
  Eigen::Index state_dim = 0;
  Eigen::Index out_dim = 0;
  std::vector<Matrix> transition;
  std::vector<Matrix> obs_gain;
  std::vector<Matrix> residual_cov;
  std::vector<Matrix> residual_root;
  Matrix readout;
};

/// Builds the incremental finite-horizon agent; requires the construction
/// conditions to hold over the whole schedule.
LinearGaussianAgent build_incremental_agent(const PredictorSchedule& schedule,
                                            const LqgSystem& system,
                                            const Tolerances& tols = default_tols());

/// Stationary capacity-constrained predictor: channel gains for the
/// stationary posterior-mean covariance plus the asymptotic per-step cost.
struct SteadyPredictor {
  ChannelGains gains;
  double cost = 0.0;
};

SteadyPredictor steady_predictor(const SteadyState& ss, double capacity,
                                 const Tolerances& tols = default_tols());

/// Diagonal of the condition matrix on the active modes:
/// d_i = e^{-2 b_i} lambda_i / (1 - e^{-2 b_i}).
Vector d_matrix(const ChannelGains& gains);

/// Stationary realizability test: the closed-loop transition must keep the
/// active subspace invariant (range condition) and contract the condition
/// matrix (ordering condition). gform_ok recomputes the ordering through the
/// subspace factor of the closed-loop map as a cross-check.
struct SsConditionReport {
  bool overall = false;
  int active_modes = 0;
  bool range_ok = false;
  double range_residual = 0.0;
  bool order_ok = false;
  double witness = 0.0;  // min eig of (d - k1 d k1^T)
  bool gform_ok = false;
};

SsConditionReport check_ss_conditions(const SteadyState& ss, const ChannelGains& gains,
                                      const Tolerances& tols = default_tols());

/// Builds the stationary agent on the active modes; requires
/// check_ss_conditions to pass.
LinearGaussianAgent build_ss_agent(const SteadyState& ss, const ChannelGains& gains,
                                   const Tolerances& tols = default_tols());

struct AgentState {
  int t = 0;
  Vector z;
};

AgentState initial_agent_state(const LinearGaussianAgent& agent);

/// Consumes y_{t+1}, advances the state and returns the prediction of
/// theta_{t+1}.
Vector agent_step(const LinearGaussianAgent& agent, AgentState& state, const Vector& y,
                  GaussianStream& rng);

}  // namespace cclqg
