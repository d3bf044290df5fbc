#include "cclqg/agent.hpp"

#include <cmath>
#include <limits>

#include "cclqg/errors.hpp"

namespace cclqg {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

// u diag(e^{-2b} lambda / (1 - e^{-2b})) u^T, defined when every gain is
// positive. Infinite budgets contribute zero.
Matrix noise_shape(const ChannelGains& g) {
  Vector nu(g.budgets.size());
  for (Eigen::Index i = 0; i < g.budgets.size(); ++i) {
    double b = g.budgets[i];
    if (std::isinf(b)) {
      nu[i] = 0.0;
    } else {
      nu[i] = std::exp(-2.0 * b) * g.lambdas[i] / -std::expm1(-2.0 * b);
    }
  }
  return g.basis * nu.asDiagonal() * g.basis.transpose();
}

Matrix f_inverse(const ChannelGains& g) {
  Vector inv(g.budgets.size());
  for (Eigen::Index i = 0; i < g.budgets.size(); ++i) {
    double b = g.budgets[i];
    inv[i] = std::isinf(b) ? 1.0 : 1.0 / -std::expm1(-2.0 * b);
  }
  return g.basis * inv.asDiagonal() * g.basis.transpose();
}

double min_f_gain(const ChannelGains& g, int* argmin) {
  double lo = std::numeric_limits<double>::infinity();
  int idx = -1;
  for (Eigen::Index i = 0; i < g.budgets.size(); ++i) {
    double b = g.budgets[i];
    double gain = std::isinf(b) ? 1.0 : -std::expm1(-2.0 * b);
    if (gain < lo) {
      lo = gain;
      idx = static_cast<int>(i);
    }
  }
  if (argmin) *argmin = idx;
  return g.budgets.size() ? lo : 0.0;
}

// One-step-ahead gain structure at covariance p: closed-loop map
// x = (i - p c^T s^-1 c) a and innovation gain p c^T s^-1.
struct StepMaps {
  Matrix x;
  Matrix gain;
};

StepMaps step_maps(const Matrix& p, const LqgSystem& system) {
  Eigen::LLT<Matrix> llt(symmetrize(system.c * p * system.c.transpose() + system.sv));
  if (llt.info() != Eigen::Success)
    raise(ErrorCode::SingularInnovation, "innovation covariance is not positive definite");
  Matrix cp = system.c * p;
  StepMaps maps;
  maps.gain = llt.solve(cp).transpose();
  const Eigen::Index d = system.dim();
  maps.x = (Matrix::Identity(d, d) - maps.gain * system.c) * system.a;
  return maps;
}

Matrix clamp_residual(const Matrix& q, double scale, const Tolerances& tols) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetrize(q));
  if (solver.info() != Eigen::Success) raise(ErrorCode::NoConvergence, "eigendecomposition failed");
  Vector lam = solver.eigenvalues();
  if (lam.size() == 0 || lam.minCoeff() >= 0.0) return symmetrize(q);
  if (lam.minCoeff() < -tols.clamp * std::max(1.0, scale))
    raise(ErrorCode::ConditionViolated, "residual covariance is not positive semidefinite");
  for (Eigen::Index i = 0; i < lam.size(); ++i) lam[i] = std::max(lam[i], 0.0);
  return solver.eigenvectors() * lam.asDiagonal() * solver.eigenvectors().transpose();
}

std::vector<int> active_indices(const ChannelGains& g) {
  std::vector<int> idx;
  for (std::size_t i = 0; i < g.active.size(); ++i)
    if (g.active[i]) idx.push_back(static_cast<int>(i));
  return idx;
}

}  // namespace

PredictorSchedule predictor_schedule(const LqgSystem& system, double capacity, int horizon,
                                     const Tolerances& tols) {
  if (std::isnan(capacity) || capacity < 0.0)
    raise(ErrorCode::InvalidArgument, "capacity must be nonnegative");
  PredictorSchedule sched;
  sched.capacity = capacity;
  sched.cov = covariance_schedule(system, horizon, tols);
  sched.gains.reserve(static_cast<std::size_t>(horizon));
  sched.loss.reserve(static_cast<std::size_t>(horizon));
  for (int t = 1; t <= horizon; ++t) {
    const Matrix& r = sched.cov.r[static_cast<std::size_t>(t - 1)];
    ChannelGains g = dr_gains(r, capacity, tols);
    sched.loss.push_back(sched.cov.m[static_cast<std::size_t>(t - 1)].trace() + g.distortion);
    sched.gains.push_back(std::move(g));
  }
  return sched;
}

ConditionReport check_c3l_conditions(const PredictorSchedule& schedule, const LqgSystem& system,
                                     const Tolerances& tols) {
  const int horizon = schedule.cov.horizon;
  ConditionReport report;
  report.steps.resize(static_cast<std::size_t>(horizon));

  for (int t = 1; t <= horizon; ++t) {
    StepCondition& sc = report.steps[static_cast<std::size_t>(t - 1)];
    sc.min_gain = min_f_gain(schedule.gains[static_cast<std::size_t>(t - 1)], &sc.starved_index);
    sc.f_invertible = sc.min_gain >= tols.inv;
    sc.noise_order_ok = false;
    sc.witness = kNan;
  }

  bool overall = true;
  for (int t = 1; t <= horizon; ++t)
    overall = overall && report.steps[static_cast<std::size_t>(t - 1)].f_invertible;

  for (int t = 1; t < horizon; ++t) {
    StepCondition& sc = report.steps[static_cast<std::size_t>(t - 1)];
    const StepCondition& next = report.steps[static_cast<std::size_t>(t)];
    if (!sc.f_invertible || !next.f_invertible) {
      overall = false;
      continue;
    }
    const ChannelGains& gt = schedule.gains[static_cast<std::size_t>(t - 1)];
    const ChannelGains& gn = schedule.gains[static_cast<std::size_t>(t)];
    StepMaps maps = step_maps(schedule.cov.p[static_cast<std::size_t>(t - 1)], system);
    Matrix lhs = maps.x * noise_shape(gt) * maps.x.transpose();
    Matrix rhs = noise_shape(gn);
    PsdOrder ord = psd_leq(lhs, rhs, tols.cond);
    sc.noise_order_ok = ord.holds;
    sc.witness = ord.witness;
    overall = overall && ord.holds;
  }

  report.overall = overall && horizon >= 1;
  return report;
}

LinearGaussianAgent build_incremental_agent(const PredictorSchedule& schedule,
                                            const LqgSystem& system, const Tolerances& tols) {
  ConditionReport report = check_c3l_conditions(schedule, system, tols);
  if (!report.overall)
    raise(ErrorCode::ConditionViolated, "incremental construction conditions do not hold");

  const int horizon = schedule.cov.horizon;
  const Eigen::Index d = system.dim();

  LinearGaussianAgent agent;
  agent.mode = LinearGaussianAgent::Mode::FiniteHorizon;
  agent.horizon = horizon;
  agent.state_dim = d;
  agent.out_dim = d;
  agent.readout = Matrix::Identity(d, d);
  agent.transition.reserve(static_cast<std::size_t>(horizon));
  agent.obs_gain.reserve(static_cast<std::size_t>(horizon));
  agent.residual_cov.reserve(static_cast<std::size_t>(horizon));
  agent.residual_root.reserve(static_cast<std::size_t>(horizon));

  {
    // First step: prior of theta_1 is v_1, state starts at zero.
    const ChannelGains& g1 = schedule.gains[0];
    StepMaps maps = step_maps(schedule.cov.v[0], system);
    agent.transition.push_back(Matrix::Zero(d, d));
    agent.obs_gain.push_back(g1.f * maps.gain);
    Matrix q = symmetrize(g1.psi);
    agent.residual_cov.push_back(q);
    agent.residual_root.push_back(sqrt_psd(q, tols));
  }

  for (int t = 1; t < horizon; ++t) {
    const ChannelGains& gt = schedule.gains[static_cast<std::size_t>(t - 1)];
    const ChannelGains& gn = schedule.gains[static_cast<std::size_t>(t)];
    StepMaps maps = step_maps(schedule.cov.p[static_cast<std::size_t>(t - 1)], system);
    Matrix trans = gn.f * maps.x * f_inverse(gt);
    Matrix q = clamp_residual(gn.psi - trans * gt.psi * trans.transpose(),
                              sym_spectral_norm(gn.psi), tols);
    agent.transition.push_back(trans);
    agent.obs_gain.push_back(gn.f * maps.gain);
    agent.residual_root.push_back(sqrt_psd(q, tols));
    agent.residual_cov.push_back(std::move(q));
  }
  return agent;
}

SteadyPredictor steady_predictor(const SteadyState& ss, double capacity, const Tolerances& tols) {
  SteadyPredictor out;
  out.gains = dr_gains(symmetrize(ss.sigma - ss.m), capacity, tols);
  out.cost = ss.m.trace() + out.gains.distortion;
  return out;
}

Vector d_matrix(const ChannelGains& gains) {
  std::vector<int> idx = active_indices(gains);
  Vector d(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t j = 0; j < idx.size(); ++j) {
    double b = gains.budgets[idx[j]];
    d[static_cast<Eigen::Index>(j)] =
        std::isinf(b) ? 0.0 : std::exp(-2.0 * b) * gains.lambdas[idx[j]] / -std::expm1(-2.0 * b);
  }
  return d;
}

SsConditionReport check_ss_conditions(const SteadyState& ss, const ChannelGains& gains,
                                      const Tolerances& tols) {
  SsConditionReport report;
  std::vector<int> idx = active_indices(gains);
  const Eigen::Index m = static_cast<Eigen::Index>(idx.size());
  report.active_modes = static_cast<int>(m);

  if (m == 0) {
    report.range_ok = true;
    report.order_ok = true;
    report.gform_ok = true;
    report.overall = true;
    return report;
  }

  const Eigen::Index d = gains.basis.rows();
  Matrix u1(d, m);
  for (Eigen::Index j = 0; j < m; ++j) u1.col(j) = gains.basis.col(idx[static_cast<std::size_t>(j)]);

  Matrix ktu = ss.k.transpose() * u1;
  double resid = (ktu - u1 * (u1.transpose() * ktu)).norm();
  report.range_residual = resid;
  report.range_ok = resid <= tols.range * std::max(ss.k.norm(), 1e-300);

  Vector dv = d_matrix(gains);
  Matrix k1 = u1.transpose() * ss.k * u1;
  Matrix lhs = k1 * dv.asDiagonal() * k1.transpose();
  PsdOrder ord = psd_leq(lhs, Matrix(dv.asDiagonal()), tols.cond);
  report.order_ok = ord.holds;
  report.witness = ord.witness;

  // Cross-check through the subspace factor g with k^T u1 = u1 g.
  Matrix g = u1.transpose() * ss.k.transpose() * u1;
  PsdOrder gord = psd_leq(g.transpose() * dv.asDiagonal() * g, Matrix(dv.asDiagonal()), tols.cond);
  report.gform_ok = gord.holds;

  report.overall = report.range_ok && report.order_ok;
  return report;
}

LinearGaussianAgent build_ss_agent(const SteadyState& ss, const ChannelGains& gains,
                                   const Tolerances& tols) {
  SsConditionReport report = check_ss_conditions(ss, gains, tols);
  if (!report.overall)
    raise(ErrorCode::ConditionViolated, "stationary construction conditions do not hold");

  std::vector<int> idx = active_indices(gains);
  const Eigen::Index m = static_cast<Eigen::Index>(idx.size());
  const Eigen::Index d = gains.basis.rows();

  LinearGaussianAgent agent;
  agent.mode = LinearGaussianAgent::Mode::SteadyState;
  agent.horizon = 0;
  agent.state_dim = m;
  agent.out_dim = d;

  if (m == 0) {
    agent.transition.push_back(Matrix::Zero(0, 0));
    agent.obs_gain.push_back(Matrix::Zero(0, ss.l.cols()));
    agent.residual_cov.push_back(Matrix::Zero(0, 0));
    agent.residual_root.push_back(Matrix::Zero(0, 0));
    agent.readout = Matrix::Zero(d, 0);
    return agent;
  }

  Matrix u1(d, m);
  Vector df(m), dpsi(m);
  for (Eigen::Index j = 0; j < m; ++j) {
    int i = idx[static_cast<std::size_t>(j)];
    u1.col(j) = gains.basis.col(i);
    double b = gains.budgets[i];
    if (std::isinf(b)) {
      df[j] = 1.0;
      dpsi[j] = 0.0;
    } else {
      double shrink = std::exp(-2.0 * b);
      df[j] = -std::expm1(-2.0 * b);
      dpsi[j] = df[j] * shrink * gains.lambdas[i];
    }
  }

  Matrix trans = df.asDiagonal() * (u1.transpose() * ss.k * u1) * df.cwiseInverse().asDiagonal();
  Matrix q = clamp_residual(Matrix(dpsi.asDiagonal()) - trans * dpsi.asDiagonal() * trans.transpose(),
                            dpsi.size() ? dpsi.maxCoeff() : 0.0, tols);
  agent.transition.push_back(trans);
  agent.obs_gain.push_back(df.asDiagonal() * (u1.transpose() * ss.l));
  agent.residual_root.push_back(sqrt_psd(q, tols));
  agent.residual_cov.push_back(std::move(q));
  agent.readout = u1;
  return agent;
}

AgentState initial_agent_state(const LinearGaussianAgent& agent) {
  AgentState s;
  s.t = 0;
  s.z = Vector::Zero(agent.state_dim);
  return s;
}

Vector agent_step(const LinearGaussianAgent& agent, AgentState& state, const Vector& y,
                  GaussianStream& rng) {
  std::size_t j = 0;
  if (agent.mode == LinearGaussianAgent::Mode::FiniteHorizon) {
    if (state.t >= agent.horizon)
      raise(ErrorCode::StepOutOfRange, "agent stepped past its horizon");
    j = static_cast<std::size_t>(state.t);
  }
  if (agent.state_dim == 0) {
    ++state.t;
    return Vector::Zero(agent.out_dim);
  }
  Vector noise = agent.residual_root[j] * rng.vector(agent.state_dim);
  state.z = agent.transition[j] * state.z + agent.obs_gain[j] * y + noise;
  ++state.t;
  return agent.readout * state.z;
}

}  // namespace cclqg
