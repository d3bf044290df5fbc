#include "cclqg/allocation.hpp"

#include <cmath>
#include <limits>

#include "cclqg/errors.hpp"

namespace cclqg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ChannelGains gains_from_budgets(const Matrix& basis, const Vector& lambdas, const Vector& budgets,
                                double eta, bool infinite) {
  const Eigen::Index d = lambdas.size();
  ChannelGains g;
  g.basis = basis;
  g.lambdas = lambdas;
  g.budgets = budgets;
  g.eta = eta;
  g.infinite = infinite;
  g.active.assign(static_cast<std::size_t>(d), false);
  Vector df(d), dpsi(d);
  g.distortion = 0.0;
  for (Eigen::Index i = 0; i < d; ++i) {
    double b = budgets[i];
    g.active[static_cast<std::size_t>(i)] = b > 0.0;
    if (std::isinf(b)) {
      df[i] = 1.0;
      dpsi[i] = 0.0;
    } else {
      double shrink = std::exp(-2.0 * b);
      df[i] = -std::expm1(-2.0 * b);
      dpsi[i] = df[i] * shrink * lambdas[i];
      g.distortion += shrink * lambdas[i];
    }
  }
  g.f = basis * df.asDiagonal() * basis.transpose();
  g.psi = basis * dpsi.asDiagonal() * basis.transpose();
  return g;
}

}  // namespace

ScalarSteady scalar_steady(double a, double c, double s2w, double s2v) {
  if (!(std::abs(a) < 1.0)) raise(ErrorCode::Unstable, "transition must satisfy |a| < 1");
  if (!(s2v > 0.0)) raise(ErrorCode::InvalidArgument, "observation noise variance must be positive");
  if (s2w < 0.0) raise(ErrorCode::InvalidArgument, "process noise variance must be nonnegative");

  ScalarSteady out;
  out.sigma = s2w / (1.0 - a * a);
  // Positive root of a^2 c^2 m^2 + (c^2 s2w + (1-a^2) s2v) m - s2w s2v = 0,
  // written to avoid cancellation for small a or c.
  double neg_x = c * c * s2w + (1.0 - a * a) * s2v;
  double disc = std::sqrt(neg_x * neg_x + 4.0 * a * a * c * c * s2w * s2v);
  out.m = 2.0 * s2w * s2v / (neg_x + disc);
  out.p = a * a * out.m + s2w;
  return out;
}

ScalarAllocation allocate(const Vector& weights, double capacity, const Tolerances& tols) {
  WaterFillResult wf = water_fill(weights, capacity, tols);
  ScalarAllocation out;
  out.budgets = wf.budgets;
  out.distortion = wf.distortion;
  out.eta = wf.eta;
  out.infinite = wf.infinite;
  return out;
}

std::vector<SubsystemSummary> summarize_groups(const LqgSystem& system, const Tolerances& tols) {
  if (!system.structure)
    raise(ErrorCode::InvalidArgument, "system carries no group structure");

  std::vector<SubsystemSummary> out;
  out.reserve(system.structure->groups.size());
  for (const GroupSpec& g : system.structure->groups) {
    LqgSystem block = make_system(g.a, g.c, Matrix::Zero(g.dim(), g.dim()), g.sw, g.sv, tols);

    SubsystemSummary s;
    s.label = g.label;
    s.dim = g.dim();
    s.mult = g.mult;
    s.steady = steady_state(block, tols);
    SymEig eig = sym_eig(symmetrize(s.steady.sigma - s.steady.m), tols);
    double top = eig.eigenvalues.size() ? eig.eigenvalues.cwiseAbs().maxCoeff() : 0.0;
    s.weights = eig.eigenvalues;
    for (Eigen::Index i = 0; i < s.weights.size(); ++i) {
      if (s.weights[i] < -tols.psd * std::max(1.0, top))
        raise(ErrorCode::NotPsd, "stationary gap has a negative eigenvalue");
      s.weights[i] = std::max(s.weights[i], 0.0);
    }
    s.weight_basis = eig.eigenvectors;
    s.trace_sigma = s.steady.sigma.trace();
    s.trace_m = s.steady.m.trace();
    out.push_back(std::move(s));
  }
  return out;
}

AllocationResult allocate_blocks(const std::vector<SubsystemSummary>& groups, double capacity,
                                 const Tolerances& tols) {
  if (groups.empty()) raise(ErrorCode::InvalidArgument, "no groups given");

  Eigen::Index total = 0;
  for (const SubsystemSummary& g : groups) total += g.dim;
  Vector lambdas(total);
  Eigen::VectorXi counts(total);
  Eigen::Index at = 0;
  for (const SubsystemSummary& g : groups) {
    lambdas.segment(at, g.dim) = g.weights;
    counts.segment(at, g.dim).setConstant(g.mult);
    at += g.dim;
  }

  WaterFillResult wf = water_fill(lambdas, counts, capacity, tols);

  AllocationResult out;
  out.capacity = capacity;
  out.eta = wf.eta;
  out.infinite = wf.infinite;
  out.distortion = wf.distortion;
  out.feasible = true;
  out.capacity_used = 0.0;
  double trace_m_total = 0.0;

  at = 0;
  for (const SubsystemSummary& g : groups) {
    GroupAllocation ga;
    ga.label = g.label;
    ga.dim = g.dim;
    ga.mult = g.mult;
    ga.budgets = wf.budgets.segment(at, g.dim);
    ga.block_budget = 0.0;
    for (Eigen::Index i = 0; i < g.dim; ++i) ga.block_budget += ga.budgets[i];
    ga.total_budget = std::isinf(ga.block_budget) ? kInf : g.mult * ga.block_budget;

    ChannelGains gains = gains_from_budgets(g.weight_basis, g.weights, ga.budgets, wf.eta, wf.infinite);
    ga.report = check_ss_conditions(g.steady, gains, tols);
    ga.feasible = ga.report.overall;

    out.feasible = out.feasible && ga.feasible;
    if (std::isinf(ga.total_budget))
      out.capacity_used = kInf;
    else if (!std::isinf(out.capacity_used))
      out.capacity_used += ga.total_budget;
    trace_m_total += g.mult * g.trace_m;
    out.groups.push_back(std::move(ga));
    at += g.dim;
  }

  out.cost = trace_m_total + out.distortion;
  return out;
}

AllocationResult allocate_blocks(const LqgSystem& system, double capacity, const Tolerances& tols) {
  return allocate_blocks(summarize_groups(system, tols), capacity, tols);
}

}  // namespace cclqg
