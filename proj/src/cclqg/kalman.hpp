#pragma once

#include <vector>

#include "cclqg/system.hpp"

namespace cclqg {

/// Posterior state of the optimal filter after observing y_1..y_t:
/// mean = E[theta_t | history], cov = Cov[theta_t | history].
struct FilterState {
  int t = 0;
  Vector mean;
  Matrix cov;
};

FilterState initial_filter_state(const LqgSystem& system);

/// One measurement update: consumes y_{t+1} and returns the posterior at t+1.
FilterState filter_step(const FilterState& state, const Vector& y, const LqgSystem& system,
                        const Tolerances& tols = default_tols());

/// Deterministic covariance recursions for t = 1..T (index t-1 in each array):
///   v[t]: prior covariance of theta_t,
///   m[t]: posterior covariance given y_1..y_t,
///   p[t]: a m[t] a^T + sw, the one-step-ahead covariance from t,
///   r[t]: v[t] - m[t], the covariance of the posterior mean.
struct CovSchedule {
  int horizon = 0;
  std::vector<Matrix> v;
  std::vector<Matrix> m;
  std::vector<Matrix> p;
  std::vector<Matrix> r;
};

CovSchedule covariance_schedule(const LqgSystem& system, int horizon,
                                const Tolerances& tols = default_tols());

/// Stationary filter quantities for a stable system:
///   sigma: stationary latent covariance,
///   p: stationary one-step-ahead covariance,
///   m: stationary posterior covariance,
///   k: closed-loop transition (i - l c) a,
///   l: stationary innovation gain p c^T (c p c^T + sv)^-1.
struct SteadyState {
  Matrix sigma;
  Matrix p;
  Matrix m;
  Matrix k;
  Matrix l;
};

SteadyState steady_state(const LqgSystem& system, const Tolerances& tols = default_tols());

}  // namespace cclqg
