#pragma once

#include <vector>

#include "cclqg/linalg.hpp"

namespace cclqg {

/// Reverse water-filling over nonnegative variances. Budgets are in nats.
/// For finite capacity, sum_i counts_i * budgets_i == capacity exactly and
/// exp(-2 budgets_i) * lambda_i == eta / 2 on every active coordinate.
struct WaterFillResult {
  double eta = 0.0;        // water level; 0 when capacity is infinite or all variances are zero
  Vector budgets;          // per-coordinate budget, +inf on active coordinates at infinite capacity
  std::vector<bool> active;
  double distortion = 0.0;  // sum_i counts_i * min(lambda_i, eta/2); 0 at infinite capacity
  bool infinite = false;
};

WaterFillResult water_fill(const Vector& lambdas, double capacity,
                           const Tolerances& tols = default_tols());

/// Weighted variant: coordinate i stands for counts[i] identical variances,
/// which all receive the same budget.
WaterFillResult water_fill(const Vector& lambdas, const Eigen::VectorXi& counts, double capacity,
                           const Tolerances& tols = default_tols());

/// Distortion-optimal linear-Gaussian channel for input covariance sigma:
/// the channel applies f = u diag(1 - e^{-2b_i}) u^T and adds noise with
/// covariance psi = u diag((1 - e^{-2b_i}) e^{-2b_i} lambda_i) u^T, where
/// (lambda, u) diagonalize sigma and b solves the water-filling problem.
struct ChannelGains {
  Matrix f;
  Matrix psi;
  Matrix basis;     // u, columns ordered by descending lambda
  Vector lambdas;   // eigenvalues of sigma, descending
  Vector budgets;   // nats per eigenvalue
  std::vector<bool> active;
  double eta = 0.0;
  double distortion = 0.0;
  bool infinite = false;
};

ChannelGains dr_gains(const Matrix& sigma, double capacity,
                      const Tolerances& tols = default_tols());

/// Total capacity actually consumed: sum of budgets (+inf when any budget is
/// infinite).
double capacity_used(const ChannelGains& gains);

}  // namespace cclqg
