#include "cclqg/rate_distortion.hpp"

#include <cmath>
#include <limits>

#include "cclqg/errors.hpp"

namespace cclqg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double budget_excess(const Vector& lambdas, const Eigen::VectorXi& counts, double eta,
                     double capacity) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < lambdas.size(); ++i) {
    double ratio = 2.0 * lambdas[i] / eta;
    if (ratio > 1.0) sum += counts[i] * std::log(ratio);
  }
  return sum - 2.0 * capacity;
}

}  // namespace

WaterFillResult water_fill(const Vector& lambdas, const Eigen::VectorXi& counts, double capacity,
                           const Tolerances& tols) {
  const Eigen::Index n = lambdas.size();
  if (counts.size() != n) raise(ErrorCode::DimensionMismatch, "weights and counts disagree");
  for (Eigen::Index i = 0; i < n; ++i)
    if (counts[i] < 1) raise(ErrorCode::InvalidArgument, "counts must be positive");
  if (std::isnan(capacity) || capacity < 0.0)
    raise(ErrorCode::InvalidArgument, "capacity must be nonnegative");

  double lam_max = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) lam_max = std::max(lam_max, lambdas[i]);
  for (Eigen::Index i = 0; i < n; ++i)
    if (lambdas[i] < -tols.zero * std::max(1.0, lam_max))
      raise(ErrorCode::InvalidArgument, "variances must be nonnegative");

  const double zero_floor = tols.zero * lam_max;

  WaterFillResult out;
  out.budgets = Vector::Zero(n);
  out.active.assign(static_cast<std::size_t>(n), false);

  double lam_pos_min = kInf;
  bool any_eligible = false;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (lambdas[i] > zero_floor) {
      any_eligible = true;
      lam_pos_min = std::min(lam_pos_min, lambdas[i]);
    }
  }

  auto passive_distortion = [&]() {
    double d = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) d += counts[i] * std::max(lambdas[i], 0.0);
    return d;
  };

  if (!any_eligible) {
    out.eta = 0.0;
    out.distortion = passive_distortion();
    return out;
  }

  if (std::isinf(capacity)) {
    out.infinite = true;
    out.eta = 0.0;
    out.distortion = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (lambdas[i] > zero_floor) {
        out.budgets[i] = kInf;
        out.active[static_cast<std::size_t>(i)] = true;
      }
    }
    return out;
  }

  if (capacity == 0.0) {
    out.eta = 2.0 * lam_max;
    out.distortion = passive_distortion();
    return out;
  }

  double lo = 2.0 * lam_pos_min * std::exp(-2.0 * capacity - 1.0);
  double hi = 2.0 * lam_max;
  while (hi - lo > tols.bisect_rel * hi) {
    double mid = 0.5 * (lo + hi);
    if (budget_excess(lambdas, counts, mid, capacity) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  double eta = 0.5 * (lo + hi);

  // Solve the budget equation exactly on the located active set.
  for (int round = 0; round < 3; ++round) {
    double logsum = 0.0;
    long total = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (2.0 * lambdas[i] > eta) {
        logsum += counts[i] * std::log(2.0 * lambdas[i]);
        total += counts[i];
      }
    }
    if (total == 0) break;
    double refined = std::exp((logsum - 2.0 * capacity) / static_cast<double>(total));
    if (refined == eta) break;
    eta = refined;
  }

  out.eta = eta;
  out.distortion = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    double b = 0.5 * std::max(0.0, std::log(2.0 * lambdas[i] / eta));
    out.budgets[i] = b;
    out.active[static_cast<std::size_t>(i)] = b > 0.0;
    out.distortion += counts[i] * std::min(std::max(lambdas[i], 0.0), 0.5 * eta);
  }
  return out;
}

WaterFillResult water_fill(const Vector& lambdas, double capacity, const Tolerances& tols) {
  return water_fill(lambdas, Eigen::VectorXi::Ones(lambdas.size()), capacity, tols);
}

ChannelGains dr_gains(const Matrix& sigma, double capacity, const Tolerances& tols) {
  SymEig eig = sym_eig(sigma, tols);
  const Eigen::Index d = eig.eigenvalues.size();
  double top = d ? eig.eigenvalues.cwiseAbs().maxCoeff() : 0.0;
  Vector lam = eig.eigenvalues;
  for (Eigen::Index i = 0; i < d; ++i) {
    if (lam[i] < -tols.psd * std::max(1.0, top))
      raise(ErrorCode::NotPsd, "covariance has a negative eigenvalue");
    lam[i] = std::max(lam[i], 0.0);
  }

  WaterFillResult wf = water_fill(lam, capacity, tols);

  Vector df(d), dpsi(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    double b = wf.budgets[i];
    if (std::isinf(b)) {
      df[i] = 1.0;
      dpsi[i] = 0.0;
    } else {
      double shrink = std::exp(-2.0 * b);        // e^{-2b}
      double gain = -std::expm1(-2.0 * b);       // 1 - e^{-2b}
      df[i] = gain;
      dpsi[i] = gain * shrink * lam[i];
    }
  }

  ChannelGains out;
  out.basis = eig.eigenvectors;
  out.lambdas = lam;
  out.budgets = wf.budgets;
  out.active = wf.active;
  out.eta = wf.eta;
  out.distortion = wf.distortion;
  out.infinite = wf.infinite;
  out.f = out.basis * df.asDiagonal() * out.basis.transpose();
  out.psi = out.basis * dpsi.asDiagonal() * out.basis.transpose();
  return out;
}

double capacity_used(const ChannelGains& gains) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < gains.budgets.size(); ++i) {
    if (std::isinf(gains.budgets[i])) return kInf;
    sum += gains.budgets[i];
  }
  return sum;
}

}  // namespace cclqg
