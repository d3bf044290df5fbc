#include "cclqg/kalman.hpp"

#include <cmath>

#include "cclqg/errors.hpp"

namespace cclqg {

namespace {

Eigen::LLT<Matrix> innovation_llt(const Matrix& c, const Matrix& p, const Matrix& sv) {
  Eigen::LLT<Matrix> llt(symmetrize(c * p * c.transpose() + sv));
  if (llt.info() != Eigen::Success)
    raise(ErrorCode::SingularInnovation, "innovation covariance is not positive definite");
  return llt;
}

// Clamps small negative eigenvalues of a nominally-PSD matrix to zero;
// violations beyond the window are an internal inconsistency.
Matrix clamp_psd(const Matrix& s, double scale, const Tolerances& tols) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetrize(s));
  if (solver.info() != Eigen::Success) raise(ErrorCode::NoConvergence, "eigendecomposition failed");
  Vector lam = solver.eigenvalues();
  if (lam.size() == 0 || lam.minCoeff() >= 0.0) return symmetrize(s);
  if (lam.minCoeff() < -tols.clamp * std::max(1.0, scale))
    raise(ErrorCode::NotPsd, "covariance difference is not positive semidefinite");
  for (Eigen::Index i = 0; i < lam.size(); ++i) lam[i] = std::max(lam[i], 0.0);
  return solver.eigenvectors() * lam.asDiagonal() * solver.eigenvectors().transpose();
}

}  // namespace

FilterState initial_filter_state(const LqgSystem& system) {
  FilterState s;
  s.t = 0;
  s.mean = Vector::Zero(system.dim());
  s.cov = symmetrize(system.sigma0);
  return s;
}

FilterState filter_step(const FilterState& state, const Vector& y, const LqgSystem& system,
                        const Tolerances& tols) {
  if (state.mean.size() != system.dim() || y.size() != system.obs_dim())
    raise(ErrorCode::DimensionMismatch, "filter state or observation has the wrong shape");

  Matrix p = symmetrize(system.a * state.cov * system.a.transpose() + system.sw);
  Eigen::LLT<Matrix> llt = innovation_llt(system.c, p, system.sv);
  Matrix cp = system.c * p;  // m x d

  FilterState out;
  out.t = state.t + 1;
  Vector predicted = system.a * state.mean;
  out.mean = predicted + cp.transpose() * llt.solve(y - system.c * predicted);
  out.cov = symmetrize(p - cp.transpose() * llt.solve(cp));
  (void)tols;
  return out;
}

CovSchedule covariance_schedule(const LqgSystem& system, int horizon, const Tolerances& tols) {
  if (horizon < 1) raise(ErrorCode::InvalidArgument, "horizon must be at least 1");

  CovSchedule sched;
  sched.horizon = horizon;
  sched.v.reserve(static_cast<std::size_t>(horizon));
  sched.m.reserve(static_cast<std::size_t>(horizon));
  sched.p.reserve(static_cast<std::size_t>(horizon));
  sched.r.reserve(static_cast<std::size_t>(horizon));

  Matrix v = symmetrize(system.sigma0);
  Matrix m = v;
  for (int t = 1; t <= horizon; ++t) {
    Matrix prior = symmetrize(system.a * m * system.a.transpose() + system.sw);
    Eigen::LLT<Matrix> llt = innovation_llt(system.c, prior, system.sv);
    Matrix cp = system.c * prior;
    m = symmetrize(prior - cp.transpose() * llt.solve(cp));
    v = symmetrize(system.a * v * system.a.transpose() + system.sw);

    sched.v.push_back(v);
    sched.m.push_back(m);
    sched.p.push_back(symmetrize(system.a * m * system.a.transpose() + system.sw));
    sched.r.push_back(clamp_psd(v - m, sym_spectral_norm(v), tols));
  }
  return sched;
}

SteadyState steady_state(const LqgSystem& system, const Tolerances& tols) {
  SteadyState ss;
  ss.sigma = solve_lyapunov(system.a, system.sw, tols);
  ss.p = solve_dare(system.a, system.c, system.sw, system.sv, tols);
  Eigen::LLT<Matrix> llt = innovation_llt(system.c, ss.p, system.sv);
  Matrix cp = system.c * ss.p;
  ss.m = symmetrize(ss.p - cp.transpose() * llt.solve(cp));
  ss.l = llt.solve(cp).transpose();  // p c^T (c p c^T + sv)^-1
  const Eigen::Index d = system.dim();
  ss.k = (Matrix::Identity(d, d) - ss.l * system.c) * system.a;
  return ss;
}

}  // namespace cclqg
