#include "cclqg/system.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "cclqg/errors.hpp"
#include "cclqg/rng.hpp"

namespace cclqg {

namespace {

constexpr std::uint64_t kLatentTag = 0x6c61746e74ULL;

double min_sym_eig(const Matrix& s) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetrize(s), Eigen::EigenvaluesOnly);
  return solver.eigenvalues().size() ? solver.eigenvalues().minCoeff() : 0.0;
}

void check_cov_shape(const Matrix& m, Eigen::Index d, const char* name) {
  if (m.rows() != d || m.cols() != d)
    raise(ErrorCode::DimensionMismatch, std::string(name) + " has the wrong shape");
}

void append_violation(std::vector<Violation>& out, const Matrix& s, double scale, bool strict,
                      const std::string& name, const Tolerances& tols) {
  double asym = (s - s.transpose()).norm();
  if (asym > tols.sym * std::max(1.0, s.norm())) {
    out.push_back({name + " is not symmetric", asym});
    return;
  }
  double lo = min_sym_eig(s);
  if (strict) {
    if (lo <= tols.psd * std::max(1.0, scale))
      out.push_back({name + " is not positive definite", lo});
  } else if (lo < -tols.psd * std::max(1.0, scale)) {
    out.push_back({name + " is not positive semidefinite", lo});
  }
}

}  // namespace

LqgSystem make_system(const Matrix& a, const Matrix& c, const Matrix& sigma0, const Matrix& sw,
                      const Matrix& sv, const Tolerances& tols) {
  if (a.rows() != a.cols()) raise(ErrorCode::DimensionMismatch, "transition must be square");
  const Eigen::Index d = a.rows();
  const Eigen::Index m = c.rows();
  if (c.cols() != d) raise(ErrorCode::DimensionMismatch, "observation map has the wrong shape");
  check_cov_shape(sigma0, d, "initial covariance");
  check_cov_shape(sw, d, "process noise covariance");
  check_cov_shape(sv, m, "observation noise covariance");

  LqgSystem out;
  out.a = a;
  out.c = c;
  out.sigma0 = sigma0;
  out.sw = sw;
  out.sv = sv;
  out.stable = is_stable(a, tols);
  return out;
}

std::vector<Violation> validate(const LqgSystem& system, const Tolerances& tols) {
  std::vector<Violation> out;
  double scale0 = sym_spectral_norm(symmetrize(system.sigma0));
  double scalew = sym_spectral_norm(symmetrize(system.sw));
  double scalev = sym_spectral_norm(symmetrize(system.sv));
  append_violation(out, system.sigma0, scale0, false, "initial covariance", tols);
  append_violation(out, system.sw, scalew, false, "process noise covariance", tols);
  append_violation(out, system.sv, scalev, true, "observation noise covariance", tols);
  return out;
}

LqgSystem build_structured(const SystemStructure& structure, Sigma0Mode sigma0_mode,
                           const Tolerances& tols) {
  if (structure.groups.empty()) raise(ErrorCode::InvalidArgument, "no groups given");

  Eigen::Index d = 0;
  Eigen::Index m = 0;
  for (const GroupSpec& g : structure.groups) {
    if (g.mult <= 0) raise(ErrorCode::InvalidArgument, "group multiplicity must be positive");
    const Eigen::Index k = g.a.rows();
    const Eigen::Index mk = g.c.rows();
    if (g.a.cols() != k || g.c.cols() != k || g.sw.rows() != k || g.sw.cols() != k ||
        g.sv.rows() != mk || g.sv.cols() != mk)
      raise(ErrorCode::InconsistentGroups, "group '" + g.label + "' blocks disagree in shape");
    if (g.sigma0 && (g.sigma0->rows() != k || g.sigma0->cols() != k))
      raise(ErrorCode::InconsistentGroups, "group '" + g.label + "' initial covariance shape");
    d += k * g.mult;
    m += mk * g.mult;
  }

  LqgSystem out;
  out.a = Matrix::Zero(d, d);
  out.c = Matrix::Zero(m, d);
  out.sigma0 = Matrix::Zero(d, d);
  out.sw = Matrix::Zero(d, d);
  out.sv = Matrix::Zero(m, m);

  Eigen::Index od = 0;
  Eigen::Index om = 0;
  bool stable = true;
  for (const GroupSpec& g : structure.groups) {
    const Eigen::Index k = g.dim();
    const Eigen::Index mk = g.obs_dim();
    bool block_stable = is_stable(g.a, tols);
    stable = stable && block_stable;

    Matrix s0;
    if (g.sigma0) {
      s0 = *g.sigma0;
    } else if (sigma0_mode == Sigma0Mode::Stationary) {
      if (!block_stable)
        raise(ErrorCode::Unstable,
              "group '" + g.label + "' is unstable; stationary initial covariance undefined");
      s0 = solve_lyapunov(g.a, g.sw, tols);
    } else {
      s0 = Matrix::Zero(k, k);
    }

    for (int r = 0; r < g.mult; ++r) {
      out.a.block(od, od, k, k) = g.a;
      out.c.block(om, od, mk, k) = g.c;
      out.sigma0.block(od, od, k, k) = s0;
      out.sw.block(od, od, k, k) = g.sw;
      out.sv.block(om, om, mk, mk) = g.sv;
      od += k;
      om += mk;
    }
  }

  out.stable = stable;
  out.structure = structure;
  return out;
}

LqgSystem apply_weight(const LqgSystem& system, const Matrix& p, const Tolerances& tols) {
  const Eigen::Index d = system.dim();
  check_cov_shape(p, d, "weight");
  SymEig eig = sym_eig(p, tols);
  double top = eig.eigenvalues.size() ? eig.eigenvalues.cwiseAbs().maxCoeff() : 0.0;
  if (eig.eigenvalues.size() == 0 || eig.eigenvalues.minCoeff() <= tols.zero * std::max(1.0, top))
    raise(ErrorCode::NotPositiveDefinite, "weight must be positive definite");

  Matrix half = eig.eigenvectors * eig.eigenvalues.cwiseSqrt().asDiagonal() *
                eig.eigenvectors.transpose();
  Matrix half_inv = eig.eigenvectors * eig.eigenvalues.cwiseSqrt().cwiseInverse().asDiagonal() *
                    eig.eigenvectors.transpose();

  LqgSystem out;
  out.a = half * system.a * half_inv;
  out.c = system.c * half_inv;
  out.sigma0 = symmetrize(half * system.sigma0 * half);
  out.sw = symmetrize(half * system.sw * half);
  out.sv = system.sv;
  out.stable = system.stable;  // similarity transform preserves the spectrum
  return out;
}

TrajectoryBatch sample_trajectories(const LqgSystem& system, int horizon, int n,
                                    std::uint64_t seed, const Tolerances& tols) {
  if (horizon < 0 || n < 0) raise(ErrorCode::InvalidArgument, "horizon and count must be nonnegative");
  const Eigen::Index d = system.dim();
  const Eigen::Index m = system.obs_dim();
  Matrix root0 = sqrt_psd(system.sigma0, tols);
  Matrix rootw = sqrt_psd(system.sw, tols);
  Matrix rootv = sqrt_psd(system.sv, tols);

  TrajectoryBatch batch;
  batch.n = n;
  batch.horizon = horizon;
  batch.seed = seed;
  batch.latents.resize(static_cast<std::size_t>(n));
  batch.observations.resize(static_cast<std::size_t>(n));

  for (int i = 0; i < n; ++i) {
    GaussianStream rng(derive_seed(seed, kLatentTag, static_cast<std::uint64_t>(i)));
    Matrix lat(horizon + 1, d);
    Matrix obs(horizon, m);
    Vector theta = root0 * rng.vector(d);
    lat.row(0) = theta.transpose();
    for (int t = 1; t <= horizon; ++t) {
      theta = system.a * theta + rootw * rng.vector(d);
      lat.row(t) = theta.transpose();
      obs.row(t - 1) = (system.c * theta + rootv * rng.vector(m)).transpose();
    }
    batch.latents[static_cast<std::size_t>(i)] = std::move(lat);
    batch.observations[static_cast<std::size_t>(i)] = std::move(obs);
  }
  return batch;
}

void write_batch_csv(const TrajectoryBatch& batch, std::ostream& os) {
  os << "trajectory,step,kind,index,value\n";
  char buf[64];
  for (int i = 0; i < batch.n; ++i) {
    const Matrix& lat = batch.latents[static_cast<std::size_t>(i)];
    const Matrix& obs = batch.observations[static_cast<std::size_t>(i)];
    for (Eigen::Index t = 0; t < lat.rows(); ++t)
      for (Eigen::Index j = 0; j < lat.cols(); ++j) {
        std::snprintf(buf, sizeof buf, "%.17g", lat(t, j));
        os << i << ',' << t << ",latent," << j << ',' << buf << '\n';
      }
    for (Eigen::Index t = 0; t < obs.rows(); ++t)
      for (Eigen::Index j = 0; j < obs.cols(); ++j) {
        std::snprintf(buf, sizeof buf, "%.17g", obs(t, j));
        os << i << ',' << t + 1 << ",obs," << j << ',' << buf << '\n';
      }
  }
}

}  // namespace cclqg
