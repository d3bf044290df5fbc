#include "cclqg/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

#include "cclqg/errors.hpp"

namespace cclqg {

namespace {

void require_square(const Matrix& m, const char* name) {
  if (m.rows() != m.cols()) raise(ErrorCode::DimensionMismatch, std::string(name) + " must be square");
}

void require_symmetric(const Matrix& s, double tol, const char* name) {
  double asym = (s - s.transpose()).norm();
  if (asym > tol * std::max(1.0, s.norm()))
    raise(ErrorCode::NotSymmetric, std::string(name) + " is not symmetric");
}

// Deterministic unit start vectors for power iteration.
Vector power_start(Eigen::Index d, int which) {
  Vector v(d);
  std::uint64_t s = 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(which + 1);
  for (Eigen::Index i = 0; i < d; ++i) {
    s += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z ^= z >> 31;
    v[i] = static_cast<double>(z >> 11) * 0x1p-53 - 0.5;
  }
  if (v.norm() == 0.0) v.setOnes();
  return v.normalized();
}

}  // namespace

SymEig sym_eig(const Matrix& s, const Tolerances& tols) {
  require_square(s, "matrix");
  require_symmetric(s, tols.sym, "matrix");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetrize(s));
  if (solver.info() != Eigen::Success) raise(ErrorCode::NoConvergence, "eigendecomposition failed");

  const Eigen::Index d = s.rows();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(d));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  const Vector& raw = solver.eigenvalues();
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return raw[i] > raw[j]; });

  SymEig out;
  out.eigenvalues.resize(d);
  out.eigenvectors.resize(d, d);
  for (Eigen::Index k = 0; k < d; ++k) {
    out.eigenvalues[k] = raw[order[static_cast<std::size_t>(k)]];
    Vector v = solver.eigenvectors().col(order[static_cast<std::size_t>(k)]);
    Eigen::Index imax = 0;
    double amax = -1.0;
    for (Eigen::Index i = 0; i < d; ++i) {
      if (std::abs(v[i]) > amax) {
        amax = std::abs(v[i]);
        imax = i;
      }
    }
    if (v[imax] < 0.0) v = -v;
    out.eigenvectors.col(k) = v;
  }
  return out;
}

double spectral_radius(const Matrix& a) {
  require_square(a, "matrix");
  const Eigen::Index d = a.rows();
  if (d == 0) return 0.0;
  if (d == 1) return std::abs(a(0, 0));

  const int iters = std::max<int>(2000, 20 * static_cast<int>(d));
  double best = 0.0;
  for (int start = 0; start < 3; ++start) {
    Vector v = power_start(d, start);
    double logsum = 0.0;
    int steps = 0;
    for (int k = 0; k < iters; ++k) {
      Vector w = a * v;
      double n = w.norm();
      if (n < 1e-290) {
        logsum = -std::numeric_limits<double>::infinity();
        steps = std::max(steps, 1);
        break;
      }
      logsum += std::log(n);
      ++steps;
      v = w / n;
    }
    double est = steps > 0 ? std::exp(logsum / steps) : 0.0;
    best = std::max(best, est);
  }
  return best;
}

bool is_stable(const Matrix& a, const Tolerances& tols) {
  return spectral_radius(a) < 1.0 - tols.stab_margin;
}

double sym_spectral_norm(const Matrix& s) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetrize(s), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) raise(ErrorCode::NoConvergence, "eigendecomposition failed");
  double hi = solver.eigenvalues().size() ? solver.eigenvalues().cwiseAbs().maxCoeff() : 0.0;
  return hi;
}

Matrix solve_lyapunov(const Matrix& a, const Matrix& q, const Tolerances& tols) {
  require_square(a, "transition");
  require_square(q, "noise covariance");
  if (a.rows() != q.rows()) raise(ErrorCode::DimensionMismatch, "transition and covariance disagree");
  require_symmetric(q, tols.sym, "noise covariance");
  if (!is_stable(a, tols)) raise(ErrorCode::Unstable, "transition matrix is not stable");

  // Doubling accumulation of sum_k a^k q (a^k)^T.
  Matrix s = symmetrize(q);
  Matrix t = a;
  for (int j = 0; j < 200; ++j) {
    if (t.norm() < 1e-150) break;
    s = symmetrize(s + t * s * t.transpose());
    t = t * t;
  }

  double residual = (a * s * a.transpose() + q - s).norm();
  if (residual > tols.lyap * (s.norm() + q.norm()) + 1e-300)
    raise(ErrorCode::NoConvergence, "stationary covariance residual too large");
  return s;
}

Matrix solve_dare(const Matrix& a, const Matrix& c, const Matrix& sw, const Matrix& sv,
                  const Tolerances& tols) {
  require_square(a, "transition");
  require_square(sw, "process covariance");
  require_square(sv, "observation covariance");
  if (a.rows() != sw.rows() || c.cols() != a.rows() || sv.rows() != c.rows())
    raise(ErrorCode::DimensionMismatch, "system matrices disagree");
  require_symmetric(sw, tols.sym, "process covariance");
  require_symmetric(sv, tols.sym, "observation covariance");
  if (!is_stable(a, tols)) raise(ErrorCode::Unstable, "transition matrix is not stable");

  Matrix p = symmetrize(sw);
  for (int it = 0; it < tols.dare_max_iter; ++it) {
    Matrix innov = symmetrize(c * p * c.transpose() + sv);
    Eigen::LLT<Matrix> llt(innov);
    if (llt.info() != Eigen::Success)
      raise(ErrorCode::SingularInnovation, "innovation covariance is not positive definite");
    Matrix cp = c * p;
    Matrix m = symmetrize(p - cp.transpose() * llt.solve(cp));
    Matrix next = symmetrize(a * m * a.transpose() + sw);
    double delta = (next - p).norm();
    p = next;
    if (delta <= tols.dare * std::max(1.0, p.norm())) return p;
  }
  raise(ErrorCode::NoConvergence, "Riccati iteration did not converge");
}

PsdOrder psd_leq(const Matrix& x, const Matrix& y, double tol) {
  if (x.rows() != y.rows() || x.cols() != y.cols() || x.rows() != x.cols())
    raise(ErrorCode::DimensionMismatch, "ordering operands disagree");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetrize(y - x), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) raise(ErrorCode::NoConvergence, "eigendecomposition failed");
  PsdOrder out;
  out.witness = solver.eigenvalues().size() ? solver.eigenvalues().minCoeff() : 0.0;
  out.holds = out.witness >= -tol * std::max(1.0, sym_spectral_norm(y));
  return out;
}

Matrix sqrt_psd(const Matrix& s, const Tolerances& tols) {
  SymEig eig = sym_eig(s, tols);
  double top = eig.eigenvalues.size() ? eig.eigenvalues.cwiseAbs().maxCoeff() : 0.0;
  Vector lam = eig.eigenvalues;
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    if (lam[i] < -tols.psd * std::max(1.0, top))
      raise(ErrorCode::NotPsd, "matrix has a negative eigenvalue");
    lam[i] = std::max(lam[i], 0.0);
  }
  return eig.eigenvectors * lam.cwiseSqrt().asDiagonal() * eig.eigenvectors.transpose();
}

}  // namespace cclqg
