#pragma once

#include <Eigen/Dense>

#include "cclqg/tolerances.hpp"

namespace cclqg {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline Matrix symmetrize(const Matrix& m) { return 0.5 * (m + m.transpose()); }

/// Eigendecomposition of a symmetric matrix. Eigenvalues sorted descending;
/// each eigenvector's largest-magnitude entry is made positive (first such
/// entry on ties) so the basis is deterministic.
struct SymEig {
  Vector eigenvalues;
  Matrix eigenvectors;  // columns, same order as eigenvalues
};

SymEig sym_eig(const Matrix& s, const Tolerances& tols = default_tols());

/// Estimate of the spectral radius of a (not necessarily symmetric) matrix
/// via normalized power iteration with geometric-mean growth tracking.
double spectral_radius(const Matrix& a);

bool is_stable(const Matrix& a, const Tolerances& tols = default_tols());

/// Spectral norm (largest singular value) of a symmetric matrix.
double sym_spectral_norm(const Matrix& s);

/// Solves sigma = a sigma a^T + q for stable a, PSD q.
Matrix solve_lyapunov(const Matrix& a, const Matrix& q, const Tolerances& tols = default_tols());

/// Solves the filtering Riccati equation by fixed-point iteration:
///   p <- a m a^T + sw,  m = p - p c^T (c p c^T + sv)^-1 c p.
/// Returns the prediction covariance p.
Matrix solve_dare(const Matrix& a, const Matrix& c, const Matrix& sw, const Matrix& sv,
                  const Tolerances& tols = default_tols());

/// Loewner-order test x <= y: holds iff min eig of (y - x) >= -tol * max(1, ||y||_2).
/// witness is that minimum eigenvalue.
struct PsdOrder {
  bool holds = false;
  double witness = 0.0;
};

PsdOrder psd_leq(const Matrix& x, const Matrix& y, double tol);

/// Symmetric PSD square root: returns r with r r^T = s. Eigenvalues inside
/// the PSD floor are clamped to zero; worse violations raise NotPsd.
Matrix sqrt_psd(const Matrix& s, const Tolerances& tols = default_tols());

}  // namespace cclqg
