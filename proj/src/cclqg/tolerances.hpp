#pragma once

namespace cclqg {

/// Numeric tolerances shared by every solver and check. Relative tolerances
/// are scaled by the norm of the quantity they guard unless noted.
struct Tolerances {
  double sym = 1e-8;           ///< symmetry check, relative to Frobenius norm
  double eig = 1e-9;           ///< eigendecomposition reconstruction, relative
  double lyap = 1e-10;         ///< Lyapunov residual, relative
  double dare = 1e-11;         ///< Riccati fixed-point step, relative
  int dare_max_iter = 100000;  ///< Riccati iteration cap
  double stab_margin = 1e-9;   ///< spectral radius must stay below 1 - this
  double psd = 1e-9;           ///< PSD eigenvalue floor, relative to spectral norm
  double inv = 1e-10;          ///< minimum singular value treated as invertible
  double range = 1e-9;         ///< range-inclusion residual, relative
  double clamp = 1e-10;        ///< covariance clamp window, relative
  double zero = 1e-12;         ///< eigenvalue treated as zero, relative to largest
  double bisect_rel = 1e-13;   ///< bisection bracket relative width
  double cond = 1e-9;          ///< ordering-condition witness slack
};

inline const Tolerances& default_tols() {
  static const Tolerances t{};
  return t;
}

}  // namespace cclqg
