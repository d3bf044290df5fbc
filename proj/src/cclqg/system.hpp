#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cclqg/linalg.hpp"

namespace cclqg {

/// One distinct subsystem repeated `mult` times along the diagonal.
struct GroupSpec {
  std::string label;
  Matrix a;   // block transition, k x k
  Matrix c;   // block observation, mk x k
  Matrix sw;  // block process noise covariance, k x k
  Matrix sv;  // block observation noise covariance, mk x mk
  std::optional<Matrix> sigma0;  // initial covariance; defaulted when absent
  int mult = 1;

  Eigen::Index dim() const { return a.rows(); }
  Eigen::Index obs_dim() const { return c.rows(); }
};

enum class Sigma0Mode {
  Stationary,  // stationary covariance of the block (requires stability)
  Zero,
};

struct SystemStructure {
  std::vector<GroupSpec> groups;
};

/// Linear-Gaussian latent dynamics with noisy observations:
///   theta_{t+1} = a theta_t + w_t,  y_t = c theta_t + v_t,
///   theta_0 ~ N(0, sigma0), w ~ N(0, sw), v ~ N(0, sv).
struct LqgSystem {
  Matrix a;
  Matrix c;
  Matrix sigma0;
  Matrix sw;
  Matrix sv;
  bool stable = false;
  std::optional<SystemStructure> structure;  // retained when built from groups

  Eigen::Index dim() const { return a.rows(); }
  Eigen::Index obs_dim() const { return c.rows(); }
};

struct Violation {
  std::string message;
  double value = 0.0;
};

/// Builds a system from raw matrices. Throws DimensionMismatch when shapes
/// cannot form a system at all; property violations are left to validate().
LqgSystem make_system(const Matrix& a, const Matrix& c, const Matrix& sigma0, const Matrix& sw,
                      const Matrix& sv, const Tolerances& tols = default_tols());

/// Checks symmetry and definiteness of the covariance inputs. Returns one
/// entry per violated property; an empty list means the system is usable.
std::vector<Violation> validate(const LqgSystem& system, const Tolerances& tols = default_tols());

/// Assembles the block-diagonal system described by `structure`, keeping the
/// group metadata on the result.
LqgSystem build_structured(const SystemStructure& structure,
                           Sigma0Mode sigma0_mode = Sigma0Mode::Stationary,
                           const Tolerances& tols = default_tols());

/// Change of coordinates theta -> p^{1/2} theta for a positive definite
/// weight p, so that the weighted squared error becomes the plain one.
LqgSystem apply_weight(const LqgSystem& system, const Matrix& p,
                       const Tolerances& tols = default_tols());

/// Latent/observation sample paths. latents[i] is (T+1) x d with row t equal
/// to theta_t (row 0 is theta_0); observations[i] is T x m with row t-1 equal
/// to y_t.
struct TrajectoryBatch {
  int n = 0;
  int horizon = 0;
  std::uint64_t seed = 0;
  std::vector<Matrix> latents;
  std::vector<Matrix> observations;
};

/// Samples n independent trajectories of the given horizon. Each trajectory
/// draws from its own deterministic substream of `seed`, so the batch is
/// reproducible independent of evaluation order.
TrajectoryBatch sample_trajectories(const LqgSystem& system, int horizon, int n,
                                    std::uint64_t seed, const Tolerances& tols = default_tols());

/// Writes a batch as CSV rows: trajectory,step,kind,index,value.
void write_batch_csv(const TrajectoryBatch& batch, std::ostream& os);

}  // namespace cclqg
