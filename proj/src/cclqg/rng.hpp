#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace cclqg {

/// SplitMix64 finalizer, used to spread seeds.
std::uint64_t mix64(std::uint64_t x);

/// Derives an independent stream seed from a root seed, a purpose tag and an
/// index. Trajectory i of an experiment uses streams (root, tag, i), so
/// results do not depend on how work is split across threads.
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t tag, std::uint64_t index);

/// Standard-normal stream over mt19937_64 with an explicit Box-Muller
/// transform, so draws are reproducible for a fixed seed.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : engine_(seed) {}

  double operator()() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = next_unit();
    double u2 = next_unit();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * kPi * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  Eigen::VectorXd vector(Eigen::Index n) {
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = (*this)();
    return v;
  }

 private:
  static constexpr double kPi = 3.141592653589793238462643383279502884;

  double next_unit() {
    // (0,1), never exactly 0 or 1
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1p-53;
  }

  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace cclqg
