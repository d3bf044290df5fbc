#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cclqg/errors.hpp"
#include "cclqg/kalman.hpp"
#include "cclqg/linalg.hpp"
#include "cclqg/system.hpp"
#include "test_util.hpp"

using namespace cclqg;

namespace {

LqgSystem scalar_system(double a, double c, double s2w, double s2v, double s0) {
  return make_system(Matrix::Constant(1, 1, a), Matrix::Constant(1, 1, c),
                     Matrix::Constant(1, 1, s0), Matrix::Constant(1, 1, s2w),
                     Matrix::Constant(1, 1, s2v));
}

// frozen fixed points for a=0.95, c=1, s2w=s2v=1 (stationary start)
constexpr double kSigma = 10.256410256410256;
constexpr double kP = 1.5483491580076634;
constexpr double kM = 0.6075890947446498;
constexpr double kR = kSigma - kM;  // 9.648821161665606

}  // namespace

TEST_CASE("one filter step matches hand algebra") {
  double a = 0.8, c = 2.0, s2w = 0.5, s2v = 0.25, s0 = 1.0;
  LqgSystem sys = scalar_system(a, c, s2w, s2v, s0);
  FilterState st = initial_filter_state(sys);
  CHECK(st.mean(0) == 0.0);
  CHECK(st.cov(0, 0) == s0);

  double y = 1.3;
  FilterState next = filter_step(st, Vector::Constant(1, y), sys);

  double prior = a * a * s0 + s2w;
  double s = c * c * prior + s2v;
  double gain = prior * c / s;
  double mean = a * 0.0 + gain * (y - c * a * 0.0);
  double post = prior - gain * c * prior;
  CHECK(next.t == 1);
  CHECK(next.mean(0) == doctest::Approx(mean).epsilon(1e-14));
  CHECK(next.cov(0, 0) == doctest::Approx(post).epsilon(1e-14));
}

TEST_CASE("scalar schedule converges to the frozen fixed point") {
  LqgSystem sys = scalar_system(0.95, 1.0, 1.0, 1.0, kSigma);
  CovSchedule cs = covariance_schedule(sys, 400);
  REQUIRE(cs.horizon == 400);
  // stationary start keeps the unconditional variance pinned for all t
  for (int t : {1, 10, 400}) CHECK(cs.v[t - 1](0, 0) == doctest::Approx(kSigma).epsilon(1e-12));
  CHECK(cs.m[399](0, 0) == doctest::Approx(kM).epsilon(1e-12));
  CHECK(cs.p[399](0, 0) == doctest::Approx(kP).epsilon(1e-12));
  CHECK(cs.r[399](0, 0) == doctest::Approx(kR).epsilon(1e-12));
  // posterior is monotone decreasing from the prior toward the limit
  CHECK(cs.m[0](0, 0) > cs.m[1](0, 0));
  CHECK(cs.m[1](0, 0) > kM - 1e-12);
}

TEST_CASE("first-step quantities agree with direct formulas") {
  double a = 0.9, c = 1.5, s2w = 0.7, s2v = 0.4, s0 = 2.0;
  LqgSystem sys = scalar_system(a, c, s2w, s2v, s0);
  CovSchedule cs = covariance_schedule(sys, 3);
  double v1 = a * a * s0 + s2w;
  CHECK(cs.v[0](0, 0) == doctest::Approx(v1).epsilon(1e-14));
  double m1 = v1 - v1 * c * c * v1 / (c * c * v1 + s2v);
  CHECK(cs.m[0](0, 0) == doctest::Approx(m1).epsilon(1e-13));
  CHECK(cs.p[0](0, 0) == doctest::Approx(a * a * m1 + s2w).epsilon(1e-13));
  CHECK(cs.r[0](0, 0) == doctest::Approx(v1 - m1).epsilon(1e-13));
  double v2 = a * a * v1 + s2w;
  CHECK(cs.v[1](0, 0) == doctest::Approx(v2).epsilon(1e-14));
}

TEST_CASE("steady_state matches the frozen scalar constants") {
  LqgSystem sys = scalar_system(0.95, 1.0, 1.0, 1.0, kSigma);
  SteadyState ss = steady_state(sys);
  CHECK(ss.sigma(0, 0) == doctest::Approx(kSigma).epsilon(1e-12));
  CHECK(ss.p(0, 0) == doctest::Approx(kP).epsilon(1e-12));
  CHECK(ss.m(0, 0) == doctest::Approx(kM).epsilon(1e-12));
  double l = kP / (kP + 1.0);
  CHECK(ss.l(0, 0) == doctest::Approx(l).epsilon(1e-12));
  CHECK(ss.k(0, 0) == doctest::Approx(0.95 * (1.0 - l)).epsilon(1e-12));
}

TEST_CASE("steady_state agrees with independent oracles on random systems") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    int d = 2 + static_cast<int>(trial % 3);
    Matrix a = testutil::random_stable(rng, d, 0.5 + 0.04 * (trial % 10));
    Matrix c = testutil::random_matrix(rng, d, d);
    Matrix sw = testutil::random_spd(rng, d);
    Matrix sv = testutil::random_spd(rng, d);
    LqgSystem sys = make_system(a, c, Matrix::Identity(d, d), sw, sv);
    SteadyState ss = steady_state(sys);

    Matrix sigma_o = testutil::lyapunov_oracle(a, sw);
    Matrix p_o = testutil::dare_oracle(a, c, sw, sv);
    CHECK((ss.sigma - sigma_o).norm() <= 1e-8 * std::max(1.0, sigma_o.norm()));
    CHECK((ss.p - p_o).norm() <= 1e-8 * std::max(1.0, p_o.norm()));
    // fixed-point identities
    Matrix s = c * ss.p * c.transpose() + sv;
    Matrix m_id = ss.p - ss.p * c.transpose() * s.inverse() * c * ss.p;
    CHECK((ss.m - m_id).norm() <= 1e-8 * std::max(1.0, m_id.norm()));
    Matrix l_id = ss.p * c.transpose() * s.inverse();
    CHECK((ss.l - l_id).norm() <= 1e-8 * std::max(1.0, l_id.norm()));
    Matrix k_id = (Matrix::Identity(d, d) - ss.l * c) * a;
    CHECK((ss.k - k_id).norm() <= 1e-9 * std::max(1.0, k_id.norm()));
    // the error dynamics of the stationary filter must be stable
    CHECK(spectral_radius(ss.k) < 1.0);
  }
}

TEST_CASE("finite schedule approaches the stationary solution") {
  std::mt19937_64 rng(47);
  Matrix a = testutil::random_stable(rng, 3, 0.85);
  Matrix c = testutil::random_matrix(rng, 2, 3);
  Matrix sw = testutil::random_spd(rng, 3);
  Matrix sv = testutil::random_spd(rng, 2);
  LqgSystem sys = make_system(a, c, Matrix::Zero(3, 3), sw, sv);
  SteadyState ss = steady_state(sys);
  CovSchedule cs = covariance_schedule(sys, 300);
  CHECK((cs.m[299] - ss.m).norm() <= 1e-8 * ss.m.norm());
  CHECK((cs.p[299] - ss.p).norm() <= 1e-8 * ss.p.norm());
  // unconditional covariance converges to the stationary covariance
  CHECK((cs.v[299] - ss.sigma).norm() <= 1e-6 * ss.sigma.norm());
}

TEST_CASE("diagonal systems decouple into scalar recursions") {
  const double as[3] = {0.99, 0.95, 0.9};
  Matrix a = Matrix::Zero(3, 3);
  for (int i = 0; i < 3; ++i) a(i, i) = as[i];
  LqgSystem sys = make_system(a, Matrix::Identity(3, 3), Matrix::Zero(3, 3),
                              Matrix::Identity(3, 3), Matrix::Identity(3, 3));
  SteadyState ss = steady_state(sys);
  for (int i = 0; i < 3; ++i) {
    LqgSystem sc = scalar_system(as[i], 1.0, 1.0, 1.0, 0.0);
    SteadyState sss = steady_state(sc);
    CHECK(ss.m(i, i) == doctest::Approx(sss.m(0, 0)).epsilon(1e-10));
    CHECK(ss.p(i, i) == doctest::Approx(sss.p(0, 0)).epsilon(1e-10));
    CHECK(ss.l(i, i) == doctest::Approx(sss.l(0, 0)).epsilon(1e-10));
    // K = (I - LC)A stays diagonal with entries a*s2v/(c^2 p + s2v)
    double p = sss.p(0, 0);
    CHECK(ss.k(i, i) == doctest::Approx(as[i] * 1.0 / (p + 1.0)).epsilon(1e-10));
  }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j) CHECK(std::abs(ss.k(i, j)) < 1e-12);
}

TEST_CASE("no observation means no information") {
  LqgSystem sys = make_system(Matrix::Constant(1, 1, 0.9), Matrix::Zero(1, 1),
                              Matrix::Constant(1, 1, 2.0), Matrix::Constant(1, 1, 1.0),
                              Matrix::Constant(1, 1, 1.0));
  CovSchedule cs = covariance_schedule(sys, 50);
  for (int t = 1; t <= 50; ++t) {
    CHECK(cs.m[t - 1](0, 0) == doctest::Approx(cs.v[t - 1](0, 0)).epsilon(1e-13));
    CHECK(std::abs(cs.r[t - 1](0, 0)) <= 1e-12);
  }
}

TEST_CASE("filter_step rejects a singular innovation") {
  LqgSystem sys = make_system(Matrix::Constant(1, 1, 0.9), Matrix::Constant(1, 1, 1.0),
                              Matrix::Zero(1, 1), Matrix::Zero(1, 1), Matrix::Zero(1, 1));
  FilterState st = initial_filter_state(sys);
  try {
    filter_step(st, Vector::Zero(1), sys);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SingularInnovation);
  }
}

TEST_CASE("posterior never exceeds the unconditional covariance") {
  std::mt19937_64 rng(91);
  for (int trial = 0; trial < 10; ++trial) {
    Matrix a = testutil::random_stable(rng, 3, 0.9);
    Matrix c = testutil::random_matrix(rng, 1, 3);
    Matrix sw = testutil::random_spd(rng, 3);
    Matrix sv = testutil::random_spd(rng, 1);
    Matrix s0 = testutil::random_psd(rng, 3);
    LqgSystem sys = make_system(a, c, s0, sw, sv);
    CovSchedule cs = covariance_schedule(sys, 30);
    Tolerances tol = default_tols();
    for (int t = 1; t <= 30; ++t) {
      CHECK(psd_leq(cs.m[t - 1], cs.v[t - 1], tol.cond).holds);
      CHECK(testutil::min_eig(cs.r[t - 1]) >= -1e-9 * std::max(1.0, cs.v[t - 1].norm()));
    }
  }
}

TEST_CASE("spread of the conditional mean matches the schedule") {
  // Var(filtered mean at t) should equal R_t = V_t - M_t; checked by Monte Carlo
  LqgSystem sys = scalar_system(0.95, 1.0, 1.0, 1.0, kSigma);
  const int n = 20000;
  const int horizon = 20;
  TrajectoryBatch b = sample_trajectories(sys, horizon, n, 424242);
  CovSchedule cs = covariance_schedule(sys, horizon);

  std::vector<double> sum(horizon, 0.0), sumsq(horizon, 0.0);
  std::vector<double> errsq(horizon, 0.0);
  for (int i = 0; i < n; ++i) {
    FilterState st = initial_filter_state(sys);
    for (int t = 1; t <= horizon; ++t) {
      st = filter_step(st, b.observations[i].row(t - 1).transpose(), sys);
      double mu = st.mean(0);
      sum[t - 1] += mu;
      sumsq[t - 1] += mu * mu;
      double err = b.latents[i](t, 0) - mu;
      errsq[t - 1] += err * err;
    }
  }
  for (int t : {1, 5, 20}) {
    double mean = sum[t - 1] / n;
    double var = sumsq[t - 1] / n - mean * mean;
    double r = cs.r[t - 1](0, 0);
    double se = r * std::sqrt(2.0 / (n - 1));
    CHECK(std::abs(var - r) <= 4.0 * se);
    // mean squared filtering error matches M_t
    double mse = errsq[t - 1] / n;
    double m = cs.m[t - 1](0, 0);
    double mse_se = m * std::sqrt(2.0 / (n - 1));
    CHECK(std::abs(mse - m) <= 4.0 * mse_se);
  }
}

TEST_CASE("schedule rejects nonsense horizons") {
  LqgSystem sys = scalar_system(0.9, 1.0, 1.0, 1.0, 1.0);
  CHECK_THROWS_AS(covariance_schedule(sys, 0), Error);
  CHECK_THROWS_AS(covariance_schedule(sys, -3), Error);
}
