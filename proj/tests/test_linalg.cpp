#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cclqg/errors.hpp"
#include "cclqg/linalg.hpp"
#include "test_util.hpp"

using namespace cclqg;
using testutil::MatrixXd;

TEST_CASE("sym_eig identity") {
  SymEig eig = sym_eig(Matrix::Identity(4, 4));
  CHECK(eig.eigenvalues.isApproxToConstant(1.0, 1e-14));
  CHECK(eig.eigenvectors.isApprox(Matrix::Identity(4, 4), 1e-14));
}

TEST_CASE("sym_eig known 2x2") {
  Matrix s(2, 2);
  s << 2.0, 1.0, 1.0, 2.0;
  SymEig eig = sym_eig(s);
  CHECK(eig.eigenvalues[0] == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(eig.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-12));
  // both eigenvectors have equal-magnitude entries; the first max entry is positive
  CHECK(eig.eigenvectors(0, 0) > 0.0);
  CHECK(eig.eigenvectors(0, 1) > 0.0);
}

TEST_CASE("sym_eig rejects asymmetry") {
  Matrix s(2, 2);
  s << 1.0, 0.5, -0.5, 1.0;
  CHECK_THROWS_WITH_AS(sym_eig(s), doctest::Contains("symmetric"), Error);
}

TEST_CASE("sym_eig reconstruction and conventions on random matrices") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 50; ++trial) {
    int d = 1 + static_cast<int>(rng() % 8);
    Matrix s = testutil::random_symmetric(rng, d, 2.0);
    SymEig eig = sym_eig(s);
    Matrix rec = eig.eigenvectors * eig.eigenvalues.asDiagonal() * eig.eigenvectors.transpose();
    CHECK((rec - s).norm() <= 1e-9 * std::max(1.0, s.norm()));
    CHECK((eig.eigenvectors.transpose() * eig.eigenvectors - Matrix::Identity(d, d)).norm() < 1e-12);
    for (int k = 0; k + 1 < d; ++k) CHECK(eig.eigenvalues[k] >= eig.eigenvalues[k + 1]);
    for (int k = 0; k < d; ++k) {
      Eigen::Index imax;
      eig.eigenvectors.col(k).cwiseAbs().maxCoeff(&imax);
      CHECK(eig.eigenvectors(imax, k) > 0.0);
    }
  }
}

TEST_CASE("spectral radius estimates") {
  CHECK(spectral_radius(Matrix::Constant(1, 1, -0.97)) == doctest::Approx(0.97));
  Matrix rot(2, 2);  // rotation scaled by 0.8: complex pair of modulus 0.8
  rot << 0.0, -0.8, 0.8, 0.0;
  CHECK(spectral_radius(rot) == doctest::Approx(0.8).epsilon(1e-6));
  Matrix jordan(2, 2);
  jordan << 0.95, 0.05, 0.0, 0.95;
  double est = spectral_radius(jordan);
  CHECK(est >= 0.95);
  CHECK(est < 1.0);
  Matrix nil(2, 2);
  nil << 0.0, 1.0, 0.0, 0.0;
  CHECK(spectral_radius(nil) == doctest::Approx(0.0));
}

TEST_CASE("solve_lyapunov zero transition returns the noise covariance") {
  std::mt19937_64 rng(7);
  Matrix q = testutil::random_psd(rng, 3);
  Matrix sigma = solve_lyapunov(Matrix::Zero(3, 3), q);
  CHECK((sigma - q).norm() < 1e-12 * q.norm());
}

TEST_CASE("solve_lyapunov scalar closed form") {
  Matrix a = Matrix::Constant(1, 1, 0.9);
  Matrix q = Matrix::Constant(1, 1, 1.0);
  Matrix sigma = solve_lyapunov(a, q);
  CHECK(sigma(0, 0) == doctest::Approx(1.0 / (1.0 - 0.81)).epsilon(1e-12));
  CHECK(sigma(0, 0) == doctest::Approx(5.263157894736842).epsilon(1e-12));
}

TEST_CASE("solve_lyapunov rejects unstable transitions") {
  CHECK_THROWS_AS(solve_lyapunov(Matrix::Constant(1, 1, 1.01), Matrix::Constant(1, 1, 1.0)), Error);
  try {
    solve_lyapunov(Matrix::Constant(1, 1, 1.0), Matrix::Constant(1, 1, 1.0));
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Unstable);
  }
}

TEST_CASE("solve_lyapunov matches the fixed-point reference on random systems") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 30; ++trial) {
    int d = 1 + static_cast<int>(rng() % 6);
    Matrix a = testutil::random_stable(rng, d, 0.2 + 0.7 * (trial % 8) / 8.0);
    Matrix q = testutil::random_psd(rng, d);
    Matrix sigma = solve_lyapunov(a, q);
    Matrix ref = testutil::lyapunov_oracle(a, q);
    CHECK((sigma - ref).norm() <= 1e-9 * std::max(1.0, ref.norm()));
    CHECK((a * sigma * a.transpose() + q - sigma).norm() <= 1e-10 * (sigma.norm() + q.norm()));
  }
}

TEST_CASE("solve_dare scalar closed form") {
  Matrix a = Matrix::Constant(1, 1, 0.95);
  Matrix c = Matrix::Constant(1, 1, 1.0);
  Matrix one = Matrix::Constant(1, 1, 1.0);
  Matrix p = solve_dare(a, c, one, one);
  double x = 1.0 + (0.95 * 0.95 - 1.0);
  double expect = 0.5 * (x + std::sqrt(x * x + 4.0));
  CHECK(p(0, 0) == doctest::Approx(expect).epsilon(1e-10));
  CHECK(p(0, 0) == doctest::Approx(1.548349158007).epsilon(1e-9));
}

TEST_CASE("solve_dare upper-triangular block matches the fixed-point reference") {
  Matrix a(2, 2);
  a << 0.95, 0.05, 0.0, 0.95;
  Matrix c = Matrix::Identity(2, 2);
  Matrix q = Matrix::Identity(2, 2);
  Matrix p = solve_dare(a, c, q, q);
  Matrix ref = testutil::dare_oracle(a, c, q, q);
  CHECK((p - ref).norm() <= 1e-9 * ref.norm());
  // self-consistency: p = a m a^T + sw with m the posterior update of p
  Matrix innov = c * p * c.transpose() + q;
  Matrix m = p - p * c.transpose() * innov.inverse() * c * p;
  CHECK((a * m * a.transpose() + q - p).norm() <= 1e-9 * p.norm());
  CHECK(testutil::min_eig(m) >= -1e-12);
}

TEST_CASE("solve_dare with no observability reduces to the stationary covariance") {
  std::mt19937_64 rng(9);
  Matrix a = testutil::random_stable(rng, 3, 0.9);
  Matrix q = testutil::random_psd(rng, 3);
  Matrix c = Matrix::Zero(1, 3);
  Matrix sv = Matrix::Constant(1, 1, 1.0);
  Matrix p = solve_dare(a, c, q, sv);
  Matrix sigma = solve_lyapunov(a, q);
  CHECK((p - sigma).norm() <= 1e-8 * std::max(1.0, sigma.norm()));
}

TEST_CASE("solve_dare random systems match the reference and stay consistent") {
  std::mt19937_64 rng(4242);
  for (int trial = 0; trial < 25; ++trial) {
    int d = 1 + static_cast<int>(rng() % 4);
    int m = 1 + static_cast<int>(rng() % 3);
    Matrix a = testutil::random_stable(rng, d, 0.3 + 0.65 * (trial % 5) / 5.0);
    Matrix c = testutil::random_matrix(rng, m, d);
    Matrix sw = testutil::random_psd(rng, d);
    Matrix sv = testutil::random_spd(rng, m);
    Matrix p = solve_dare(a, c, sw, sv);
    Matrix ref = testutil::dare_oracle(a, c, sw, sv);
    CHECK((p - ref).norm() <= 1e-8 * std::max(1.0, ref.norm()));
  }
}

TEST_CASE("solve_dare reports a singular innovation") {
  Matrix a = Matrix::Constant(1, 1, 0.5);
  Matrix c = Matrix::Zero(1, 1);
  Matrix sw = Matrix::Constant(1, 1, 1.0);
  Matrix sv = Matrix::Zero(1, 1);
  try {
    solve_dare(a, c, sw, sv);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SingularInnovation);
  }
}

TEST_CASE("psd_leq basics") {
  Matrix x = Matrix::Identity(2, 2);
  CHECK(psd_leq(x, x, 1e-9).holds);
  PsdOrder strict = psd_leq(x, 2.0 * x, 1e-9);
  CHECK(strict.holds);
  CHECK(strict.witness == doctest::Approx(1.0));
  PsdOrder fails = psd_leq(2.0 * x, x, 1e-9);
  CHECK_FALSE(fails.holds);
  CHECK(fails.witness == doctest::Approx(-1.0));
}

TEST_CASE("psd_leq tolerates tiny violations relative to the bound") {
  Matrix y = Matrix::Identity(3, 3) * 5.0;
  Matrix x = y + Matrix::Identity(3, 3) * 2e-9;  // witness -2e-9 vs tol 1e-9 * max(1,5)
  CHECK(psd_leq(x, y, 1e-9).holds);
  Matrix xbad = y + Matrix::Identity(3, 3) * 1e-6;
  CHECK_FALSE(psd_leq(xbad, y, 1e-9).holds);
}

TEST_CASE("sqrt_psd reconstructs") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    int d = 1 + static_cast<int>(rng() % 6);
    Matrix s = testutil::random_psd(rng, d, 1.5);
    Matrix r = sqrt_psd(s);
    CHECK((r * r.transpose() - s).norm() <= 1e-10 * std::max(1.0, s.norm()));
    CHECK((r - r.transpose()).norm() <= 1e-12 * std::max(1.0, r.norm()));
  }
}

TEST_CASE("sqrt_psd handles rank deficiency and rejects indefinite input") {
  Matrix s(2, 2);
  s << 1.0, 0.0, 0.0, 0.0;
  Matrix r = sqrt_psd(s);
  CHECK((r * r.transpose() - s).norm() < 1e-14);

  Matrix bad(2, 2);
  bad << 1.0, 0.0, 0.0, -0.5;
  try {
    sqrt_psd(bad);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotPsd);
  }
}

TEST_CASE("dimension mismatches are rejected") {
  CHECK_THROWS_AS(psd_leq(Matrix::Identity(2, 2), Matrix::Identity(3, 3), 1e-9), Error);
  CHECK_THROWS_AS(solve_lyapunov(Matrix::Identity(2, 2) * 0.5, Matrix::Identity(3, 3)), Error);
}
