#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "nse/error.hpp"
#include "nse/harmonics.hpp"
#include "support.hpp"

using namespace nse;
constexpr double kPi = std::numbers::pi;

namespace {

// Y_{l,m}, m >= 0, in long double: associated Legendre by the three-term
// recurrence in l, normalization from lgamma.
std::complex<long double> ylm_oracle(int l, int m, long double theta, long double phi) {
  const long double x = std::cos(theta), s = std::sin(theta);
  long double pmm = 1.0L;
  for (int i = 1; i <= m; ++i) pmm *= -(2.0L * i - 1.0L) * s;
  long double p = pmm;
  if (l > m) {
    long double prev = pmm;
    long double cur = x * (2.0L * m + 1.0L) * pmm;
    for (int ll = m + 2; ll <= l; ++ll) {
      const long double next = ((2.0L * ll - 1.0L) * x * cur - (ll + m - 1.0L) * prev) / (ll - m);
      prev = cur;
      cur = next;
    }
    p = cur;
  }
  const long double pi = 3.14159265358979323846264338327950288L;
  const long double norm =
      std::sqrt((2.0L * l + 1.0L) / (4.0L * pi)) * std::exp(0.5L * (std::lgamma(l - m + 1.0L) - std::lgamma(l + m + 1.0L)));
  return {norm * p * std::cos(m * phi), norm * p * std::sin(m * phi)};
}

}  // namespace

TEST_CASE("low-order harmonics at the north pole") {
  const auto n = UnitVector::from_angles(0.0, 0.0);
  CHECK(eval_ylm(0, 0, n).real() == doctest::Approx(1.0 / std::sqrt(4 * kPi)));
  CHECK(eval_ylm(1, 0, n).real() == doctest::Approx(std::sqrt(3.0 / (4 * kPi))));
  CHECK(std::abs(eval_ylm(3, 2, n)) < 1e-15);
}

TEST_CASE("Y_{50,30} against a long-double oracle") {
  const auto xi = UnitVector::from_angles(1.0, 0.7);
  const auto ref = ylm_oracle(50, 30, 1.0L, 0.7L);
  const auto got = eval_ylm(50, 30, xi);
  const double scale = std::abs(std::complex<double>(static_cast<double>(ref.real()), static_cast<double>(ref.imag())));
  CHECK(std::abs(got.real() - static_cast<double>(ref.real())) < 1e-12 * std::max(1.0, scale));
  CHECK(std::abs(got.imag() - static_cast<double>(ref.imag())) < 1e-12 * std::max(1.0, scale));
}

TEST_CASE("harmonics agree with the oracle across degrees") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const int l = std::uniform_int_distribution<int>(0, 80)(rng);
    const int m = std::uniform_int_distribution<int>(0, l)(rng);
    const double theta = kPi * u(rng), phi = 2 * kPi * u(rng);
    const auto ref = ylm_oracle(l, m, theta, phi);
    const auto got = eval_ylm(l, m, UnitVector::from_angles(theta, phi));
    worst = std::max(worst, std::abs(got - std::complex<double>(static_cast<double>(ref.real()),
                                                                  static_cast<double>(ref.imag()))));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("negative orders follow the Condon-Shortley convention") {
  const auto xi = UnitVector::from_angles(0.8, 1.9);
  for (int m = 1; m <= 4; ++m) {
    const auto pos = eval_ylm(5, m, xi);
    const auto neg = eval_ylm(5, -m, xi);
    const double sign = (m % 2) ? -1.0 : 1.0;
    CHECK(std::abs(neg - sign * std::conj(pos)) < 1e-14);
  }
  CHECK_THROWS_AS(eval_ylm(2, 3, xi), InvalidParameter);
  CHECK_THROWS_AS(eval_ylm(2, -3, xi), InvalidParameter);
}

TEST_CASE("Legendre kernel") {
  for (int l : {0, 1, 5}) CHECK(eval_legendre_kernel(l, 1.0) == doctest::Approx((2 * l + 1) / (4 * kPi)));
  for (double t : {-0.7, 0.0, 0.3}) CHECK(eval_legendre_kernel(1, t) == doctest::Approx(3 * t / (4 * kPi)));
  const auto vals = legendre_kernel_values(10, 0.37);
  for (int l = 0; l <= 10; ++l) CHECK(vals[l] == doctest::Approx(eval_legendre_kernel(l, 0.37)).epsilon(1e-14));
  const std::vector<double> coeffs = {0.0, 2.0, 0.0, -1.0};
  CHECK(zonal_kernel(coeffs, 0.4) == doctest::Approx(2 * eval_legendre_kernel(1, 0.4) - eval_legendre_kernel(3, 0.4)));
}

TEST_CASE("addition theorem") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto random_point = [&] { return UnitVector::from_angles(std::acos(2 * u(rng) - 1), 2 * kPi * u(rng)); };

  const auto a = UnitVector::from_angles(1.2, 0.4);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto x = trial == 0 ? a : random_point();
    const auto y = random_point();
    for (int l : {0, 3, 10, 31, 64}) {
      std::complex<double> sum = 0.0;
      for (int m = -l; m <= l; ++m) sum += eval_ylm(l, m, x) * std::conj(eval_ylm(l, m, y));
      worst = std::max(worst, std::abs(sum - eval_legendre_kernel(l, x.dot(y))));
    }
  }
  CHECK(worst < 1e-11);
}

TEST_CASE("forward transform of simple fields") {
  const Pixelization pix(8);
  SUBCASE("constant") {
    const std::vector<double> ones(pix.size(), 1.0);
    const auto alm = forward_sht(ones, pix, 4);
    CHECK(alm(0, 0).real() == doctest::Approx(std::sqrt(4 * kPi)));
    for (std::size_t i = 1; i < alm.size(); ++i) CHECK(std::abs(alm.data()[i]) < 1e-13);
  }
  SUBCASE("Re Y_{3,2}") {
    std::vector<double> f(pix.size());
    for (std::size_t k = 0; k < pix.size(); ++k) f[k] = eval_ylm(3, 2, pix.point(k)).real();
    const auto alm = forward_sht(f, pix, 6);
    for (int l = 0; l <= 6; ++l)
      for (int m = 0; m <= l; ++m) {
        const std::complex<double> expected = (l == 3 && m == 2) ? 0.5 : 0.0;
        CHECK(std::abs(alm(l, m) - expected) < 1e-13);
      }
  }
  CHECK_THROWS_AS(forward_sht(std::vector<double>(pix.size()), pix, 9), InvalidParameter);
  CHECK_THROWS_AS(forward_sht(std::vector<double>(pix.size() - 1), pix, 4), ShapeError);
}

TEST_CASE("inverse transform") {
  const Pixelization pix(16);
  Alm zero(8);
  CHECK(testing::max_abs(inverse_sht(zero, pix)) == 0.0);
  Alm mono(0);
  mono(0, 0) = std::sqrt(4 * kPi);
  for (double v : inverse_sht(mono, pix)) CHECK(v == doctest::Approx(1.0));

  const auto alm = testing::random_alm(10, 9);
  const auto on_grid = inverse_sht(alm, pix);
  const auto on_points = inverse_sht(alm, pix.points());
  CHECK(testing::max_abs_diff(on_grid, on_points) < 1e-12);

  Alm bad(3);
  bad(2, 0) = {0.0, 1.0};
  CHECK_THROWS_AS(inverse_sht(bad, pix), ConventionViolation);
}

TEST_CASE("round trip at pixelization order 2L") {
  for (int L : {1, 4, 8, 16, 33, 64}) {
    const Pixelization pix(2 * L);
    const auto f = inverse_sht(testing::random_alm(L, 100 + L), pix);
    const auto back = inverse_sht(forward_sht(f, pix, L), pix);
    CHECK(testing::max_abs_diff(f, back) < 1e-10);
  }
}

TEST_CASE("forward after inverse is the identity on coefficients") {
  const Pixelization pix(24);
  const auto alm = testing::random_alm(12, 4);
  const auto back = forward_sht(inverse_sht(alm, pix), pix, 12);
  double worst = 0.0;
  for (std::size_t i = 0; i < alm.size(); ++i) worst = std::max(worst, std::abs(alm.data()[i] - back.data()[i]));
  CHECK(worst < 1e-11);
}

TEST_CASE("Parseval") {
  const Pixelization pix(32);
  const auto alm = testing::random_alm(16, 21);
  const auto f = inverse_sht(alm, pix);
  double lhs = 0.0;
  for (std::size_t k = 0; k < pix.size(); ++k) lhs += pix.weight(k) * f[k] * f[k];
  double rhs = 0.0;
  for (int l = 0; l <= 16; ++l) {
    rhs += std::norm(alm(l, 0));
    for (int m = 1; m <= l; ++m) rhs += 2 * std::norm(alm(l, m));
  }
  CHECK(std::abs(lhs - rhs) < 1e-10 * rhs);
}

TEST_CASE("plan reuse and Alm resizing") {
  const Pixelization pix(20);
  const ShtPlan plan(pix, 10);
  const auto alm = testing::random_alm(10, 8);
  const auto f = plan.inverse(alm);
  CHECK(testing::max_abs_diff(f, inverse_sht(alm, pix)) < 1e-12);
  CHECK_THROWS_AS(plan.inverse(Alm(11)), ShapeError);
  CHECK(testing::max_abs_diff(plan.inverse(alm.resized(6)), inverse_sht(alm.resized(6), pix)) < 1e-12);

  const auto small = alm.resized(4);
  CHECK(small.lmax() == 4);
  CHECK(small(4, 3) == alm(4, 3));
  const auto big = alm.resized(12);
  CHECK(big(10, 10) == alm(10, 10));
  CHECK(big(12, 0) == std::complex<double>(0.0, 0.0));
  CHECK(Alm::count(3) == 10);
}
