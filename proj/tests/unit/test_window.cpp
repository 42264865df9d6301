#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "nse/error.hpp"
#include "nse/window.hpp"

using namespace nse;

namespace {

WindowFamily family(double B, int M, WindowMode mode, int j_min, int j_max) {
  return WindowFamily(CutoffFunction::build(B, M), mode, j_min, j_max);
}

}  // namespace

TEST_CASE("cutoff polynomial degree and endpoint values") {
  const auto a = CutoffFunction::build(1.25, 9);
  CHECK(a.degree() == 19);
  CHECK(a.coefficients().size() == 20);
  CHECK(a(1.0 / 1.25) == 1.0);
  CHECK(a(1.0) == 0.0);
  CHECK(a(0.0) == 1.0);
  CHECK(a(3.0) == 0.0);
  CHECK(a(-0.5) == 1.0);
  CHECK(std::abs(a.transition(0.0)) < 1e-15);
  CHECK(std::abs(a.transition(1.0) - 1.0) < 1e-12);
}

TEST_CASE("cutoff derivatives vanish at the transition endpoints") {
  for (int M : {3, 5, 9}) {
    const auto a = CutoffFunction::build(2.0, M);
    for (int r = 1; r <= M; ++r) {
      CHECK(std::abs(a.derivative(0.5, r)) < 1e-12);
      CHECK(std::abs(a.derivative(1.0, r)) < 1e-12);
      CHECK(std::abs(a.transition_derivative(0.0, r)) < 1e-12);
      CHECK(std::abs(a.transition_derivative(1.0, r)) < 1e-9);
    }
    // order M+1 is generically nonzero at u = 0
    CHECK(std::abs(a.transition_derivative(0.0, M + 1)) > 1e-3);
  }
}

TEST_CASE("cutoff is non-increasing on [1/B, 1]") {
  const auto a = CutoffFunction::build(1.25, 5);
  double prev = a(0.8);
  for (int i = 1; i <= 2000; ++i) {
    const double x = 0.8 + 0.2 * i / 2000.0;
    const double v = a(x);
    CHECK(v <= prev + 1e-15);
    CHECK(v >= -1e-15);
    CHECK(v <= 1.0 + 1e-15);
    prev = v;
  }
}

TEST_CASE("cutoff rejects bad parameters") {
  CHECK_THROWS_AS(CutoffFunction::build(1.0, 5), InvalidParameter);
  CHECK_THROWS_AS(CutoffFunction::build(0.5, 5), InvalidParameter);
  CHECK_THROWS_AS(CutoffFunction::build(2.0, 2), InvalidParameter);
  CHECK_NOTHROW(CutoffFunction::build(2.0, 3));
}

TEST_CASE("tight window equals one at the band centre") {
  const auto fam = family(2.0, 5, WindowMode::tight, 0, 8);
  CHECK(fam(3, 8) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(fam(3, 16) == 0.0);
  CHECK(fam(3, 17) == 0.0);
  CHECK(fam(3, 4) == 0.0);
}

TEST_CASE("support band of B = 2, j = 3") {
  const auto fam = family(2.0, 5, WindowMode::tight, 0, 8);
  const auto band = fam.band(3);
  CHECK(band.l_min == 5);
  CHECK(band.l_max == 15);
  CHECK(fam(3, band.l_min - 1) == 0.0);
  CHECK(fam(3, band.l_max + 1) == 0.0);
  CHECK(fam(3, band.l_min) > 0.0);
  CHECK(fam(3, band.l_max) > 0.0);
  CHECK(fam.band_limit(3) == 16);
}

TEST_CASE("support band stays inside (B^{j-1}, B^{j+1})") {
  const auto fam = family(1.25, 5, WindowMode::tight, 0, 30);
  for (int j = 1; j <= 30; ++j) {
    const auto band = fam.band(j);
    if (band.empty()) continue;
    CHECK(band.l_min > std::pow(1.25, j - 1));
    CHECK(band.l_max < std::pow(1.25, j + 1));
    for (int l = 0; l <= band.l_max + 3; ++l) {
      const bool inside = l > std::pow(1.25, j - 1) && l < std::pow(1.25, j + 1);
      if (!inside) CHECK(fam(j, l) == 0.0);
    }
  }
  // j = 10: B^{j-1} ~ 7.45, B^{j+1} ~ 11.64, so l in 8..11
  CHECK(fam.band(10).l_min == 8);
  CHECK(fam.band(10).l_max == 11);
}

TEST_CASE("tight partition of unity") {
  SUBCASE("B = 1.25 at l = 40") {
    const auto fam = family(1.25, 9, WindowMode::tight, 0, 40);
    double sum = 0.0;
    for (int j = 0; j <= 40; ++j) sum += fam(j, 40) * fam(j, 40);
    CHECK(std::abs(sum - 1.0) < 1e-12);
  }
  SUBCASE("B = 2 over every covered l") {
    for (int M : {3, 5, 9}) {
      const auto fam = family(2.0, M, WindowMode::tight, 0, 8);
      for (int l = 1; l <= 256; ++l) {
        double sum = 0.0;
        for (int j = 0; j <= 8; ++j) sum += fam(j, l) * fam(j, l);
        CHECK(std::abs(sum - 1.0) < 1e-12);
      }
    }
  }
}

TEST_CASE("literal windows sum to one") {
  const auto fam = family(2.0, 5, WindowMode::literal, 0, 8);
  for (int l = 1; l <= 256; ++l) {
    double sum = 0.0;
    for (int j = 0; j <= 8; ++j) sum += fam(j, l);
    CHECK(std::abs(sum - 1.0) < 1e-12);
  }
}

TEST_CASE("windows lie in [0, 1]") {
  for (auto mode : {WindowMode::tight, WindowMode::literal}) {
    const auto fam = family(1.5, 4, mode, 0, 12);
    for (int j = 0; j <= 12; ++j)
      for (int l = 0; l < 200; ++l) {
        CHECK(fam(j, l) >= 0.0);
        CHECK(fam(j, l) <= 1.0);
      }
  }
}

TEST_CASE("table matches pointwise evaluation") {
  const auto fam = family(2.0, 5, WindowMode::tight, 0, 8);
  for (int j = 0; j <= 8; ++j) {
    const auto t = fam.table(j);
    CHECK(static_cast<int>(t.size()) == fam.band(j).l_max + 1);
    for (std::size_t l = 0; l < t.size(); ++l) CHECK(t[l] == fam(j, static_cast<int>(l)));
  }
}

TEST_CASE("empty band") {
  // B = 1.25, j = 2: (1, 1.5625) contains no integer
  const auto fam = family(1.25, 5, WindowMode::tight, 0, 4);
  CHECK(fam.band(2).empty());
  CHECK(fam.table(2).empty());
}

TEST_CASE("out-of-range scale") {
  const auto fam = family(2.0, 5, WindowMode::tight, 2, 6);
  CHECK_THROWS_AS(fam(1, 4), IndexError);
  CHECK_THROWS_AS(fam(7, 4), IndexError);
  CHECK_THROWS_AS(fam.band(9), IndexError);
  CHECK_THROWS_AS(WindowFamily(CutoffFunction::build(2.0, 5), WindowMode::tight, 4, 3), InvalidParameter);
}

TEST_CASE("profile smoothness across the knots") {
  // One-sided difference quotients of b agree across 1/B, 1 and B to O(h).
  for (auto mode : {WindowMode::tight, WindowMode::literal}) {
    const auto fam = family(2.0, 5, mode, 0, 4);
    for (double knot : {0.5, 1.0, 2.0}) {
      double prev_jump = 1.0;
      for (double h : {1e-2, 1e-3}) {
        const double right = (fam.profile(knot + h) - fam.profile(knot)) / h;
        const double left = (fam.profile(knot) - fam.profile(knot - h)) / h;
        const double right2 = (fam.profile(knot + 2 * h) - 2 * fam.profile(knot + h) + fam.profile(knot)) / (h * h);
        const double left2 = (fam.profile(knot) - 2 * fam.profile(knot - h) + fam.profile(knot - 2 * h)) / (h * h);
        const double jump = std::abs(right - left) + std::abs(right2 - left2) * h;
        CHECK(jump < 50 * h);
        CHECK(jump <= prev_jump);
        prev_jump = jump;
      }
    }
  }
}

TEST_CASE("mode names") {
  CHECK(parse_window_mode("tight") == WindowMode::tight);
  CHECK(parse_window_mode("literal") == WindowMode::literal);
  CHECK(to_string(WindowMode::literal) == "literal");
  CHECK_THROWS_AS(parse_window_mode("loose"), InvalidParameter);
}
