#include "nse/window.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nse/error.hpp"

namespace nse {

namespace {

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return std::round(r);
}

double horner(std::span<const double> c, double u) {
  double s = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) s = s * u + *it;
  return s;
}

std::vector<double> differentiate(std::span<const double> c) {
  if (c.size() <= 1) return {0.0};
  std::vector<double> d(c.size() - 1);
  for (std::size_t i = 1; i < c.size(); ++i) d[i - 1] = c[i] * static_cast<double>(i);
  return d;
}

}  // namespace

CutoffFunction CutoffFunction::build(double band_ratio, int smoothness) {
  if (!(band_ratio > 1.0) || !std::isfinite(band_ratio))
    throw InvalidParameter("cutoff band ratio B must be > 1, got " + std::to_string(band_ratio));
  if (smoothness < 3)
    throw InvalidParameter("cutoff smoothness M must be >= 3, got " + std::to_string(smoothness));

  // H(u) = sum_{n=0}^{M} (-1)^n C(M+n, n) C(2M+1, M-n) u^{M+n+1}
  const int m = smoothness;
  std::vector<double> coeffs(2 * m + 2, 0.0);
  for (int n = 0; n <= m; ++n) {
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    coeffs[m + n + 1] = sign * binomial(m + n, n) * binomial(2 * m + 1, m - n);
  }
  return CutoffFunction(band_ratio, smoothness, std::move(coeffs));
}

CutoffFunction::CutoffFunction(double band_ratio, int smoothness, std::vector<double> coeffs)
    : band_ratio_(band_ratio), smoothness_(smoothness), coeffs_(std::move(coeffs)) {
  derived_.reserve(smoothness_ + 2);
  std::vector<double> cur = coeffs_;
  for (int r = 1; r <= smoothness_ + 1; ++r) {
    cur = differentiate(cur);
    derived_.push_back(cur);
  }
}

double CutoffFunction::transition(double u) const {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  // H(u) + H(1-u) = 1; evaluating on the half nearer zero keeps the
  // alternating monomial sum well conditioned.
  if (u <= 0.5) return horner(coeffs_, u);
  return 1.0 - horner(coeffs_, 1.0 - u);
}

double CutoffFunction::transition_derivative(double u, int order) const {
  if (order == 0) return transition(u);
  if (order < 0) throw InvalidParameter("derivative order must be >= 0");
  if (order > static_cast<int>(derived_.size())) return 0.0;
  u = std::clamp(u, 0.0, 1.0);
  const auto& c = derived_[order - 1];
  if (u <= 0.5) return horner(c, u);
  // H^{(r)}(u) = (-1)^{r+1} H^{(r)}(1-u) for r >= 1
  const double sign = (order % 2 == 1) ? 1.0 : -1.0;
  return sign * horner(c, 1.0 - u);
}

double CutoffFunction::operator()(double x) const {
  const double ax = std::abs(x);
  const double lo = 1.0 / band_ratio_;
  if (ax <= lo) return 1.0;
  if (ax >= 1.0) return 0.0;
  return 1.0 - transition((ax - lo) / (1.0 - lo));
}

double CutoffFunction::derivative(double x, int order) const {
  if (order == 0) return (*this)(x);
  const double ax = std::abs(x);
  const double lo = 1.0 / band_ratio_;
  if (ax <= lo || ax >= 1.0) return 0.0;
  const double scale = 1.0 / (1.0 - lo);
  double d = -transition_derivative((ax - lo) * scale, order) * std::pow(scale, order);
  if (x < 0.0 && order % 2 == 1) d = -d;
  return d;
}

WindowMode parse_window_mode(std::string_view name) {
  if (name == "tight") return WindowMode::tight;
  if (name == "literal") return WindowMode::literal;
  throw InvalidParameter("unknown window mode '" + std::string(name) + "' (expected tight|literal)");
}

std::string_view to_string(WindowMode mode) {
  return mode == WindowMode::tight ? "tight" : "literal";
}

double inverse_scale_power(double band_ratio, int j) { return std::pow(band_ratio, -j); }

WindowFamily::WindowFamily(CutoffFunction cutoff, WindowMode mode, int j_min, int j_max)
    : cutoff_(std::move(cutoff)), mode_(mode), j_min_(j_min), j_max_(j_max) {
  if (j_min < 0 || j_max < j_min)
    throw InvalidParameter("window scale range must satisfy 0 <= j_min <= j_max");
  const double B = cutoff_.band_ratio();
  for (int j = j_min_; j <= j_max_; ++j) {
    const double s_lo = inverse_scale_power(B, j);
    const double s_hi = inverse_scale_power(B, j + 1);
    const int limit = band_limit(j);
    std::vector<double> row(static_cast<std::size_t>(limit) + 1, 0.0);
    ScaleBand band;
    for (int l = 0; l <= limit; ++l) {
      row[l] = squared_or_literal(l * s_lo, l * s_hi);
      if (row[l] != 0.0) {
        if (band.empty()) band.l_min = l;
        band.l_max = l;
      }
    }
    row.resize(static_cast<std::size_t>(band.l_max + 1));
    tables_.push_back(std::move(row));
    bands_.push_back(band);
  }
}

double WindowFamily::squared_or_literal(double lo_arg, double hi_arg) const {
  const double diff = cutoff_(hi_arg) - cutoff_(lo_arg);
  if (mode_ == WindowMode::literal) return diff;
  return diff > 0.0 ? std::sqrt(diff) : 0.0;
}

int WindowFamily::band_limit(int j) const {
  // guard against B^{j+1} landing a hair above an integer
  const double p = std::pow(band_ratio(), j + 1);
  const double r = std::round(p);
  if (std::abs(p - r) <= 1e-9 * r) return static_cast<int>(r);
  return static_cast<int>(std::ceil(p));
}

double WindowFamily::operator()(int j, int l) const {
  if (!contains(j))
    throw IndexError("scale " + std::to_string(j) + " outside window range [" +
                     std::to_string(j_min_) + ", " + std::to_string(j_max_) + "]");
  const auto& row = tables_[j - j_min_];
  if (l < 0 || l >= static_cast<int>(row.size())) return 0.0;
  return row[l];
}

ScaleBand WindowFamily::band(int j) const {
  if (!contains(j)) throw IndexError("scale " + std::to_string(j) + " outside window range");
  return bands_[j - j_min_];
}

std::span<const double> WindowFamily::table(int j) const {
  if (!contains(j)) throw IndexError("scale " + std::to_string(j) + " outside window range");
  return tables_[j - j_min_];
}

double WindowFamily::profile(double x) const {
  return squared_or_literal(x, x / band_ratio());
}

}  // namespace nse
