#include "nse/needlet.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "nse/error.hpp"

namespace nse {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;

int checked_order(const WindowFamily& fam, int j, int order) {
  const int need = 4 * fam.band_limit(j);
  if (order < need)
    throw InvalidParameter("needlet scale " + std::to_string(j) + " needs a pixelization of order >= " +
                           std::to_string(need) + ", got " + std::to_string(order));
  return order;
}

int window_lmax(const WindowFamily& fam, int j) {
  const auto band = fam.band(j);
  return band.empty() ? 0 : band.l_max;
}

void check_index(const NeedletScale& scale, std::size_t k) {
  if (k >= scale.size())
    throw IndexError("needlet index " + std::to_string(k) + " out of range for scale " +
                     std::to_string(scale.j()) + " with " + std::to_string(scale.size()) + " points");
}

Alm filtered(const Alm& alm, std::span<const double> profile) {
  Alm out(alm.lmax());
  for (int l = 0; l <= alm.lmax(); ++l) {
    const double f = l < static_cast<int>(profile.size()) ? profile[l] : 0.0;
    if (f == 0.0) continue;
    for (int m = 0; m <= l; ++m) out(l, m) = alm(l, m) * f;
  }
  return out;
}

}  // namespace

NeedletScale::NeedletScale(const WindowFamily& fam, int j) : NeedletScale(fam, j, 4 * fam.band_limit(j)) {}

NeedletScale::NeedletScale(const WindowFamily& fam, int j, int order)
    : j_(j),
      band_ratio_(fam.band_ratio()),
      band_limit_(fam.band_limit(j)),
      band_(fam.band(j)),
      lmax_(window_lmax(fam, j)),
      pix_(checked_order(fam, j, order)),
      plan_(pix_, lmax_),
      squared_plan_(pix_, 2 * lmax_) {
  window_.assign(static_cast<std::size_t>(lmax_) + 1, 0.0);
  const auto table = fam.table(j);
  std::copy(table.begin(), table.end(), window_.begin());

  for (int l = 0; l <= lmax_; ++l) {
    peak_ += window_[l] * (2.0 * l + 1.0) / kFourPi;
    energy_ += window_[l] * window_[l] * (2.0 * l + 1.0) / kFourPi;
  }

  // c_L = 2 pi int_{-1}^{1} K(t)^2 P_L(t) dt; the integrand has degree
  // <= 4 lmax, so 2 lmax + 1 Gauss-Legendre nodes integrate it exactly.
  const int n_sq = 2 * lmax_;
  squared_.assign(static_cast<std::size_t>(n_sq) + 1, 0.0);
  if (!band_.empty()) {
    const auto gl = gauss_legendre(n_sq + 1);
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
      const double t = gl.nodes[i];
      const double k = zonal_kernel(window_, t);
      const double f = 2.0 * std::numbers::pi * gl.weights[i] * k * k;
      double p_prev = 1.0;
      double p = t;
      squared_[0] += f;
      if (n_sq >= 1) squared_[1] += f * t;
      for (int L = 2; L <= n_sq; ++L) {
        const double next = ((2.0 * L - 1.0) * t * p - (L - 1.0) * p_prev) / L;
        p_prev = p;
        p = next;
        squared_[L] += f * p;
      }
    }
  }
}

double NeedletScale::kernel(double t) const { return zonal_kernel(window_, t); }

double eval_needlet(const NeedletScale& scale, std::size_t k, const UnitVector& xi) {
  check_index(scale, k);
  const double t = std::clamp(xi.dot(scale.pix().point(k)), -1.0, 1.0);
  return std::sqrt(scale.pix().weight(k)) * scale.kernel(t);
}

std::vector<double> needlet_transform(const Alm& alm, const NeedletScale& scale) {
  return scale.plan().inverse(filtered(alm.resized(scale.lmax()), scale.window()));
}

std::vector<double> needlet_coeffs_of_sequence(std::span<const double> values, const NeedletScale& scale) {
  if (values.size() != scale.size())
    throw ShapeError("needlet coefficients: got " + std::to_string(values.size()) + " values for scale " +
                     std::to_string(scale.j()) + " with " + std::to_string(scale.size()) + " points");
  return scale.plan().inverse(filtered(scale.plan().forward(values), scale.window()));
}

std::vector<double> squared_kernel_filter(std::span<const double> h, const NeedletScale& scale) {
  if (h.size() != scale.size())
    throw ShapeError("squared kernel filter: got " + std::to_string(h.size()) + " values for " +
                     std::to_string(scale.size()) + " points");
  return scale.squared_plan().inverse(filtered(scale.squared_plan().forward(h), scale.squared_kernel()));
}

double signal_covariance(const NeedletScale& scale, std::span<const double> spectrum, std::size_t k,
                         std::size_t k2) {
  check_index(scale, k);
  check_index(scale, k2);
  const auto b = scale.window();
  std::vector<double> coeffs(b.size(), 0.0);
  for (std::size_t l = 0; l < b.size() && l < spectrum.size(); ++l) coeffs[l] = b[l] * b[l] * spectrum[l];
  const double t = std::clamp(scale.pix().point(k).dot(scale.pix().point(k2)), -1.0, 1.0);
  return zonal_kernel(coeffs, t);
}

double noise_covariance(const NeedletScale& scale, std::span<const double> sigma_eff, std::size_t k,
                        std::size_t k2) {
  check_index(scale, k);
  check_index(scale, k2);
  if (sigma_eff.size() != scale.size())
    throw ShapeError("noise_covariance: noise map has " + std::to_string(sigma_eff.size()) +
                     " entries for " + std::to_string(scale.size()) + " points");
  const auto& pix = scale.pix();
  const auto& xk = pix.point(k);
  const auto& xk2 = pix.point(k2);
  double sum = 0.0;
  for (std::size_t p = 0; p < pix.size(); ++p) {
    if (sigma_eff[p] == 0.0) continue;
    const double lp = pix.weight(p) * sigma_eff[p];
    const double a = scale.kernel(std::clamp(xk.dot(pix.point(p)), -1.0, 1.0));
    const double c = k == k2 ? a : scale.kernel(std::clamp(xk2.dot(pix.point(p)), -1.0, 1.0));
    sum += lp * lp * a * c;
  }
  // psi_k = sqrt(lambda_k) K, so the (lambda_k lambda_k')^{-1/2} prefactor cancels
  return sum;
}

NormIdentity needlet_norm_identity_check(const NeedletScale& scale, std::size_t k) {
  check_index(scale, k);
  const auto& pix = scale.pix();
  const double lk = pix.weight(k);
  double lhs = 0.0;
  for (std::size_t p = 0; p < pix.size(); ++p) {
    const double psi = eval_needlet(scale, k, pix.point(p));
    lhs += pix.weight(p) * psi * psi;
  }
  return {lhs, lk * scale.kernel_energy()};
}

double envelope_slope(std::span<const DecaySample> samples, double lo, double hi, std::size_t* used) {
  std::vector<DecaySample> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const DecaySample& a, const DecaySample& b) { return a.scaled_distance < b.scaled_distance; });
  std::vector<double> env(sorted.size());
  double running = 0.0;
  for (std::size_t i = sorted.size(); i-- > 0;) {
    running = std::max(running, std::abs(sorted[i].value));
    env[i] = running;
  }
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double x = sorted[i].scaled_distance;
    if (x < lo || x > hi || !(env[i] > 0.0)) continue;
    const double u = std::log1p(x);
    const double v = std::log(env[i]);
    sx += u;
    sy += v;
    sxx += u * u;
    sxy += u * v;
    ++n;
  }
  if (used) *used = n;
  if (n < 2) throw InvalidParameter("envelope_slope: fewer than two samples in the fit range");
  const double denom = n * sxx - sx * sx;
  if (!(denom > 0.0)) throw InvalidParameter("envelope_slope: degenerate fit range");
  return (n * sxy - sx * sy) / denom;
}

DecayReport needlet_decay_profile(const NeedletScale& scale, double max_scaled_distance, int samples_per_unit,
                                  double fit_lo, double fit_hi) {
  if (samples_per_unit < 1) throw InvalidParameter("needlet_decay_profile: samples_per_unit must be >= 1");
  DecayReport report;
  const double bj = std::pow(scale.band_ratio(), scale.j());
  const double peak = scale.kernel_peak();
  if (!(peak > 0.0)) throw InvalidParameter("needlet_decay_profile: empty window at this scale");
  const auto n = static_cast<std::size_t>(std::ceil(max_scaled_distance * samples_per_unit));
  for (std::size_t i = 0; i <= n; ++i) {
    const double x = static_cast<double>(i) / samples_per_unit;
    const double d = x / bj;
    if (d > std::numbers::pi) break;
    report.samples.push_back({x, std::abs(scale.kernel(std::cos(d))) / peak});
  }
  report.fit_lo = fit_lo;
  report.fit_hi = fit_hi;
  report.slope = envelope_slope(report.samples, fit_lo, fit_hi, &report.fit_points);
  return report;
}

DecayReport correlation_decay_report(const NeedletScale& scale, std::span<const double> spectrum, double fit_lo,
                                     double fit_hi) {
  DecayReport report;
  const auto b = scale.window();
  std::vector<double> coeffs(b.size(), 0.0);
  double var = 0.0;
  for (std::size_t l = 0; l < b.size() && l < spectrum.size(); ++l) {
    coeffs[l] = b[l] * b[l] * spectrum[l];
    var += coeffs[l] * (2.0 * l + 1.0) / kFourPi;
  }
  if (!(var > 0.0)) throw InvalidParameter("correlation_decay_report: zero variance at this scale");
  const double bj = std::pow(scale.band_ratio(), scale.j());
  const auto& pix = scale.pix();
  const auto& ref = pix.point(0);
  report.samples.reserve(pix.size());
  for (std::size_t k = 0; k < pix.size(); ++k) {
    const double t = std::clamp(ref.dot(pix.point(k)), -1.0, 1.0);
    const double d = k == 0 ? 0.0 : geodesic_distance(ref, pix.point(k));
    report.samples.push_back({bj * d, std::abs(zonal_kernel(coeffs, t)) / var});
  }
  report.fit_lo = fit_lo;
  report.fit_hi = fit_hi;
  report.slope = envelope_slope(report.samples, fit_lo, fit_hi, &report.fit_points);
  return report;
}

}  // namespace nse
