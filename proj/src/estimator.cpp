#include "nse/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "nse/error.hpp"

namespace nse {

void ThresholdRule::validate() const {
  switch (kind) {
    case Kind::schedule:
      if (!(tau0 > 0.0)) throw InvalidParameter("threshold tau0 must be > 0");
      if (!(epsilon > 0.0)) throw InvalidParameter("threshold epsilon must be > 0");
      break;
    case Kind::fixed:
      if (!(value >= 0.0)) throw InvalidParameter("fixed threshold must be >= 0");
      break;
    case Kind::quantile:
      if (!(quantile > 0.0 && quantile <= 1.0)) throw InvalidParameter("threshold quantile must lie in (0, 1]");
      break;
  }
}

double ThresholdRule::threshold(double band_ratio, double alpha, int j) const {
  if (kind == Kind::fixed) return value;
  return tau0 * std::pow(band_ratio, -(alpha + epsilon) * j);
}

ThresholdRule::Kind parse_threshold_kind(std::string_view name) {
  if (name == "schedule") return ThresholdRule::Kind::schedule;
  if (name == "fixed") return ThresholdRule::Kind::fixed;
  if (name == "quantile") return ThresholdRule::Kind::quantile;
  throw InvalidParameter("unknown threshold rule '" + std::string(name) + "' (expected schedule|fixed|quantile)");
}

std::string_view to_string(ThresholdRule::Kind kind) {
  switch (kind) {
    case ThresholdRule::Kind::schedule: return "schedule";
    case ThresholdRule::Kind::fixed: return "fixed";
    case ThresholdRule::Kind::quantile: return "quantile";
  }
  return "?";
}

WeightMode parse_weight_mode(std::string_view name) {
  if (name == "uniform") return WeightMode::uniform;
  if (name == "mle") return WeightMode::mle;
  throw InvalidParameter("unknown weight mode '" + std::string(name) + "' (expected uniform|mle)");
}

std::string_view to_string(WeightMode mode) { return mode == WeightMode::mle ? "mle" : "uniform"; }

PilotRule parse_pilot_rule(std::string_view name) {
  if (name == "two-pass") return PilotRule::two_pass;
  if (name == "external") return PilotRule::external;
  if (name == "oracle") return PilotRule::oracle;
  throw InvalidParameter("unknown pilot rule '" + std::string(name) + "' (expected two-pass|external|oracle)");
}

void EstimatorConfig::validate() const {
  threshold.validate();
  if (weights == WeightMode::mle && pilot == PilotRule::external && !(pilot_value > 0.0))
    throw InvalidParameter("external pilot value must be > 0");
}

double target_cj(const WindowFamily& fam, int j, std::span<const double> spectrum) {
  const auto band = fam.band(j);
  double sum = 0.0;
  for (int l = band.l_min; l <= band.l_max; ++l) {
    if (l >= static_cast<int>(spectrum.size()))
      throw InvalidParameter("target_cj: spectrum does not cover the band of scale " + std::to_string(j));
    const double b = fam(j, l);
    sum += (2.0 * l + 1.0) * b * b * spectrum[l];
  }
  return sum / (4.0 * std::numbers::pi);
}

std::vector<double> effective_noise(std::span<const double> mask, std::span<const double> sigma) {
  if (mask.size() != sigma.size()) throw ShapeError("effective_noise: mask and noise maps differ in length");
  std::vector<double> s(mask.size());
  for (std::size_t p = 0; p < s.size(); ++p) s[p] = mask[p] * sigma[p];
  return s;
}

namespace {

void check_length(std::span<const double> v, const NeedletScale& scale, const char* what) {
  if (v.size() != scale.size())
    throw ShapeError(std::string(what) + ": map has " + std::to_string(v.size()) + " entries for " +
                     std::to_string(scale.size()) + " points");
}

}  // namespace

std::vector<double> noise_variances(const NeedletScale& scale, std::span<const double> sigma_eff) {
  check_length(sigma_eff, scale, "noise_variances");
  const auto& pix = scale.pix();
  std::vector<double> h(pix.size());
  bool any = false;
  for (std::size_t p = 0; p < h.size(); ++p) {
    h[p] = pix.weight(p) * sigma_eff[p] * sigma_eff[p];
    any = any || h[p] != 0.0;
  }
  if (!any) return std::vector<double>(pix.size(), 0.0);
  auto n2 = squared_kernel_filter(h, scale);
  for (double& v : n2) v = std::max(v, 0.0);
  return n2;
}

std::vector<double> noise_variances_direct(const NeedletScale& scale, std::span<const double> sigma_eff) {
  check_length(sigma_eff, scale, "noise_variances_direct");
  std::vector<double> n2(scale.size());
  for (std::size_t k = 0; k < n2.size(); ++k) n2[k] = noise_covariance(scale, sigma_eff, k, k);
  return n2;
}

std::vector<double> noise_levels(const NeedletScale& scale, std::span<const double> sigma_eff) {
  auto n = noise_variances(scale, sigma_eff);
  for (double& v : n) v = std::sqrt(v);
  return n;
}

FunctionalNorm parse_functional_norm(std::string_view name) {
  if (name == "nominal") return FunctionalNorm::nominal;
  if (name == "point") return FunctionalNorm::point;
  throw InvalidParameter("unknown functional normalization '" + std::string(name) + "' (expected nominal|point)");
}

std::string_view to_string(FunctionalNorm norm) { return norm == FunctionalNorm::point ? "point" : "nominal"; }

std::vector<double> mask_functional(const NeedletScale& scale, std::span<const double> mask, FunctionalNorm norm) {
  check_length(mask, scale, "mask_functional");
  const auto& pix = scale.pix();
  std::vector<double> h(pix.size());
  bool any = false;
  for (std::size_t p = 0; p < h.size(); ++p) {
    h[p] = (1.0 - mask[p]) * (1.0 - mask[p]);
    any = any || h[p] != 0.0;
  }
  if (!any) return std::vector<double>(pix.size(), 0.0);
  auto f = squared_kernel_filter(h, scale);
  const double nominal = 4.0 * std::numbers::pi / static_cast<double>(pix.size());
  for (std::size_t k = 0; k < f.size(); ++k) {
    const double lk = norm == FunctionalNorm::point ? pix.weight(k) : nominal;
    f[k] = std::sqrt(std::max(lk * f[k], 0.0));
  }
  return f;
}

std::vector<double> mask_functional_direct(const NeedletScale& scale, std::span<const double> mask,
                                           FunctionalNorm norm) {
  check_length(mask, scale, "mask_functional_direct");
  const auto& pix = scale.pix();
  const double nominal = 4.0 * std::numbers::pi / static_cast<double>(pix.size());
  std::vector<double> f(pix.size());
  for (std::size_t k = 0; k < f.size(); ++k) {
    double sum = 0.0;
    for (std::size_t p = 0; p < pix.size(); ++p) {
      const double u = 1.0 - mask[p];
      if (u == 0.0) continue;
      const double psi = eval_needlet(scale, k, pix.point(p));
      sum += pix.weight(p) * u * u * psi * psi;
    }
    f[k] = norm == FunctionalNorm::point ? std::sqrt(sum) : std::sqrt(sum * nominal / pix.weight(k));
  }
  return f;
}

std::vector<std::size_t> kept_set(std::span<const double> functional, double threshold) {
  if (!(threshold >= 0.0)) throw InvalidParameter("kept_set: threshold must be >= 0");
  std::vector<std::size_t> kept;
  for (std::size_t k = 0; k < functional.size(); ++k)
    if (functional[k] <= threshold) kept.push_back(k);
  return kept;
}

std::vector<std::size_t> kept_set_quantile(std::span<const double> functional, double q) {
  if (!(q > 0.0 && q <= 1.0)) throw InvalidParameter("kept_set_quantile: q must lie in (0, 1]");
  std::vector<std::size_t> order(functional.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return functional[a] < functional[b]; });
  const auto n = std::min(order.size(), static_cast<std::size_t>(std::ceil(q * order.size())));
  order.resize(n);
  std::sort(order.begin(), order.end());
  return order;
}

std::vector<double> weights(WeightMode mode, std::span<const std::size_t> kept, std::span<const double> noise_var,
                            double pilot) {
  if (kept.empty()) throw AllMaskedError("weights: the kept set is empty");
  std::vector<double> w(noise_var.size(), 0.0);
  if (mode == WeightMode::uniform) {
    const double u = 1.0 / static_cast<double>(kept.size());
    for (std::size_t k : kept) w.at(k) = u;
    return w;
  }
  if (!(pilot > 0.0)) throw InvalidParameter("mle weights need a positive pilot");
  double total = 0.0;
  for (std::size_t k : kept) {
    const double d = pilot + noise_var[k];
    w.at(k) = 1.0 / (d * d);
    total += w[k];
  }
  for (std::size_t k : kept) w[k] /= total;
  return w;
}

double estimate(std::span<const double> gamma, std::span<const double> noise_var, std::span<const double> w) {
  if (gamma.size() != noise_var.size() || gamma.size() != w.size())
    throw ShapeError("estimate: coefficient, noise and weight arrays differ in length");
  double sum = 0.0;
  for (std::size_t k = 0; k < gamma.size(); ++k)
    if (w[k] != 0.0) sum += w[k] * (gamma[k] * gamma[k] - noise_var[k]);
  return sum;
}

ScaleSetup prepare_scale(const NeedletScale& scale, const ScaleObservation& obs, const EstimatorConfig& cfg) {
  ScaleSetup setup;
  setup.j = scale.j();
  setup.noise_var = noise_variances(scale, effective_noise(obs.mask, obs.sigma));
  setup.functional = mask_functional(scale, obs.mask, cfg.functional);
  if (cfg.threshold.kind == ThresholdRule::Kind::quantile) {
    setup.kept = kept_set_quantile(setup.functional, cfg.threshold.quantile);
    for (std::size_t k : setup.kept) setup.threshold = std::max(setup.threshold, setup.functional[k]);
  } else {
    setup.threshold = cfg.threshold.threshold(scale.band_ratio(), cfg.alpha, scale.j());
    setup.kept = kept_set(setup.functional, setup.threshold);
  }
  if (setup.kept.empty())
    throw AllMaskedError("scale " + std::to_string(scale.j()) + ": no coefficient passes threshold t_j = " +
                         std::to_string(setup.threshold) + " (min mask functional " +
                         std::to_string(*std::min_element(setup.functional.begin(), setup.functional.end())) +
                         ")");
  return setup;
}

ScaleEstimate two_pass_estimate(std::span<const double> gamma, const NeedletScale& scale, const ScaleSetup& setup,
                                const EstimatorConfig& cfg, double c_target) {
  ScaleEstimate out;
  out.j = setup.j;
  out.c_target = c_target;
  out.kept_count = setup.kept.size();
  out.mode = cfg.weights;

  std::vector<double> w;
  if (cfg.weights == WeightMode::uniform) {
    w = weights(WeightMode::uniform, setup.kept, setup.noise_var, 0.0);
  } else {
    double pilot = cfg.pilot_value;
    if (cfg.pilot == PilotRule::two_pass) {
      const auto w0 = weights(WeightMode::uniform, setup.kept, setup.noise_var, 0.0);
      pilot = estimate(gamma, setup.noise_var, w0);
      const double floor = 1e-12 * scale.kernel_energy();
      if (!(pilot > floor)) {
        pilot = floor;
        out.pilot_floored = true;
      }
    }
    out.pilot = pilot;
    w = weights(WeightMode::mle, setup.kept, setup.noise_var, pilot);
  }
  out.c_hat = estimate(gamma, setup.noise_var, w);

  for (double v : w)
    if (v > 0.0) out.weights_entropy -= v * std::log(v);

  std::vector<double> n2;
  n2.reserve(setup.kept.size());
  for (std::size_t k : setup.kept) n2.push_back(setup.noise_var[k]);
  std::sort(n2.begin(), n2.end());
  out.n2_min = n2.front();
  out.n2_max = n2.back();
  const std::size_t h = n2.size() / 2;
  out.n2_median = n2.size() % 2 ? n2[h] : 0.5 * (n2[h - 1] + n2[h]);
  return out;
}

double relative_mse(std::span<const double> estimates, double target) {
  if (!(target > 0.0)) throw InvalidParameter("relative_mse: target must be > 0");
  if (estimates.size() < 2) throw InvalidParameter("relative_mse: need at least two estimates");
  double sum = 0.0;
  for (double c : estimates) {
    const double r = (c - target) / target;
    sum += r * r;
  }
  return sum / static_cast<double>(estimates.size());
}

}  // namespace nse
