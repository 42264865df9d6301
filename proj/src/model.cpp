#include "nse/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "nse/error.hpp"
#include "nse/io.hpp"

namespace nse {

void SpectrumModel::validate() const {
  if (!(alpha > 2.0))
    throw InvalidParameter("spectrum slope alpha must be > 2, got " + std::to_string(alpha));
  if (!(band_ratio > 1.0)) throw InvalidParameter("spectrum band ratio must be > 1");
  if (!(g0 > 0.0)) throw InvalidParameter("spectrum amplitude g0 must be > 0");
  if (shape == Shape::modulated && !(std::abs(modulation) < 1.0))
    throw InvalidParameter("spectrum modulation |eps| must be < 1");
}

double SpectrumModel::g(double u) const {
  if (shape == Shape::constant) return g0;
  return g0 * (1.0 + modulation * std::cos(2.0 * std::numbers::pi * std::log(u) / std::log(band_ratio)));
}

double SpectrumModel::value(int l) const {
  if (l <= 0) return 0.0;
  return std::pow(static_cast<double>(l), -alpha) * g(static_cast<double>(l));
}

SpectrumModel::Shape parse_spectrum_shape(std::string_view name) {
  if (name == "constant") return SpectrumModel::Shape::constant;
  if (name == "modulated") return SpectrumModel::Shape::modulated;
  throw InvalidParameter("unknown spectrum shape '" + std::string(name) + "' (expected constant|modulated)");
}

std::vector<double> spectrum_values(const SpectrumModel& model, int j, int lmax) {
  model.validate();
  if (lmax < 0) throw InvalidParameter("spectrum_values: lmax must be >= 0");
  std::vector<double> c(static_cast<std::size_t>(lmax) + 1, 0.0);
  const double s = std::pow(model.band_ratio, -j);
  for (int l = 1; l <= lmax; ++l)
    c[l] = std::pow(static_cast<double>(l), -model.alpha) * model.g(s * l);
  return c;
}

Alm synthesize_field(std::span<const double> spectrum, int lmax, RandomStream& rng) {
  if (lmax < 0) throw InvalidParameter("synthesize_field: lmax must be >= 0");
  for (double c : spectrum)
    if (!(c >= 0.0)) throw InvalidParameter("synthesize_field: spectrum values must be >= 0");
  Alm alm(lmax);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int l = 0; l <= lmax; ++l) {
    const double c = l < static_cast<int>(spectrum.size()) ? spectrum[l] : 0.0;
    const double sd0 = std::sqrt(c);
    const double sd = std::sqrt(0.5 * c);
    alm(l, 0) = {sd0 * normal(rng), 0.0};
    for (int m = 1; m <= l; ++m) {
      const double re = normal(rng);
      const double im = normal(rng);
      alm(l, m) = {sd * re, sd * im};
    }
  }
  return alm;
}

Alm apply_band_limit(const Alm& alm, std::span<const double> profile) {
  Alm out(alm.lmax());
  for (int l = 0; l <= alm.lmax(); ++l) {
    const double f = l < static_cast<int>(profile.size()) ? profile[l] : 0.0;
    if (f == 0.0) continue;
    for (int m = 0; m <= l; ++m) out(l, m) = alm(l, m) * f;
  }
  return out;
}

BeamShape parse_beam_shape(std::string_view name) {
  if (name == "sharp") return BeamShape::sharp;
  if (name == "cosine") return BeamShape::cosine;
  throw InvalidParameter("unknown beam shape '" + std::string(name) + "' (expected sharp|cosine)");
}

std::vector<double> beam_profile(BeamShape shape, int band) {
  if (band < 1) throw InvalidParameter("beam band L_j must be >= 1");
  std::vector<double> b(static_cast<std::size_t>(2 * band) + 1, 0.0);
  for (int l = 0; l <= 2 * band; ++l) {
    if (l <= band) {
      b[l] = 1.0;
    } else if (shape == BeamShape::cosine && l < 2 * band) {
      const double c = std::cos(0.5 * std::numbers::pi * (l - band) / band);
      b[l] = c * c;
    }
  }
  return b;
}

MaskSpec::Kind parse_mask_kind(std::string_view name) {
  if (name == "full-sky") return MaskSpec::Kind::full_sky;
  if (name == "polar-cap") return MaskSpec::Kind::polar_cap;
  if (name == "observed-disc") return MaskSpec::Kind::observed_disc;
  if (name == "file") return MaskSpec::Kind::file;
  throw InvalidParameter("unknown mask type '" + std::string(name) +
                         "' (expected full-sky|polar-cap|observed-disc|file)");
}

NoiseSpec::Kind parse_noise_kind(std::string_view name) {
  if (name == "constant") return NoiseSpec::Kind::constant;
  if (name == "colatitude-linear") return NoiseSpec::Kind::colatitude_linear;
  if (name == "hemisphere-step") return NoiseSpec::Kind::hemisphere_step;
  if (name == "file") return NoiseSpec::Kind::file;
  throw InvalidParameter("unknown noise type '" + std::string(name) +
                         "' (expected constant|colatitude-linear|hemisphere-step|file)");
}

namespace {

std::vector<double> read_map_for(const std::string& path, const Pixelization& pix) {
  auto map = read_map_file(path);
  if (map.order != pix.order() || map.values.size() != pix.size())
    throw ShapeError("map file '" + path + "' has order " + std::to_string(map.order) +
                     ", expected " + std::to_string(pix.order()));
  return std::move(map.values);
}

}  // namespace

std::vector<double> make_mask(const MaskSpec& spec, const Pixelization& pix) {
  std::vector<double> w(pix.size(), 1.0);
  switch (spec.kind) {
    case MaskSpec::Kind::full_sky:
      break;
    case MaskSpec::Kind::polar_cap:
      for (std::size_t k = 0; k < pix.size(); ++k)
        if (pix.theta(k) < spec.theta_cut) w[k] = 0.0;
      break;
    case MaskSpec::Kind::observed_disc: {
      std::fill(w.begin(), w.end(), 0.0);
      const auto centre = UnitVector::from_angles(spec.center_theta, spec.center_phi);
      for (std::size_t k : points_within(pix, centre, spec.radius)) w[k] = 1.0;
      break;
    }
    case MaskSpec::Kind::file:
      w = read_map_for(spec.path, pix);
      break;
  }
  for (double v : w)
    if (!(v >= 0.0 && v <= 1.0)) throw InvalidParameter("mask values must lie in [0, 1]");
  return w;
}

std::vector<double> make_noise(const NoiseSpec& spec, const Pixelization& pix) {
  std::vector<double> s(pix.size(), spec.sigma0);
  switch (spec.kind) {
    case NoiseSpec::Kind::constant:
      break;
    case NoiseSpec::Kind::colatitude_linear:
      for (std::size_t k = 0; k < pix.size(); ++k)
        s[k] = spec.sigma0 + (spec.sigma1 - spec.sigma0) * pix.theta(k) / std::numbers::pi;
      break;
    case NoiseSpec::Kind::hemisphere_step:
      for (std::size_t k = 0; k < pix.size(); ++k)
        s[k] = pix.point(k).z >= 0.0 ? spec.sigma0 : spec.sigma1;
      break;
    case NoiseSpec::Kind::file:
      s = read_map_for(spec.path, pix);
      break;
  }
  for (double v : s)
    if (!(v >= 0.0)) throw InvalidParameter("noise levels must be >= 0");
  return s;
}

std::string Scenario::experiment_for(int j) const {
  const std::string override_name = "j" + std::to_string(j);
  if (masks.contains(override_name) || noises.contains(override_name)) return override_name;
  if (schedule.empty()) return {};
  for (const auto& e : schedule)
    if (j >= e.j_lo && j <= e.j_hi) return e.experiment;
  throw ConfigError("scenario schedule does not cover scale " + std::to_string(j));
}

const MaskSpec& Scenario::mask_for(int j) const {
  static const MaskSpec full_sky{};
  const auto name = experiment_for(j);
  if (auto it = masks.find(name); it != masks.end()) return it->second;
  if (name == "j" + std::to_string(j)) {
    // per-scale override that only sets the noise: fall back to the schedule
    for (const auto& e : schedule)
      if (j >= e.j_lo && j <= e.j_hi)
        if (auto it = masks.find(e.experiment); it != masks.end()) return it->second;
  }
  return full_sky;
}

const NoiseSpec& Scenario::noise_for(int j) const {
  static const NoiseSpec noiseless{};
  const auto name = experiment_for(j);
  if (auto it = noises.find(name); it != noises.end()) return it->second;
  if (name == "j" + std::to_string(j)) {
    for (const auto& e : schedule)
      if (j >= e.j_lo && j <= e.j_hi)
        if (auto it = noises.find(e.experiment); it != noises.end()) return it->second;
  }
  return noiseless;
}

int Scenario::beam_band(int band_limit) const {
  return std::max(1, static_cast<int>(std::lround(beam_factor * band_limit)));
}

ScaleObservation Scenario::materialize(int j, const Pixelization& pix, int band_limit) const {
  ScaleObservation obs;
  obs.mask = make_mask(mask_for(j), pix);
  obs.sigma = make_noise(noise_for(j), pix);
  obs.beam = beam_profile(beam, beam_band(band_limit));
  return obs;
}

void Scenario::validate() const {
  if (!(beam_factor > 0.0)) throw ConfigError("scenario.beam_factor must be > 0");
  for (const auto& e : schedule) {
    if (e.j_hi < e.j_lo) throw ConfigError("scenario schedule range " + std::to_string(e.j_lo) + "-" +
                                           std::to_string(e.j_hi) + " is empty");
    if (!masks.contains(e.experiment) && !noises.contains(e.experiment))
      throw ConfigError("scenario schedule names experiment '" + e.experiment +
                        "' with neither [mask." + e.experiment + "] nor [noise." + e.experiment + "]");
  }
}

std::vector<double> observe(std::span<const double> field, std::span<const double> mask,
                            std::span<const double> sigma, RandomStream& rng) {
  if (mask.size() != field.size() || sigma.size() != field.size())
    throw ShapeError("observe: mask/noise map length " + std::to_string(mask.size()) + "/" +
                     std::to_string(sigma.size()) + " does not match " + std::to_string(field.size()) +
                     " points");
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> y(field.size());
  for (std::size_t k = 0; k < field.size(); ++k) {
    const double u = normal(rng);
    y[k] = mask[k] * (field[k] + sigma[k] * u);
  }
  return y;
}

std::vector<double> observe(const Alm& alm_j, const Pixelization& pix, const ScaleObservation& obs,
                            RandomStream& rng) {
  if (obs.mask.size() != pix.size() || obs.sigma.size() != pix.size())
    throw ShapeError("observe: mask/noise maps do not match the scale pixelization");
  const auto field = inverse_sht(alm_j, pix);
  return observe(field, obs.mask, obs.sigma, rng);
}

}  // namespace nse
