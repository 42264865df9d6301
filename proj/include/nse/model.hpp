#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nse/grid.hpp"
#include "nse/harmonics.hpp"
#include "nse/rng.hpp"

namespace nse {

/// Power-law spectrum C_l = l^{-alpha} g(B^{-j} l) with C_0 = 0.
///
/// g is either constant (g0) or a log-periodic modulation
/// g0 (1 + eps cos(2 pi log_B u)), which has period B in u so that one
/// spectrum serves every scale.  Bounds: g0 (1-|eps|) <= g <= g0 (1+|eps|).
struct SpectrumModel {
  enum class Shape { constant, modulated };

  double alpha = 3.0;
  double band_ratio = 2.0;
  Shape shape = Shape::constant;
  double g0 = 1.0;
  double modulation = 0.0;

  /// Throws InvalidParameter on alpha <= 2, g0 <= 0, |eps| >= 1, B <= 1.
  void validate() const;

  double g(double u) const;
  double value(int l) const;
};

SpectrumModel::Shape parse_spectrum_shape(std::string_view name);

/// C_0 .. C_lmax.  The scale argument only selects where g is sampled; for
/// the implemented families it does not change the values.
std::vector<double> spectrum_values(const SpectrumModel& model, int j, int lmax);

/// Independent Gaussian a_{l,m}: real a_{l,0} with variance C_l, complex
/// a_{l,m} (m > 0) with real and imaginary parts of variance C_l / 2.
/// Draw order: l ascending, then m ascending, real before imaginary.
Alm synthesize_field(std::span<const double> spectrum, int lmax, RandomStream& rng);

/// Entrywise a_{l,m} * profile[l]; entries beyond the profile become 0.
Alm apply_band_limit(const Alm& alm, std::span<const double> profile);

enum class BeamShape { sharp, cosine };
BeamShape parse_beam_shape(std::string_view name);

/// B_{j,l} for l = 0..2 band: 1 on [0, band], 0 beyond 2 band.  The sharp
/// shape cuts at band; the cosine shape tapers as cos^2 across (band, 2 band].
std::vector<double> beam_profile(BeamShape shape, int band);

struct MaskSpec {
  enum class Kind { full_sky, polar_cap, observed_disc, file };
  Kind kind = Kind::full_sky;
  double theta_cut = 0.0;       ///< polar cap: W = 0 for theta < theta_cut
  double center_theta = 0.0;    ///< observed disc centre
  double center_phi = 0.0;
  double radius = 0.0;          ///< observed disc: W = 1 within radius
  std::string path;
};

struct NoiseSpec {
  enum class Kind { constant, colatitude_linear, hemisphere_step, file };
  Kind kind = Kind::constant;
  double sigma0 = 0.0;  ///< constant level; north/pole value for the others
  double sigma1 = 0.0;  ///< south/antipode value
  std::string path;
};

MaskSpec::Kind parse_mask_kind(std::string_view name);
NoiseSpec::Kind parse_noise_kind(std::string_view name);

/// Mask W_{j,k} in [0, 1] on the points of pix.
std::vector<double> make_mask(const MaskSpec& spec, const Pixelization& pix);
/// Noise level sigma_{j,k} >= 0 on the points of pix.
std::vector<double> make_noise(const NoiseSpec& spec, const Pixelization& pix);

/// Everything the observation model needs at one scale.
struct ScaleObservation {
  std::vector<double> mask;
  std::vector<double> sigma;
  std::vector<double> beam;  ///< B_{j,l}
};

struct ScheduleEntry {
  int j_lo = 0;
  int j_hi = 0;
  std::string experiment;
};

/// Per-scale observation settings: a schedule maps inclusive scale ranges
/// to named (mask, noise) experiments; per-scale overrides "j<N>" take
/// precedence.  An empty schedule observes every scale without mask or
/// noise.  Beam band L_j = round(beam_factor * L_j^(b)).
struct Scenario {
  std::vector<ScheduleEntry> schedule;
  std::map<std::string, MaskSpec> masks;
  std::map<std::string, NoiseSpec> noises;
  BeamShape beam = BeamShape::sharp;
  double beam_factor = 1.0;

  /// Experiment name in force at scale j ("" for an empty schedule).
  /// Throws ConfigError when a non-empty schedule does not cover j.
  std::string experiment_for(int j) const;
  const MaskSpec& mask_for(int j) const;
  const NoiseSpec& noise_for(int j) const;

  /// Beam band L_j for a scale whose window band limit is band_limit.
  int beam_band(int band_limit) const;

  ScaleObservation materialize(int j, const Pixelization& pix, int band_limit) const;

  void validate() const;
};

/// Y_k = W_k (X_j(xi_k) + sigma_k U_k), with U i.i.d. standard normal drawn
/// from rng in point order.  field holds X_j sampled on pix.
std::vector<double> observe(std::span<const double> field, std::span<const double> mask,
                            std::span<const double> sigma, RandomStream& rng);

/// Same, starting from the band-limited Alm of X_j.
std::vector<double> observe(const Alm& alm_j, const Pixelization& pix,
                            const ScaleObservation& obs, RandomStream& rng);

}  // namespace nse
