#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nse/model.hpp"
#include "nse/needlet.hpp"
#include "nse/window.hpp"

namespace nse {

/// How t_j is chosen.  The schedule tau0 B^{-(alpha+eps) j} is the default;
/// fixed and quantile rules exist for desk-scale runs where the schedule
/// empties the kept set.
struct ThresholdRule {
  enum class Kind { schedule, fixed, quantile };
  Kind kind = Kind::schedule;
  double tau0 = 0.1;
  double epsilon = 0.5;
  double value = 0.0;    ///< fixed t_j
  double quantile = 0.5; ///< fraction of points kept, smallest functional first

  void validate() const;
  /// t_j for the schedule and fixed rules.
  double threshold(double band_ratio, double alpha, int j) const;
};

ThresholdRule::Kind parse_threshold_kind(std::string_view name);
std::string_view to_string(ThresholdRule::Kind kind);

enum class WeightMode { uniform, mle };
WeightMode parse_weight_mode(std::string_view name);
std::string_view to_string(WeightMode mode);

/// two_pass: uniform first pass; external: the configured value; oracle:
/// the analytic target C^(j), for calibration runs.
enum class PilotRule { two_pass, external, oracle };
PilotRule parse_pilot_rule(std::string_view name);

/// Which weight multiplies K^2 in the mask functional.  point uses
/// psi_k = sqrt(lambda_k) K as is; nominal replaces lambda_k by the mean
/// weight 4 pi / N_j, so that the small polar weights of the product grid
/// do not let masked points near the poles pass the threshold.
enum class FunctionalNorm { nominal, point };
FunctionalNorm parse_functional_norm(std::string_view name);
std::string_view to_string(FunctionalNorm norm);

struct EstimatorConfig {
  ThresholdRule threshold;
  WeightMode weights = WeightMode::uniform;
  PilotRule pilot = PilotRule::two_pass;
  double pilot_value = 0.0;  ///< C-bar for the external rule
  double alpha = 3.0;
  FunctionalNorm functional = FunctionalNorm::nominal;

  void validate() const;
};

/// C^(j) = (4 pi)^{-1} sum_l (2l+1) b_{j,l}^2 C_l.
double target_cj(const WindowFamily& fam, int j, std::span<const double> spectrum);

/// n_{j,k}^2 = sum_p lambda_p^2 s_p^2 K^2(xi_k . xi_p) with s = W sigma,
/// through the squared-kernel transform.
std::vector<double> noise_variances(const NeedletScale& scale, std::span<const double> sigma_eff);
/// Same quantity by direct O(N_j^2) summation.
std::vector<double> noise_variances_direct(const NeedletScale& scale, std::span<const double> sigma_eff);
/// sqrt of noise_variances.
std::vector<double> noise_levels(const NeedletScale& scale, std::span<const double> sigma_eff);

/// W sigma, pointwise.
std::vector<double> effective_noise(std::span<const double> mask, std::span<const double> sigma);

/// F_k = (sum_p lambda_p (1 - W_p)^2 psi_k(xi_p)^2)^{1/2} for every k,
/// through the squared-kernel transform.
std::vector<double> mask_functional(const NeedletScale& scale, std::span<const double> mask,
                                    FunctionalNorm norm = FunctionalNorm::nominal);
std::vector<double> mask_functional_direct(const NeedletScale& scale, std::span<const double> mask,
                                           FunctionalNorm norm = FunctionalNorm::nominal);

/// {k : F_k <= t}, ascending.
std::vector<std::size_t> kept_set(std::span<const double> functional, double threshold);
/// The ceil(q N) indices with the smallest F_k (ties by index), ascending.
std::vector<std::size_t> kept_set_quantile(std::span<const double> functional, double q);

/// Weights over all N points, zero off the kept set, summing to one.
/// mle: proportional to (pilot + n_k^2)^{-2}.  Throws AllMaskedError on an
/// empty kept set and InvalidParameter on a non-positive mle pilot.
std::vector<double> weights(WeightMode mode, std::span<const std::size_t> kept,
                            std::span<const double> noise_var, double pilot);

/// sum_k w_k (gamma_k^2 - n_k^2).
double estimate(std::span<const double> gamma, std::span<const double> noise_var,
                std::span<const double> w);

/// Deterministic per-scale quantities of a scenario: they depend on the
/// mask and noise maps only, so they are computed once and shared by all
/// replicates.
struct ScaleSetup {
  int j = 0;
  std::vector<double> noise_var;   ///< n_{j,k}^2
  std::vector<double> functional;  ///< F_k
  double threshold = 0.0;          ///< t_j (quantile rule: largest kept F_k)
  std::vector<std::size_t> kept;
};

/// Throws AllMaskedError when the kept set is empty.
ScaleSetup prepare_scale(const NeedletScale& scale, const ScaleObservation& obs,
                         const EstimatorConfig& cfg);

struct ScaleEstimate {
  int j = 0;
  double c_hat = 0.0;
  double c_target = 0.0;
  std::size_t kept_count = 0;
  double weights_entropy = 0.0;
  double n2_min = 0.0;
  double n2_median = 0.0;
  double n2_max = 0.0;
  double pilot = 0.0;
  bool pilot_floored = false;
  WeightMode mode = WeightMode::uniform;
};

/// Uniform weights give a single pass.  mle weights use the external pilot,
/// or a uniform first pass floored at 1e-12 times the scale's kernel energy
/// when it is not positive (pilot_floored is then set).
ScaleEstimate two_pass_estimate(std::span<const double> gamma, const NeedletScale& scale,
                                const ScaleSetup& setup, const EstimatorConfig& cfg,
                                double c_target);

/// Mean of (C-hat - C)^2 / C^2.  Throws InvalidParameter when target <= 0
/// or fewer than two estimates are given.
double relative_mse(std::span<const double> estimates, double target);

}  // namespace nse
