#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nse/estimator.hpp"
#include "nse/model.hpp"
#include "nse/needlet.hpp"
#include "nse/rng.hpp"
#include "nse/window.hpp"

namespace nse {

struct Experiment {
  explicit Experiment(WindowFamily w) : windows(std::move(w)) {}

  WindowFamily windows;
  SpectrumModel spectrum;
  Scenario scenario;
  std::vector<int> scales;
  int replicates = 2;
  std::uint64_t seed = 0;
  EstimatorConfig estimator;
  /// When set, every replicate's coefficients gamma_{j,k} are written as
  /// map files below this directory.
  std::optional<std::filesystem::path> coefficient_dir;

  /// Throws InvalidParameter on R < 2, an empty scale list or scales
  /// outside the window range.
  void validate() const;
};

/// Everything that is fixed for one scale across replicates.
struct PreparedScale {
  NeedletScale needlet;
  ScaleObservation observation;
  ShtPlan field_plan;  ///< evaluates the band-limited field on the scale grid
  double target = 0.0;
  std::optional<ScaleSetup> setup;  ///< empty when the kept set is empty
  std::string setup_error;
};

PreparedScale prepare(const Experiment& exp, int j);

/// Highest l any scale's beam lets through; the synthesis band.
int synthesis_lmax(const Experiment& exp);

/// Field coefficients of replicate r, drawn from the (r, signal) stream.
Alm synthesize_replicate(const Experiment& exp, std::uint64_t replicate);

/// Y_{j,.} of replicate r, using the (r, noise, j) stream.
std::vector<double> observe_replicate(const Experiment& exp, const PreparedScale& scale, const Alm& field,
                                      std::uint64_t replicate);

struct ResultRow {
  int j = 0;
  int replicate = 0;
  double c_hat = 0.0;
  double c_target = 0.0;
  std::size_t kept_count = 0;
  WeightMode mode = WeightMode::uniform;
};

struct DiagnosticsRow {
  int j = 0;
  std::size_t count = 0;
  double mean = 0.0;
  double variance = 0.0;
  double bias = 0.0;
  double rel_mse = 0.0;
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
  double ad_stat = 0.0;
};

struct ExperimentResult {
  std::vector<ResultRow> rows;           ///< sorted by (j, replicate)
  std::vector<DiagnosticsRow> summary;   ///< one per scale with rows
  std::vector<std::string> missing;      ///< "(j, r): reason" for skipped rows
};

/// Replicates run on `threads` workers; results never depend on the count.
ExperimentResult run_experiment(const Experiment& exp, int threads = 1);

/// Estimates of one scale, in replicate order.
std::vector<double> estimates_for(const ExperimentResult& result, int j);

DiagnosticsRow diagnostics(int j, std::span<const double> estimates, double target);

/// Anderson-Darling A^2 of the studentized sample against N(0, 1), with
/// mean and variance estimated, times (1 + 0.75/n + 2.25/n^2).  Throws
/// InvalidParameter for n < 8 or a zero-variance sample.
double anderson_darling(std::span<const double> x);

/// 1% critical value of the modified statistic.
inline constexpr double kAndersonDarlingCritical1 = 1.035;

/// g1 = m3 / m2^{3/2}, g2 = m4 / m2^2 - 3 with central sample moments m_r.
/// Throws InvalidParameter for n < 4 or a zero-variance sample.
std::pair<double, double> skew_kurt(std::span<const double> x);

void write_results_csv(std::ostream& out, std::span<const ResultRow> rows);
void write_summary_csv(std::ostream& out, std::span<const DiagnosticsRow> rows);

}  // namespace nse
