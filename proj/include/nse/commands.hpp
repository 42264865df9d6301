#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "nse/config.hpp"
#include "nse/mc.hpp"

namespace nse {

/// windows.csv (j,l,b), profiles.csv (j,theta,value) with value =
/// sum_l b_{j,l} L_l(cos theta), and partition.csv (l,sum_b2) for the
/// configured scales.
void cmd_windows(const Config& cfg, const std::filesystem::path& out_dir);

/// For replicate 0 and every configured scale j: WX_j<j>.map, Wsigma_j<j>.map,
/// WZ_j<j>.map, Y_j<j>.map, plus field.alm with the shared field.
void cmd_synth(const Config& cfg, const std::filesystem::path& out_dir);

/// Reads Y_j<j>.map from maps_dir for every configured scale and writes
/// estimate.csv in the results format (replicate 0).  Throws IoError naming
/// the scale when a map is missing.
std::vector<ResultRow> cmd_estimate(const Config& cfg, const std::filesystem::path& maps_dir,
                                    const std::filesystem::path& out_dir);

/// results.csv, summary.csv and, when rows were skipped, missing.txt.
ExperimentResult cmd_mc(const Config& cfg, const std::filesystem::path& out_dir, int threads);

struct CheckResult {
  std::string name;
  double value = 0.0;      ///< worst error found
  double tolerance = 0.0;
  bool pass = false;
};

/// Max |G - I| over harmonic pairs with l + l' <= order, G the cubature
/// Gram matrix of build_pixelization(order).
double cubature_gram_error(int order);

/// Structural invariants without Monte Carlo: tight-frame partition,
/// cubature Gram matrices, and the needlet norm identity on one point per
/// ring of every configured scale.
std::vector<CheckResult> cmd_validate(const Config& cfg);

}  // namespace nse
