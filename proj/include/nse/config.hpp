#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "nse/mc.hpp"

namespace nse {

/// Raw INI content: section -> key -> value, in a stable order.
using IniTable = std::map<std::string, std::map<std::string, std::string>>;

/// "[section]" headers, "key = value" lines, '#' or ';' comments.
/// Throws ConfigError with the line number on malformed input.
IniTable parse_ini(std::string_view text);

/// A fully resolved run configuration.
///
/// Sections and keys (defaults in parentheses):
///   [window]    B (2), M (5), mode (tight), j_min (0), j_max (8)
///   [model]     alpha (3), g (constant), g0 (1), modulation (0)
///   [scenario]  schedule ("lo-hi:name, j:name, ..."), beam (sharp), beam_factor (1)
///   [mask.NAME] type, theta_cut, center_theta, center_phi, radius, path
///   [noise.NAME] type, sigma0, sigma1, path
///   [estimator] threshold (schedule), tau0 (0.1), epsilon (0.5), t, quantile (0.5),
///               weights (uniform), pilot (two-pass), pilot_value, functional (nominal)
///   [mc]        scales ("3-6" or "3,4,5"), replicates (500), seed (0)
///   [io]        out (.), maps, dump_coefficients (false), profile_points (181)
/// NAME may be "j<N>" to override the schedule at one scale.  Paths are
/// resolved relative to the directory of the config file.
struct Config {
  std::filesystem::path base_dir;
  Experiment experiment;
  std::filesystem::path out_dir;
  std::filesystem::path maps_dir;
  bool dump_coefficients = false;
  int profile_points = 181;
};

Config parse_config(std::string_view text, const std::filesystem::path& base_dir);
/// Throws IoError when the file cannot be read, ConfigError on bad content.
Config load_config(const std::filesystem::path& path);

/// "3-6", "3,4,5", "3-4,6"; empty text gives an empty list.
std::vector<int> parse_scale_list(std::string_view text);

}  // namespace nse
