// nse: needlet spectral estimation from the command line.
//
//   nse --config run.ini windows|synth|estimate|mc|validate [options]
//
// Exit status: 0 success, 2 configuration/input/I-O error, 3 numerical
// contract violation (including failed --validate checks), 1 otherwise.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "nse/commands.hpp"
#include "nse/error.hpp"

namespace {

int report_checks(const std::vector<nse::CheckResult>& checks) {
  bool ok = true;
  for (const auto& c : checks) {
    std::printf("%-4s %-40s error %.3e (tolerance %.0e)\n", c.pass ? "ok" : "FAIL", c.name.c_str(), c.value,
                c.tolerance);
    ok = ok && c.pass;
  }
  return ok ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Needlet spectral estimation on the sphere"};
  std::string config_path;
  std::string out_dir;
  std::string maps_dir;
  std::uint64_t seed = 0;
  int threads = 1;
  bool validate = false;

  app.add_option("--config", config_path, "run configuration (INI)")->required();
  auto* seed_opt = app.add_option("--seed", seed, "master seed, overrides [mc] seed");
  app.add_option("--out", out_dir, "output directory, overrides [io] out");
  app.add_option("--threads", threads, "worker threads (speed only; results do not depend on it)")
      ->check(CLI::PositiveNumber);
  app.add_flag("--validate", validate, "run the structural invariant checks");

  auto* windows = app.add_subcommand("windows", "window tables, needlet profiles and partition sums");
  auto* synth = app.add_subcommand("synth", "simulated WX, Wsigma, WZ and Y maps for replicate 0");
  auto* estimate = app.add_subcommand("estimate", "estimate C^(j) from Y maps");
  estimate->add_option("--maps", maps_dir, "directory holding Y_j<j>.map files, overrides [io] maps");
  auto* mc = app.add_subcommand("mc", "Monte Carlo experiment");
  auto* validate_cmd = app.add_subcommand("validate", "structural invariant checks, no Monte Carlo");
  app.require_subcommand(0, 1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    auto cfg = nse::load_config(config_path);
    if (*seed_opt) cfg.experiment.seed = seed;
    const std::filesystem::path out = out_dir.empty() ? cfg.out_dir : std::filesystem::path(out_dir);

    if (validate || *validate_cmd) {
      const int status = report_checks(nse::cmd_validate(cfg));
      if (status != 0 || *validate_cmd) return status;
    }
    if (*windows) {
      nse::cmd_windows(cfg, out);
    } else if (*synth) {
      nse::cmd_synth(cfg, out);
    } else if (*estimate) {
      const std::filesystem::path maps = maps_dir.empty() ? cfg.maps_dir : std::filesystem::path(maps_dir);
      if (maps.empty()) throw nse::ConfigError("estimate needs --maps or [io] maps");
      for (const auto& row : nse::cmd_estimate(cfg, maps, out))
        std::printf("j=%d c_hat=%.10g c_target=%.10g kept=%zu\n", row.j, row.c_hat, row.c_target, row.kept_count);
    } else if (*mc) {
      const auto result = nse::cmd_mc(cfg, out, threads);
      for (const auto& d : result.summary)
        std::printf("j=%d n=%zu mean=%.6g bias=%.3g rel_mse=%.4g skew=%.3f A2=%.3f\n", d.j, d.count, d.mean, d.bias,
                    d.rel_mse, d.skewness, d.ad_stat);
      if (!result.missing.empty())
        std::fprintf(stderr, "%zu (scale, replicate) rows skipped; see missing.txt\n", result.missing.size());
    } else if (!validate) {
      std::cerr << app.help();
      return 2;
    }
    return 0;
  } catch (const nse::ConventionViolation& e) {
    std::fprintf(stderr, "nse: numerical contract violated: %s\n", e.what());
    return 3;
  } catch (const nse::ConfigError& e) {
    std::fprintf(stderr, "nse: config: %s\n", e.what());
    return 2;
  } catch (const nse::IoError& e) {
    std::fprintf(stderr, "nse: %s\n", e.what());
    return 2;
  } catch (const nse::Error& e) {
    // invalid parameters, shape mismatches and empty kept sets all trace back to the inputs
    std::fprintf(stderr, "nse: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "nse: %s\n", e.what());
    return 1;
  }
}
