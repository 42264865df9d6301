#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <sys/wait.h>

#include "nse/commands.hpp"
#include "nse/error.hpp"
#include "nse/io.hpp"

using namespace nse;
namespace fs = std::filesystem;

namespace {

const fs::path scratch = NSE_SCRATCH_DIR;

const char* kSmallConfig = R"(
[window]
B = 2
M = 5
j_min = 0
j_max = 5

[scenario]
schedule = 2-3:cap

[mask.cap]
type = polar-cap
theta_cut = 0.6

[noise.cap]
sigma0 = 0.05

[estimator]
threshold = fixed
t = 0.05
weights = mle

[mc]
scales = 2-3
replicates = 6
seed = 3
)";

Config small_config(const std::string& extra = "") { return parse_config(std::string(kSmallConfig) + extra, scratch); }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(cell);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

TEST_CASE("windows command") {
  const auto cfg = small_config();
  const auto out = scratch / "windows";
  cmd_windows(cfg, out);
  const auto profiles = read_csv(out / "profiles.csv");
  REQUIRE(profiles.size() == 1 + 2 * 181);
  CHECK(profiles[0] == std::vector<std::string>{"j", "theta", "value"});
  // theta = 0 gives sum_l b_l (2l+1)/(4 pi)
  double peak = 0.0;
  for (int l = 0; l <= 8; ++l) peak += cfg.experiment.windows(2, l) * (2 * l + 1) / (4 * std::numbers::pi);
  CHECK(std::stod(profiles[1][2]) == doctest::Approx(peak).epsilon(1e-14));

  const auto partition = read_csv(out / "partition.csv");
  for (std::size_t i = 1; i < partition.size(); ++i) CHECK(std::abs(std::stod(partition[i][1]) - 1.0) < 1e-12);
  const auto windows = read_csv(out / "windows.csv");
  CHECK(windows[0] == std::vector<std::string>{"j", "l", "b"});
  CHECK(windows.size() > 10);

  auto empty = cfg;
  empty.experiment.scales.clear();
  cmd_windows(empty, scratch / "windows_empty");
  CHECK(slurp(scratch / "windows_empty" / "profiles.csv") == "j,theta,value\n");
}

TEST_CASE("synth then estimate reproduces the Monte Carlo replicate 0") {
  const auto cfg = small_config();
  const auto maps = scratch / "synth";
  cmd_synth(cfg, maps);
  CHECK(fs::exists(maps / "field.alm"));
  for (const char* stem : {"WX", "Wsigma", "WZ", "Y"}) CHECK(fs::exists(maps / (std::string(stem) + "_j3.map")));

  // Y = WX + WZ pointwise
  const auto y = read_map_file(maps / "Y_j3.map").values;
  const auto wx = read_map_file(maps / "WX_j3.map").values;
  const auto wz = read_map_file(maps / "WZ_j3.map").values;
  double worst = 0.0;
  for (std::size_t k = 0; k < y.size(); ++k) worst = std::max(worst, std::abs(y[k] - wx[k] - wz[k]));
  CHECK(worst < 1e-15);

  const auto rows = cmd_estimate(cfg, maps, scratch / "estimate");
  const auto mc = run_experiment(cfg.experiment);
  REQUIRE(rows.size() == 2);
  for (const auto& row : rows) {
    const auto it = std::find_if(mc.rows.begin(), mc.rows.end(),
                                 [&](const ResultRow& r) { return r.j == row.j && r.replicate == 0; });
    REQUIRE(it != mc.rows.end());
    CHECK(row.c_hat == doctest::Approx(it->c_hat).epsilon(1e-12));
  }

  // reruns write identical files
  const auto first = slurp(maps / "Y_j2.map");
  cmd_synth(cfg, maps);
  CHECK(slurp(maps / "Y_j2.map") == first);
}

TEST_CASE("synth with no noise and with everything masked") {
  auto quiet = small_config();
  quiet.experiment.scenario.noises["cap"].sigma0 = 0.0;
  cmd_synth(quiet, scratch / "quiet");
  for (double v : read_map_file(scratch / "quiet" / "WZ_j2.map").values) CHECK(v == 0.0);

  auto dark = small_config();
  dark.experiment.scenario.masks["cap"].theta_cut = 4.0;
  cmd_synth(dark, scratch / "dark");
  for (double v : read_map_file(scratch / "dark" / "Y_j2.map").values) CHECK(v == 0.0);
}

TEST_CASE("estimate names the scale of a missing map") {
  const auto cfg = small_config();
  fs::create_directories(scratch / "nomaps");
  try {
    cmd_estimate(cfg, scratch / "nomaps", scratch / "nomaps_out");
    FAIL("expected IoError");
  } catch (const IoError& e) {
    CHECK(std::string(e.what()).find("scale 2") != std::string::npos);
  }
}

TEST_CASE("mc command output") {
  const auto cfg = small_config();
  const auto result = cmd_mc(cfg, scratch / "mc", 2);
  const auto rows = read_csv(scratch / "mc" / "results.csv");
  CHECK(rows.size() == 1 + 12);
  CHECK(rows[1][5] == "mle");
  CHECK(read_csv(scratch / "mc" / "summary.csv").size() == 3);
  CHECK(!fs::exists(scratch / "mc" / "missing.txt"));
  CHECK(result.summary.size() == 2);
}

TEST_CASE("validate command passes on the shipped configuration") {
  const auto cfg = small_config();
  const auto checks = cmd_validate(cfg);
  CHECK(checks.size() == 1 + 4 + 2);
  for (const auto& c : checks) {
    INFO(c.name);
    CHECK(c.pass);
  }
  CHECK(cubature_gram_error(8) < 1e-12);
}

#ifdef NSE_CLI_PATH
namespace {

int run_cli(const std::string& args) {
  const std::string cmd = std::string(NSE_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("command line exit codes") {
  const auto cfg_path = scratch / "cli.ini";
  {
    std::ofstream(cfg_path) << kSmallConfig;
  }
  const std::string cfg = "--config " + cfg_path.string();
  CHECK(run_cli(cfg + " --out " + (scratch / "cli").string() + " windows") == 0);
  CHECK(run_cli(cfg + " validate") == 0);
  CHECK(run_cli(cfg + " --threads 2 --out " + (scratch / "cli").string() + " mc") == 0);
  CHECK(fs::exists(scratch / "cli" / "results.csv"));
  CHECK(run_cli("--config " + (scratch / "absent.ini").string() + " mc") == 2);
  CHECK(run_cli(cfg + " --threads 0 mc") == 2);
  CHECK(run_cli(cfg + " estimate --maps " + (scratch / "nomaps").string()) == 2);

  std::ofstream(scratch / "bad.ini") << "[window]\nB = 0.5\n";
  CHECK(run_cli("--config " + (scratch / "bad.ini").string() + " windows") == 2);
}
#endif
