#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>

#include "nse/config.hpp"
#include "nse/error.hpp"
#include "nse/io.hpp"
#include "support.hpp"

using namespace nse;
namespace fs = std::filesystem;

namespace {

const fs::path scratch = NSE_SCRATCH_DIR;

void write_text(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream(p) << text;
}

}  // namespace

TEST_CASE("map files round trip exactly") {
  const Pixelization pix(12);
  std::vector<double> v(pix.size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = std::sin(1e3 * k) / 3.0 + 1e-300 * k;
  write_map_file(scratch / "maps" / "v.map", pix, v);
  const auto m = read_map_file(scratch / "maps" / "v.map");
  CHECK(m.order == 12);
  CHECK(m.n_rings == pix.n_rings());
  CHECK(m.n_phi == pix.n_phi());
  CHECK(m.values == v);
  CHECK_THROWS_AS(write_map_file(scratch / "bad.map", pix, std::vector<double>(3)), ShapeError);
}

TEST_CASE("malformed map files") {
  CHECK_THROWS_AS(read_map_file(scratch / "nope.map"), IoError);
  write_text(scratch / "h.map", "#order x\n");
  CHECK_THROWS_AS(read_map_file(scratch / "h.map"), IoError);
  write_text(scratch / "r.map", "#order 0\n#nrings 1\n#nphi 1\n0,0,0,12.56,abc\n");
  CHECK_THROWS_AS(read_map_file(scratch / "r.map"), IoError);
  write_text(scratch / "n.map", "#order 0\n#nrings 1\n#nphi 1\n0,0,0,12.56\n");
  CHECK_THROWS_AS(read_map_file(scratch / "n.map"), IoError);
}

TEST_CASE("Alm files round trip exactly") {
  const auto alm = testing::random_alm(9, 12);
  write_alm_file(scratch / "a.alm", alm);
  const auto back = read_alm_file(scratch / "a.alm");
  CHECK(back.lmax() == 9);
  for (std::size_t i = 0; i < alm.size(); ++i) CHECK(back.data()[i] == alm.data()[i]);
}

TEST_CASE("number formatting") {
  CHECK(format_double(0.5) == "0.5");
  CHECK(std::stod(format_double(0.1)) == 0.1);
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("ini parsing") {
  const auto t = parse_ini("# top\n[a]\nx = 1 # trailing\n; note\ny=two words\n\n[b]\nz = 3\n");
  CHECK(t.at("a").at("x") == "1");
  CHECK(t.at("a").at("y") == "two words");
  CHECK(t.at("b").at("z") == "3");
  CHECK_THROWS_AS(parse_ini("[a]\nx = 1\nx = 2\n"), ConfigError);
  CHECK_THROWS_AS(parse_ini("x = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_ini("[a\n"), ConfigError);
  CHECK_THROWS_AS(parse_ini("[a]\njust text\n"), ConfigError);
}

TEST_CASE("scale lists") {
  CHECK(parse_scale_list("3-6") == std::vector<int>{3, 4, 5, 6});
  CHECK(parse_scale_list("3,5") == std::vector<int>{3, 5});
  CHECK(parse_scale_list("2-3, 6") == std::vector<int>{2, 3, 6});
  CHECK(parse_scale_list("").empty());
  CHECK_THROWS_AS(parse_scale_list("5-3"), ConfigError);
  CHECK_THROWS_AS(parse_scale_list("x"), ConfigError);
}

TEST_CASE("defaults give a noiseless full-sky run") {
  const auto cfg = parse_config("[mc]\nscales = 3\n", "/tmp/base");
  const auto& exp = cfg.experiment;
  CHECK(exp.windows.band_ratio() == 2.0);
  CHECK(exp.windows.cutoff().smoothness() == 5);
  CHECK(exp.windows.mode() == WindowMode::tight);
  CHECK(exp.replicates == 500);
  CHECK(exp.scenario.mask_for(3).kind == MaskSpec::Kind::full_sky);
  CHECK(exp.scenario.noise_for(3).sigma0 == 0.0);
  CHECK(exp.estimator.threshold.kind == ThresholdRule::Kind::schedule);
  CHECK(cfg.out_dir == (fs::path("/tmp/base") / ".").lexically_normal());
  CHECK(cfg.profile_points == 181);
}

TEST_CASE("shipped configs load") {
  const fs::path configs = fs::path(NSE_SOURCE_DIR) / "configs";
  const auto desk = load_config(configs / "desk.ini");
  CHECK(desk.experiment.scales == std::vector<int>{3, 4, 5, 6});
  CHECK(desk.experiment.replicates == 500);
  CHECK(desk.experiment.scenario.mask_for(5).kind == MaskSpec::Kind::polar_cap);
  CHECK(desk.experiment.scenario.mask_for(6).kind == MaskSpec::Kind::observed_disc);
  CHECK(desk.out_dir == (configs / "../out/desk").lexically_normal());
  CHECK_NOTHROW(desk.experiment.validate());

  const auto smoke = load_config(configs / "smoke.ini");
  CHECK(smoke.experiment.estimator.weights == WeightMode::mle);
  CHECK(smoke.experiment.estimator.threshold.value == 0.05);
  CHECK(smoke.experiment.scenario.noise_for(2).kind == NoiseSpec::Kind::hemisphere_step);
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(parse_config("[windw]\nB = 2\n", "."), ConfigError);
  CHECK_THROWS_AS(parse_config("[window]\nBB = 2\n", "."), ConfigError);
  CHECK_THROWS_AS(parse_config("[window]\nB = 1\n", "."), ConfigError);
  CHECK_THROWS_AS(parse_config("[window]\nmode = loose\n", "."), ConfigError);
  CHECK_THROWS_AS(parse_config("[model]\nalpha = 2\n", "."), ConfigError);
  CHECK_THROWS_AS(parse_config("[window]\nM = five\n", "."), ConfigError);
  CHECK_THROWS_AS(parse_config("[scenario]\nschedule = 3-4:A\n", "."), ConfigError);
  CHECK_THROWS_AS(parse_config("[estimator]\nweights = best\n", "."), ConfigError);
  CHECK_THROWS_AS(load_config(scratch / "missing.ini"), IoError);
}

TEST_CASE("paths and overrides") {
  const auto cfg = parse_config(
      "[scenario]\nschedule = 2-4:A\n"
      "[mask.A]\ntype = file\npath = masks/a.map\n"
      "[noise.j3]\nsigma0 = 0.3\n"
      "[io]\nout = run\nmaps = maps\n",
      "/data/cfg");
  CHECK(cfg.experiment.scenario.mask_for(2).path == "/data/cfg/masks/a.map");
  CHECK(cfg.experiment.scenario.noise_for(3).sigma0 == 0.3);
  CHECK(cfg.experiment.scenario.mask_for(3).kind == MaskSpec::Kind::file);
  CHECK(cfg.out_dir == fs::path("/data/cfg/run"));
  CHECK(cfg.maps_dir == fs::path("/data/cfg/maps"));
}
