#include "nse/commands.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <numbers>
#include <random>

#include "nse/error.hpp"
#include "nse/io.hpp"

namespace nse {

namespace {

std::ofstream open_csv(const std::filesystem::path& path) {
  std::error_code ec;
  std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

std::string scale_file(const char* stem, int j) { return std::string(stem) + "_j" + std::to_string(j) + ".map"; }

EstimatorConfig scale_config(const EstimatorConfig& cfg, double target) {
  auto out = cfg;
  if (out.pilot == PilotRule::oracle) out.pilot_value = target;
  return out;
}

}  // namespace

void cmd_windows(const Config& cfg, const std::filesystem::path& out_dir) {
  const auto& fam = cfg.experiment.windows;
  const auto& scales = cfg.experiment.scales;

  auto windows = open_csv(out_dir / "windows.csv");
  windows << "j,l,b\n";
  for (int j : scales) {
    const auto band = fam.band(j);
    for (int l = band.l_min; l <= band.l_max; ++l) windows << j << ',' << l << ',' << format_double(fam(j, l)) << '\n';
  }

  auto profiles = open_csv(out_dir / "profiles.csv");
  profiles << "j,theta,value\n";
  for (int j : scales) {
    const auto b = fam.table(j);
    for (int i = 0; i < cfg.profile_points; ++i) {
      const double theta = std::numbers::pi * i / (cfg.profile_points - 1);
      profiles << j << ',' << format_double(theta) << ',' << format_double(zonal_kernel(b, std::cos(theta))) << '\n';
    }
  }

  auto partition = open_csv(out_dir / "partition.csv");
  partition << "l,sum_b2\n";
  int lmax = 0;
  for (int j : scales) lmax = std::max(lmax, fam.band(j).l_max);
  for (int l = 1; l <= lmax && !scales.empty(); ++l) {
    double sum = 0.0;
    for (int j = fam.j_min(); j <= fam.j_max(); ++j) {
      const double b = fam(j, l);
      sum += b * b;
    }
    partition << l << ',' << format_double(sum) << '\n';
  }
}

void cmd_synth(const Config& cfg, const std::filesystem::path& out_dir) {
  const auto& exp = cfg.experiment;
  if (exp.scales.empty()) throw ConfigError("[mc] scales is empty; nothing to synthesize");
  const auto field = synthesize_replicate(exp, 0);
  write_alm_file(out_dir / "field.alm", field);
  for (int j : exp.scales) {
    const auto ps = prepare(exp, j);
    const auto& beam = ps.observation.beam;
    const auto x = ps.field_plan.inverse(apply_band_limit(field.resized(static_cast<int>(beam.size()) - 1), beam));
    const auto& w = ps.observation.mask;
    const auto& s = ps.observation.sigma;
    // same draws, in the same order, as observe() on the (0, noise, j) stream
    auto rng = SeededRng(exp.seed).stream(0, StreamRole::noise, static_cast<std::uint64_t>(j));
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> wx(x.size()), ws(x.size()), wz(x.size()), y(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
      const double u = normal(rng);
      wx[k] = w[k] * x[k];
      ws[k] = w[k] * s[k];
      wz[k] = w[k] * (s[k] * u);
      y[k] = w[k] * (x[k] + s[k] * u);
    }
    const auto& pix = ps.needlet.pix();
    write_map_file(out_dir / scale_file("WX", j), pix, wx);
    write_map_file(out_dir / scale_file("Wsigma", j), pix, ws);
    write_map_file(out_dir / scale_file("WZ", j), pix, wz);
    write_map_file(out_dir / scale_file("Y", j), pix, y);
  }
}

std::vector<ResultRow> cmd_estimate(const Config& cfg, const std::filesystem::path& maps_dir,
                                    const std::filesystem::path& out_dir) {
  const auto& exp = cfg.experiment;
  if (exp.scales.empty()) throw ConfigError("[mc] scales is empty; nothing to estimate");
  std::vector<ResultRow> rows;
  for (int j : exp.scales) {
    const auto path = maps_dir / scale_file("Y", j);
    if (!std::filesystem::exists(path))
      throw IoError("scale " + std::to_string(j) + ": map file '" + path.string() + "' not found");
    const auto ps = prepare(exp, j);
    const auto map = read_map_file(path);
    if (map.order != ps.needlet.pix().order() || map.values.size() != ps.needlet.size())
      throw ShapeError("scale " + std::to_string(j) + ": map '" + path.string() + "' has order " +
                       std::to_string(map.order) + ", the scale grid has order " +
                       std::to_string(ps.needlet.pix().order()));
    if (!ps.setup) throw AllMaskedError(ps.setup_error);
    const auto gamma = needlet_coeffs_of_sequence(map.values, ps.needlet);
    const auto est = two_pass_estimate(gamma, ps.needlet, *ps.setup, scale_config(exp.estimator, ps.target), ps.target);
    rows.push_back({j, 0, est.c_hat, est.c_target, est.kept_count, est.mode});
  }
  auto out = open_csv(out_dir / "estimate.csv");
  write_results_csv(out, rows);
  return rows;
}

ExperimentResult cmd_mc(const Config& cfg, const std::filesystem::path& out_dir, int threads) {
  auto exp = cfg.experiment;
  if (cfg.dump_coefficients) exp.coefficient_dir = out_dir / "coefficients";
  const auto result = run_experiment(exp, threads);
  {
    auto out = open_csv(out_dir / "results.csv");
    write_results_csv(out, result.rows);
  }
  {
    auto out = open_csv(out_dir / "summary.csv");
    write_summary_csv(out, result.summary);
  }
  const auto missing = out_dir / "missing.txt";
  if (!result.missing.empty()) {
    auto out = open_csv(missing);
    for (const auto& m : result.missing) out << m << '\n';
  } else {
    std::error_code ec;
    std::filesystem::remove(missing, ec);
  }
  return result;
}

double cubature_gram_error(int order) {
  const auto pix = build_pixelization(order);
  const std::size_t n = pix.size();
  struct Basis {
    int l;
    std::vector<std::complex<double>> values;
  };
  std::vector<Basis> basis;
  for (int l = 0; l <= order; ++l)
    for (int m = -l; m <= l; ++m) {
      Basis b{l, std::vector<std::complex<double>>(n)};
      for (std::size_t k = 0; k < n; ++k) b.values[k] = eval_ylm(l, m, pix.point(k));
      basis.push_back(std::move(b));
    }
  double worst = 0.0;
  for (std::size_t a = 0; a < basis.size(); ++a)
    for (std::size_t c = a; c < basis.size(); ++c) {
      if (basis[a].l + basis[c].l > order) continue;
      std::complex<double> g = 0.0;
      for (std::size_t k = 0; k < n; ++k) g += pix.weight(k) * basis[a].values[k] * std::conj(basis[c].values[k]);
      worst = std::max(worst, std::abs(g - (a == c ? 1.0 : 0.0)));
    }
  return worst;
}

std::vector<CheckResult> cmd_validate(const Config& cfg) {
  std::vector<CheckResult> checks;
  const auto& fam = cfg.experiment.windows;
  const double B = fam.band_ratio();

  {
    // l covered by every scale that can reach it: B^{j_min} <= l <= B^{j_max}
    const int lo = std::max(1, static_cast<int>(std::ceil(std::pow(B, fam.j_min()) - 1e-9)));
    const int hi = static_cast<int>(std::floor(std::pow(B, fam.j_max()) + 1e-9));
    double worst = 0.0;
    for (int l = lo; l <= hi; ++l) {
      double sum = 0.0;
      for (int j = fam.j_min(); j <= fam.j_max(); ++j) {
        const double b = fam(j, l);
        sum += fam.mode() == WindowMode::tight ? b * b : b;
      }
      worst = std::max(worst, std::abs(sum - 1.0));
    }
    const char* name = fam.mode() == WindowMode::tight ? "partition: sum_j b^2 = 1" : "partition: sum_j b = 1";
    checks.push_back({name, worst, 1e-12, worst < 1e-12});
  }

  for (int order : {4, 8, 16, 32}) {
    const double err = cubature_gram_error(order);
    checks.push_back({"cubature Gram, order " + std::to_string(order), err, 1e-12, err < 1e-12});
  }

  for (int j : cfg.experiment.scales) {
    const NeedletScale scale(fam, j);
    double worst = 0.0;
    for (int r = 0; r < scale.pix().n_rings(); ++r) {
      const auto id = needlet_norm_identity_check(scale, static_cast<std::size_t>(r) * scale.pix().n_phi());
      if (id.rhs > 0.0) worst = std::max(worst, std::abs(id.lhs - id.rhs) / id.rhs);
      else worst = std::max(worst, std::abs(id.lhs));
    }
    checks.push_back({"needlet norm identity, scale " + std::to_string(j), worst, 1e-9, worst < 1e-9});
  }
  return checks;
}

}  // namespace nse
