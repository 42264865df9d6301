#include "nse/mc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <mutex>
#include <numeric>
#include <ostream>
#include <thread>

#include "nse/error.hpp"
#include "nse/io.hpp"

namespace nse {

void Experiment::validate() const {
  if (replicates < 2) throw InvalidParameter("experiment needs at least 2 replicates");
  if (scales.empty()) throw InvalidParameter("experiment has no scales");
  for (int j : scales)
    if (!windows.contains(j))
      throw InvalidParameter("scale " + std::to_string(j) + " lies outside the window range [" +
                             std::to_string(windows.j_min()) + ", " + std::to_string(windows.j_max()) + "]");
  spectrum.validate();
  scenario.validate();
  estimator.validate();
}

namespace {

int beam_lmax(const Experiment& exp, int j) {
  return 2 * exp.scenario.beam_band(exp.windows.band_limit(j));
}

}  // namespace

int synthesis_lmax(const Experiment& exp) {
  int lmax = 0;
  for (int j : exp.scales) lmax = std::max(lmax, beam_lmax(exp, j));
  return lmax;
}

PreparedScale prepare(const Experiment& exp, int j) {
  NeedletScale needlet(exp.windows, j);
  auto obs = exp.scenario.materialize(j, needlet.pix(), exp.windows.band_limit(j));
  ShtPlan plan(needlet.pix(), static_cast<int>(obs.beam.size()) - 1);
  const auto spectrum = spectrum_values(exp.spectrum, j, std::max(needlet.lmax(), 1));
  PreparedScale out{std::move(needlet), std::move(obs), std::move(plan), 0.0, std::nullopt, {}};
  out.target = target_cj(exp.windows, j, spectrum);
  try {
    out.setup = prepare_scale(out.needlet, out.observation, exp.estimator);
  } catch (const AllMaskedError& e) {
    out.setup_error = e.what();
  }
  return out;
}

Alm synthesize_replicate(const Experiment& exp, std::uint64_t replicate) {
  const int lmax = synthesis_lmax(exp);
  const auto spectrum = spectrum_values(exp.spectrum, exp.scales.front(), lmax);
  auto rng = SeededRng(exp.seed).stream(replicate, StreamRole::signal);
  return synthesize_field(spectrum, lmax, rng);
}

std::vector<double> observe_replicate(const Experiment& exp, const PreparedScale& scale, const Alm& field,
                                      std::uint64_t replicate) {
  const auto& beam = scale.observation.beam;
  const auto alm_j = apply_band_limit(field.resized(static_cast<int>(beam.size()) - 1), beam);
  const auto values = scale.field_plan.inverse(alm_j);
  auto rng = SeededRng(exp.seed).stream(replicate, StreamRole::noise, static_cast<std::uint64_t>(scale.needlet.j()));
  return observe(values, scale.observation.mask, scale.observation.sigma, rng);
}

ExperimentResult run_experiment(const Experiment& exp, int threads) {
  exp.validate();
  std::vector<PreparedScale> prepared;
  prepared.reserve(exp.scales.size());
  for (int j : exp.scales) prepared.push_back(prepare(exp, j));

  auto cfg = exp.estimator;
  const std::size_t n_scales = prepared.size();
  const std::size_t n_rep = static_cast<std::size_t>(exp.replicates);
  std::vector<std::optional<ResultRow>> slots(n_scales * n_rep);
  std::vector<std::string> slot_errors(n_scales * n_rep);

  std::atomic<std::size_t> next{0};
  std::mutex fatal_mutex;
  std::exception_ptr fatal;
  auto worker = [&] {
    for (;;) {
      const std::size_t r = next.fetch_add(1);
      if (r >= n_rep) return;
      try {
        const auto field = synthesize_replicate(exp, r);
        for (std::size_t s = 0; s < n_scales; ++s) {
          const auto& ps = prepared[s];
          const std::size_t slot = s * n_rep + r;
          if (!ps.setup) {
            slot_errors[slot] = ps.setup_error;
            continue;
          }
          const auto y = observe_replicate(exp, ps, field, r);
          const auto gamma = needlet_coeffs_of_sequence(y, ps.needlet);
          if (exp.coefficient_dir) {
            char name[64];
            std::snprintf(name, sizeof name, "gamma_j%d_r%05zu.map", ps.needlet.j(), r);
            write_map_file(*exp.coefficient_dir / name, ps.needlet.pix(), gamma);
          }
          auto scale_cfg = cfg;
          if (scale_cfg.pilot == PilotRule::oracle) scale_cfg.pilot_value = ps.target;
          try {
            const auto est = two_pass_estimate(gamma, ps.needlet, *ps.setup, scale_cfg, ps.target);
            slots[slot] = ResultRow{ps.needlet.j(), static_cast<int>(r), est.c_hat, est.c_target, est.kept_count,
                                    est.mode};
          } catch (const AllMaskedError& e) {
            slot_errors[slot] = e.what();
          }
        }
      } catch (...) {
        std::lock_guard lock(fatal_mutex);
        if (!fatal) fatal = std::current_exception();
        next.store(n_rep);
        return;
      }
    }
  };

  const int n_threads = std::max(1, std::min<int>(threads, exp.replicates));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (fatal) std::rethrow_exception(fatal);

  ExperimentResult result;
  for (std::size_t s = 0; s < n_scales; ++s) {
    std::vector<double> values;
    for (std::size_t r = 0; r < n_rep; ++r) {
      const std::size_t slot = s * n_rep + r;
      if (slots[slot]) {
        result.rows.push_back(*slots[slot]);
        values.push_back(slots[slot]->c_hat);
      } else {
        result.missing.push_back("(j=" + std::to_string(prepared[s].needlet.j()) + ", r=" + std::to_string(r) +
                                 "): " + slot_errors[slot]);
      }
    }
    if (!values.empty()) result.summary.push_back(diagnostics(prepared[s].needlet.j(), values, prepared[s].target));
  }
  std::stable_sort(result.rows.begin(), result.rows.end(), [](const ResultRow& a, const ResultRow& b) {
    return a.j != b.j ? a.j < b.j : a.replicate < b.replicate;
  });
  std::stable_sort(result.summary.begin(), result.summary.end(),
                   [](const DiagnosticsRow& a, const DiagnosticsRow& b) { return a.j < b.j; });
  return result;
}

std::vector<double> estimates_for(const ExperimentResult& result, int j) {
  std::vector<double> out;
  for (const auto& row : result.rows)
    if (row.j == j) out.push_back(row.c_hat);
  return out;
}

DiagnosticsRow diagnostics(int j, std::span<const double> estimates, double target) {
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  DiagnosticsRow row;
  row.j = j;
  row.count = estimates.size();
  if (estimates.empty()) return row;
  const double n = static_cast<double>(estimates.size());
  row.mean = std::accumulate(estimates.begin(), estimates.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : estimates) ss += (x - row.mean) * (x - row.mean);
  row.variance = estimates.size() > 1 ? ss / (n - 1.0) : 0.0;
  row.bias = row.mean - target;
  row.rel_mse = target > 0.0 && estimates.size() > 1 ? relative_mse(estimates, target) : nan;
  try {
    std::tie(row.skewness, row.excess_kurtosis) = skew_kurt(estimates);
  } catch (const InvalidParameter&) {
    row.skewness = row.excess_kurtosis = nan;
  }
  try {
    row.ad_stat = anderson_darling(estimates);
  } catch (const InvalidParameter&) {
    row.ad_stat = nan;
  }
  return row;
}

double anderson_darling(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n < 8) throw InvalidParameter("anderson_darling: need at least 8 values");
  const double nn = static_cast<double>(n);
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / nn;
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / (nn - 1.0));
  if (!(sd > 0.0)) throw InvalidParameter("anderson_darling: sample has zero variance");
  std::vector<double> z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = (x[i] - mean) / sd;
  std::sort(z.begin(), z.end());
  // log Phi(z) and log(1 - Phi(z)) through erfc keep both tails accurate
  auto log_cdf = [](double v) { return std::log(0.5 * std::erfc(-v / std::sqrt(2.0))); };
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    s += (2.0 * i + 1.0) * (log_cdf(z[i]) + log_cdf(-z[n - 1 - i]));
  const double a2 = -nn - s / nn;
  return a2 * (1.0 + 0.75 / nn + 2.25 / (nn * nn));
}

std::pair<double, double> skew_kurt(std::span<const double> x) {
  if (x.size() < 4) throw InvalidParameter("skew_kurt: need at least 4 values");
  const double n = static_cast<double>(x.size());
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : x) {
    const double d = v - mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  if (!(m2 > 0.0)) throw InvalidParameter("skew_kurt: sample has zero variance");
  return {m3 / std::pow(m2, 1.5), m4 / (m2 * m2) - 3.0};
}

void write_results_csv(std::ostream& out, std::span<const ResultRow> rows) {
  out << "j,replicate,c_hat,c_target,kept_count,mode\n";
  for (const auto& r : rows)
    out << r.j << ',' << r.replicate << ',' << format_double(r.c_hat) << ',' << format_double(r.c_target) << ','
        << r.kept_count << ',' << to_string(r.mode) << '\n';
}

void write_summary_csv(std::ostream& out, std::span<const DiagnosticsRow> rows) {
  out << "j,mean,var,bias,rel_mse,skew,exkurt,ad_stat\n";
  for (const auto& r : rows)
    out << r.j << ',' << format_double(r.mean) << ',' << format_double(r.variance) << ',' << format_double(r.bias)
        << ',' << format_double(r.rel_mse) << ',' << format_double(r.skewness) << ','
        << format_double(r.excess_kurtosis) << ',' << format_double(r.ad_stat) << '\n';
}

}  // namespace nse
