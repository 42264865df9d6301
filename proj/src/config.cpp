#include "nse/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "nse/error.hpp"

namespace nse {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  for (;;) {
    const auto next = s.find(sep, pos);
    out.push_back(trim(s.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos)));
    if (next == std::string_view::npos) return out;
    pos = next + 1;
  }
}

// Reads keys from one section and rejects any key that was not consumed.
class Section {
 public:
  Section(std::string name, const std::map<std::string, std::string>* values)
      : name_(std::move(name)), values_(values) {}

  bool has(const std::string& key) const { return values_ && values_->contains(key); }

  std::string text(const std::string& key, std::string fallback) {
    used_.insert(key);
    if (!has(key)) return fallback;
    return values_->at(key);
  }

  double real(const std::string& key, double fallback) {
    const auto s = text(key, "");
    if (!has(key)) return fallback;
    double v = 0.0;
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || ptr != end) throw ConfigError(where(key) + ": '" + s + "' is not a number");
    return v;
  }

  long long integer(const std::string& key, long long fallback) {
    const auto s = text(key, "");
    if (!has(key)) return fallback;
    long long v = 0;
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || ptr != end) throw ConfigError(where(key) + ": '" + s + "' is not an integer");
    return v;
  }

  std::uint64_t unsigned64(const std::string& key, std::uint64_t fallback) {
    const auto s = text(key, "");
    if (!has(key)) return fallback;
    std::uint64_t v = 0;
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || ptr != end) throw ConfigError(where(key) + ": '" + s + "' is not an unsigned integer");
    return v;
  }

  bool boolean(const std::string& key, bool fallback) {
    const auto s = text(key, "");
    if (!has(key)) return fallback;
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    throw ConfigError(where(key) + ": '" + s + "' is not a boolean");
  }

  std::string where(const std::string& key) const { return "[" + name_ + "] " + key; }

  void finish() const {
    if (!values_) return;
    for (const auto& [key, value] : *values_)
      if (!used_.contains(key)) throw ConfigError("unknown key '" + key + "' in section [" + name_ + "]");
  }

 private:
  std::string name_;
  const std::map<std::string, std::string>* values_;
  std::set<std::string> used_;
};

Section section(const IniTable& ini, const std::string& name) {
  const auto it = ini.find(name);
  return Section(name, it == ini.end() ? nullptr : &it->second);
}

// Library parsers throw InvalidParameter; in a config they are config errors.
template <typename F>
auto as_config(Section& s, const std::string& key, F&& parse) {
  try {
    return parse();
  } catch (const InvalidParameter& e) {
    throw ConfigError(s.where(key) + ": " + e.what());
  }
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  if (p.empty()) return {};
  std::filesystem::path path(p);
  return path.is_absolute() ? path : (base / path).lexically_normal();
}

std::vector<ScheduleEntry> parse_schedule(std::string_view text) {
  std::vector<ScheduleEntry> out;
  if (trim(text).empty()) return out;
  for (auto item : split(text, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string_view::npos) throw ConfigError("schedule entry '" + std::string(item) + "' lacks ':'");
    const auto range = parse_scale_list(trim(item.substr(0, colon)));
    const auto name = std::string(trim(item.substr(colon + 1)));
    if (range.empty() || name.empty())
      throw ConfigError("schedule entry '" + std::string(item) + "' is incomplete");
    out.push_back({range.front(), range.back(), name});
  }
  return out;
}

}  // namespace

IniTable parse_ini(std::string_view text) {
  IniTable ini;
  std::string current;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    auto line = trim(text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos));
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("line " + std::to_string(line_no) + ": unterminated section header");
      current = std::string(trim(line.substr(1, line.size() - 2)));
      if (current.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty section name");
      ini[current];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    if (current.empty()) throw ConfigError("line " + std::to_string(line_no) + ": key outside any section");
    auto key = std::string(trim(line.substr(0, eq)));
    auto value = trim(line.substr(eq + 1));
    if (const auto hash = value.find(" #"); hash != std::string_view::npos) value = trim(value.substr(0, hash));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    auto& sec = ini[current];
    if (sec.contains(key))
      throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "' in [" + current + "]");
    sec.emplace(std::move(key), std::string(value));
  }
  return ini;
}

std::vector<int> parse_scale_list(std::string_view text) {
  std::vector<int> out;
  if (trim(text).empty()) return out;
  auto to_int = [&](std::string_view s) {
    int v = 0;
    s = trim(s);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
      throw ConfigError("bad scale '" + std::string(s) + "' in list '" + std::string(text) + "'");
    return v;
  };
  for (auto item : split(text, ',')) {
    const auto dash = item.find('-', 1);
    if (dash == std::string_view::npos) {
      out.push_back(to_int(item));
    } else {
      const int lo = to_int(item.substr(0, dash));
      const int hi = to_int(item.substr(dash + 1));
      if (hi < lo) throw ConfigError("empty scale range '" + std::string(item) + "'");
      for (int j = lo; j <= hi; ++j) out.push_back(j);
    }
  }
  return out;
}

Config parse_config(std::string_view text, const std::filesystem::path& base_dir) {
  const auto ini = parse_ini(text);
  static const std::set<std::string> known = {"window", "model", "scenario", "estimator", "mc", "io"};
  for (const auto& [name, values] : ini)
    if (!known.contains(name) && name.rfind("mask.", 0) != 0 && name.rfind("noise.", 0) != 0)
      throw ConfigError("unknown section [" + name + "]");

  auto win = section(ini, "window");
  const double B = win.real("B", 2.0);
  const int M = static_cast<int>(win.integer("M", 5));
  const auto mode = as_config(win, "mode", [&] { return parse_window_mode(win.text("mode", "tight")); });
  const int j_min = static_cast<int>(win.integer("j_min", 0));
  const int j_max = static_cast<int>(win.integer("j_max", 8));
  win.finish();
  if (j_max < j_min) throw ConfigError("[window] j_max must be >= j_min");
  auto cutoff = as_config(win, "B", [&] { return CutoffFunction::build(B, M); });

  Config cfg{base_dir, Experiment(WindowFamily(std::move(cutoff), mode, j_min, j_max)), {}, {}, false, 181};
  auto& exp = cfg.experiment;

  auto model = section(ini, "model");
  exp.spectrum.band_ratio = B;
  exp.spectrum.alpha = model.real("alpha", 3.0);
  exp.spectrum.shape = as_config(model, "g", [&] { return parse_spectrum_shape(model.text("g", "constant")); });
  exp.spectrum.g0 = model.real("g0", 1.0);
  exp.spectrum.modulation = model.real("modulation", 0.0);
  model.finish();
  as_config(model, "alpha", [&] { exp.spectrum.validate(); return 0; });

  auto scen = section(ini, "scenario");
  exp.scenario.schedule = parse_schedule(scen.text("schedule", ""));
  exp.scenario.beam = as_config(scen, "beam", [&] { return parse_beam_shape(scen.text("beam", "sharp")); });
  exp.scenario.beam_factor = scen.real("beam_factor", 1.0);
  scen.finish();

  for (const auto& [name, values] : ini) {
    if (name.rfind("mask.", 0) == 0) {
      auto s = section(ini, name);
      MaskSpec spec;
      spec.kind = as_config(s, "type", [&] { return parse_mask_kind(s.text("type", "full-sky")); });
      spec.theta_cut = s.real("theta_cut", 0.0);
      spec.center_theta = s.real("center_theta", 0.0);
      spec.center_phi = s.real("center_phi", 0.0);
      spec.radius = s.real("radius", 0.0);
      spec.path = resolve(base_dir, s.text("path", "")).string();
      s.finish();
      if (spec.kind == MaskSpec::Kind::file && spec.path.empty()) throw ConfigError("[" + name + "] needs a path");
      exp.scenario.masks.emplace(name.substr(5), spec);
    } else if (name.rfind("noise.", 0) == 0) {
      auto s = section(ini, name);
      NoiseSpec spec;
      spec.kind = as_config(s, "type", [&] { return parse_noise_kind(s.text("type", "constant")); });
      spec.sigma0 = s.real("sigma0", 0.0);
      spec.sigma1 = s.real("sigma1", 0.0);
      spec.path = resolve(base_dir, s.text("path", "")).string();
      s.finish();
      if (spec.kind == NoiseSpec::Kind::file && spec.path.empty()) throw ConfigError("[" + name + "] needs a path");
      if (spec.sigma0 < 0.0 || spec.sigma1 < 0.0) throw ConfigError("[" + name + "] noise levels must be >= 0");
      exp.scenario.noises.emplace(name.substr(6), spec);
    }
  }
  if (exp.scenario.schedule.empty() && exp.scenario.masks.empty() && exp.scenario.noises.empty()) {
    // no scenario at all: noiseless full sky everywhere
    exp.scenario.schedule.push_back({j_min, j_max, "default"});
    exp.scenario.noises.emplace("default", NoiseSpec{});
  }
  exp.scenario.validate();

  auto est = section(ini, "estimator");
  auto& e = exp.estimator;
  e.alpha = exp.spectrum.alpha;
  e.threshold.kind =
      as_config(est, "threshold", [&] { return parse_threshold_kind(est.text("threshold", "schedule")); });
  e.threshold.tau0 = est.real("tau0", 0.1);
  e.threshold.epsilon = est.real("epsilon", 0.5);
  e.threshold.value = est.real("t", 0.0);
  e.threshold.quantile = est.real("quantile", 0.5);
  e.weights = as_config(est, "weights", [&] { return parse_weight_mode(est.text("weights", "uniform")); });
  e.pilot = as_config(est, "pilot", [&] { return parse_pilot_rule(est.text("pilot", "two-pass")); });
  e.pilot_value = est.real("pilot_value", 0.0);
  e.functional =
      as_config(est, "functional", [&] { return parse_functional_norm(est.text("functional", "nominal")); });
  est.finish();
  as_config(est, "threshold", [&] { e.validate(); return 0; });

  auto mc = section(ini, "mc");
  exp.scales = parse_scale_list(mc.text("scales", ""));
  exp.replicates = static_cast<int>(mc.integer("replicates", 500));
  exp.seed = mc.unsigned64("seed", 0);
  mc.finish();
  for (int j : exp.scales)
    if (!exp.windows.contains(j))
      throw ConfigError("[mc] scale " + std::to_string(j) + " outside [window] j_min..j_max");
  if (exp.replicates < 2) throw ConfigError("[mc] replicates must be >= 2");

  auto io = section(ini, "io");
  cfg.out_dir = resolve(base_dir, io.text("out", "."));
  cfg.maps_dir = resolve(base_dir, io.text("maps", ""));
  cfg.dump_coefficients = io.boolean("dump_coefficients", false);
  cfg.profile_points = static_cast<int>(io.integer("profile_points", 181));
  io.finish();
  if (cfg.profile_points < 2) throw ConfigError("[io] profile_points must be >= 2");
  return cfg;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config file '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  auto base = std::filesystem::absolute(path).parent_path();
  return parse_config(ss.str(), base);
}

}  // namespace nse
