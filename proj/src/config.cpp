#include "scramble/experiment.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

namespace scramble::experiment {

namespace {

const std::vector<std::string>& known_columns() {
  static const std::vector<std::string> names = {
      "re_F", "im_F", "C", "mean_w", "second_moment_w", "variance_w", "rel_entropy", "dissipation_gap",
      "jarzynski", "pinsker_slack", "linear_response_gap", "re_G", "im_G", "std_error", "tvd"};
  return names;
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw ConfigError("config." + field + ": " + what);
}

double parse_double(const std::string& field, const std::string& text) {
  double value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) fail(field, "expected a number, got '" + text + "'");
  return value;
}

/// A number, or an expression of the form [a*]pi[/b].
double parse_angle(const std::string& field, const std::string& text) {
  const auto pos = text.find("pi");
  if (pos == std::string::npos) return parse_double(field, text);
  double factor = 1;
  std::string before = trim(std::string_view(text).substr(0, pos));
  std::string after = trim(std::string_view(text).substr(pos + 2));
  if (!before.empty()) {
    if (before.back() != '*') fail(field, "malformed angle '" + text + "'");
    before.pop_back();
    factor *= parse_double(field, trim(before));
  }
  if (!after.empty()) {
    if (after.front() != '/') fail(field, "malformed angle '" + text + "'");
    factor /= parse_double(field, trim(std::string_view(after).substr(1)));
  }
  return factor * std::numbers::pi;
}

std::int64_t parse_int(const std::string& field, const std::string& text) {
  std::int64_t value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) fail(field, "expected an integer, got '" + text + "'");
  return value;
}

int parse_small_int(const std::string& field, const std::string& text) {
  const auto v = parse_int(field, text);
  if (v < -1000000 || v > 1000000) fail(field, "value out of range");
  return int(v);
}

Model parse_model(const std::string& text) {
  if (text == "integrable") return Model::integrable;
  if (text == "ergodic") return Model::ergodic;
  if (text == "custom") return Model::custom;
  fail("model", "expected integrable, ergodic or custom, got '" + text + "'");
}

FlapConvention parse_convention(const std::string& text) {
  if (text == "forward_tau") return FlapConvention::forward_tau;
  if (text == "midpoint_tau_half") return FlapConvention::midpoint_tau_half;
  fail("flap_time_convention", "expected forward_tau or midpoint_tau_half, got '" + text + "'");
}

}  // namespace

std::vector<double> TauGrid::values() const {
  std::vector<double> out(std::size_t(std::max(points, 0)));
  for (int i = 0; i < points; ++i)
    out[std::size_t(i)] = points == 1 ? start : start + (stop - start) * double(i) / double(points - 1);
  if (points > 1) out.back() = stop;
  return out;
}

std::string to_string(Model m) {
  switch (m) {
    case Model::integrable: return "integrable";
    case Model::ergodic: return "ergodic";
    case Model::custom: return "custom";
  }
  return "?";
}

std::string to_string(FlapConvention c) {
  return c == FlapConvention::forward_tau ? "forward_tau" : "midpoint_tau_half";
}

void ExperimentConfig::validate() const {
  if (chain.length < 1) fail("L", "must be >= 1");
  if (chain.length > kMaxSites) fail("L", "exceeds the dense-method cap of " + std::to_string(kMaxSites));
  if (model != Model::custom && chain.length < 2) fail("L", "Ising models need at least 2 sites");
  if (chain.site < 1 || chain.site > chain.length) fail("site", "must lie in [1, L]");
  for (const auto& [field, v] : {std::pair{"g", chain.g}, {"J", chain.J}, {"h", chain.h}, {"theta", chain.theta},
                                 {"beta", beta}, {"u", u}, {"tau_grid.start", tau_grid.start},
                                 {"tau_grid.stop", tau_grid.stop}})
    if (!std::isfinite(v)) fail(field, "must be finite");
  if (beta < 0) fail("beta", "must be >= 0");
  if (tau_grid.points < 2) fail("tau_grid.points", "must be >= 2");
  if (!(tau_grid.stop > tau_grid.start)) fail("tau_grid", "must be strictly increasing (stop > start)");
  if (shots && *shots < 1) fail("shots", "must be >= 1");
  for (const auto& name : outputs)
    if (std::find(known_columns().begin(), known_columns().end(), name) == known_columns().end())
      fail("outputs", "unknown quantity '" + name + "'");
}

std::vector<std::string> preset_names() { return {"fig2-integrable", "fig2-ergodic"}; }

ExperimentConfig preset(const std::string& name) {
  ExperimentConfig c;
  c.name = name;
  c.chain = ChainSpec{9, 0.90450849, 1.0, 0.8090169, 5, std::numbers::pi / 2};
  c.beta = 0.1;
  c.u = 1.0;
  c.tau_grid = TauGrid{0.0, 12.0, 120};
  c.flap_time_convention = FlapConvention::midpoint_tau_half;
  if (name == "fig2-integrable") {
    c.model = Model::integrable;
  } else if (name == "fig2-ergodic") {
    c.model = Model::ergodic;
  } else {
    throw ConfigError("config.preset: unknown preset '" + name + "'");
  }
  return c;
}

ExperimentConfig parse_config(const std::string& text) {
  std::map<std::string, std::string> entries;
  std::istringstream is(text);
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: line " + std::to_string(line_no) + ": expected 'key = value'");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key.empty()) throw ConfigError("config: line " + std::to_string(line_no) + ": empty key");
    if (!entries.emplace(key, value).second) fail(key, "duplicate key");
  }

  ExperimentConfig c;
  const bool has_preset = entries.count("preset") != 0;
  if (has_preset) {
    c = preset(entries["preset"]);
    entries.erase("preset");
  } else {
    c = preset("fig2-integrable");
    c.name = "custom";
    if (!entries.count("tau_grid")) fail("tau_grid", "missing (required unless a preset is given)");
  }

  for (const auto& [key, value] : entries) {
    if (key == "name") c.name = value;
    else if (key == "L") c.chain.length = parse_small_int(key, value);
    else if (key == "g") c.chain.g = parse_double(key, value);
    else if (key == "J") c.chain.J = parse_double(key, value);
    else if (key == "h") c.chain.h = parse_double(key, value);
    else if (key == "site" || key == "k") c.chain.site = parse_small_int(key, value);
    else if (key == "theta") c.chain.theta = parse_angle(key, value);
    else if (key == "model") c.model = parse_model(value);
    else if (key == "beta") c.beta = parse_double(key, value);
    else if (key == "u") c.u = parse_double(key, value);
    else if (key == "flap_time_convention") c.flap_time_convention = parse_convention(value);
    else if (key == "shots") c.shots = parse_int(key, value);
    else if (key == "seed") {
      try {
        c.seed = parse_seed(value);
      } catch (const ConfigError& e) {
        fail("seed", e.what());
      }
    } else if (key == "outputs") c.outputs = split_list(value);
    else if (key == "tau_grid") {
      const auto parts = split_list(value);
      if (parts.size() != 3) fail("tau_grid", "expected 'start, stop, points'");
      c.tau_grid.start = parse_double("tau_grid.start", parts[0]);
      c.tau_grid.stop = parse_double("tau_grid.stop", parts[1]);
      c.tau_grid.points = parse_small_int("tau_grid.points", parts[2]);
    } else {
      fail(key, "unknown key");
    }
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& preset_or_path) {
  const auto names = preset_names();
  if (std::find(names.begin(), names.end(), preset_or_path) != names.end()) return preset(preset_or_path);
  std::ifstream in(preset_or_path);
  if (!in) throw IoError("cannot open config '" + preset_or_path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::uint64_t parse_seed(const std::string& text) {
  std::string s = trim(text);
  int base = 10;
  if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) {
    base = 16;
    s = s.substr(2);
  }
  std::uint64_t value = 0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, value, base);
  if (s.empty() || ec != std::errc() || ptr != end)
    throw ConfigError("invalid seed '" + text + "' (expected decimal or 0x-prefixed hex)");
  return value;
}

}  // namespace scramble::experiment
