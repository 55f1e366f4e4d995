#include "scramble/experiment.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>

namespace scramble::experiment {

namespace {

using Getter = double (*)(const SweepRow&);

struct Column {
  const char* name;
  Getter get;
  bool empirical;
};

double nan() { return std::numeric_limits<double>::quiet_NaN(); }

const std::array<Column, 16>& all_columns() {
  static const std::array<Column, 16> cols = {{
      {"tau", [](const SweepRow& r) { return r.tau; }, false},
      {"re_F", [](const SweepRow& r) { return r.re_F; }, false},
      {"im_F", [](const SweepRow& r) { return r.im_F; }, false},
      {"C", [](const SweepRow& r) { return r.C; }, false},
      {"mean_w", [](const SweepRow& r) { return r.mean_w; }, false},
      {"second_moment_w", [](const SweepRow& r) { return r.second_moment_w; }, false},
      {"variance_w", [](const SweepRow& r) { return r.variance_w; }, false},
      {"rel_entropy", [](const SweepRow& r) { return r.rel_entropy; }, false},
      {"dissipation_gap", [](const SweepRow& r) { return r.dissipation_gap; }, false},
      {"jarzynski", [](const SweepRow& r) { return r.jarzynski; }, false},
      {"pinsker_slack", [](const SweepRow& r) { return r.pinsker_slack; }, false},
      {"linear_response_gap", [](const SweepRow& r) { return r.linear_response_gap; }, false},
      {"re_G", [](const SweepRow& r) { return r.empirical ? r.empirical->re_G : nan(); }, true},
      {"im_G", [](const SweepRow& r) { return r.empirical ? r.empirical->im_G : nan(); }, true},
      {"std_error", [](const SweepRow& r) { return r.empirical ? r.empirical->std_error : nan(); }, true},
      {"tvd", [](const SweepRow& r) { return r.empirical ? r.empirical->tvd : nan(); }, true},
  }};
  return cols;
}

std::vector<const Column*> selected(const SweepResult& result) {
  const auto& outputs = result.config.outputs;
  std::vector<const Column*> out;
  for (const auto& col : all_columns()) {
    const std::string name = col.name;
    if (col.empirical && !result.config.shots) continue;
    if (name != "tau" && !outputs.empty() && std::find(outputs.begin(), outputs.end(), name) == outputs.end())
      continue;
    out.push_back(&col);
  }
  return out;
}

std::string format12(double v) {
  if (std::isnan(v)) return "nan";
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 12);
  return std::string(buf.data(), res.ptr);
}

nlohmann::json config_json(const ExperimentConfig& c) {
  nlohmann::json j;
  j["name"] = c.name;
  j["L"] = c.chain.length;
  j["g"] = c.chain.g;
  j["J"] = c.chain.J;
  j["h"] = c.chain.h;
  j["site"] = c.chain.site;
  j["theta"] = c.chain.theta;
  j["model"] = to_string(c.model);
  j["beta"] = c.beta;
  j["u"] = c.u;
  j["tau_grid"] = {{"start", c.tau_grid.start}, {"stop", c.tau_grid.stop}, {"points", c.tau_grid.points}};
  j["flap_time_convention"] = to_string(c.flap_time_convention);
  j["shots"] = c.shots ? nlohmann::json(*c.shots) : nlohmann::json(nullptr);
  j["seed"] = c.seed ? nlohmann::json(*c.seed) : nlohmann::json(nullptr);
  j["outputs"] = c.outputs;
  return j;
}

}  // namespace

std::vector<std::string> columns(const SweepResult& result) {
  std::vector<std::string> names;
  for (const auto* col : selected(result)) names.emplace_back(col->name);
  return names;
}

void emit_csv(const SweepResult& result, std::ostream& os) {
  const auto cols = selected(result);
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i]->name;
  os << '\n';
  for (const auto& row : result.rows) {
    for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << format12(cols[i]->get(row));
    os << '\n';
  }
}

void emit_json(const SweepResult& result, std::ostream& os) {
  const auto cols = selected(result);
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : result.rows) {
    nlohmann::json obj = nlohmann::json::object();
    for (const auto* col : cols) obj[col->name] = col->get(row);
    rows.push_back(std::move(obj));
  }
  nlohmann::json doc;
  doc["metadata"] = {{"artifact", "scramble"},
                     {"version", kVersion},
                     {"config", config_json(result.config)},
                     {"columns", columns(result)},
                     {"notes", {{"mean_q", "released heat after re-thermalization; equals mean_w"}}}};
  doc["rows"] = std::move(rows);
  os << doc.dump(2) << '\n';
}

void emit(const SweepResult& result, const std::string& format, const std::string& path) {
  if (format != "csv" && format != "json") throw ConfigError("format: expected csv or json, got '" + format + "'");
  auto write = [&](std::ostream& os) { format == "csv" ? emit_csv(result, os) : emit_json(result, os); };
  if (path.empty() || path == "-") {
    write(std::cout);
    std::cout.flush();
    if (!std::cout) throw IoError("failed writing to stdout");
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  write(out);
  out.flush();
  if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace scramble::experiment
