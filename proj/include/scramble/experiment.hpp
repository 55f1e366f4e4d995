#pragma once

// Configuration-driven tau sweeps of the wing-flap experiment on a spin chain.

#include "scramble/spin_algebra.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace scramble::experiment {

inline constexpr const char* kVersion = "0.1.0";

/// Validation failure; the message starts with the offending field path.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Model {
  integrable,  // H0 + J sum z_i z_{i+1}
  ergodic,     // H0 + Ising coupling + longitudinal fields with boundary correction
  custom,      // H0 + J sum z_i z_{i+1} + h sum_{i=1..L} z_i (uniform field, no boundary term)
};

enum class FlapConvention {
  forward_tau,        // forward evolution lasts tau
  midpoint_tau_half,  // flap at tau/2, backward until tau
};

struct TauGrid {
  double start = 0.0;
  double stop = 12.0;
  int points = 120;

  std::vector<double> values() const;
};

struct ExperimentConfig {
  std::string name = "custom";
  ChainSpec chain;
  Model model = Model::integrable;
  double beta = 0.1;
  double u = 1.0;
  TauGrid tau_grid;
  FlapConvention flap_time_convention = FlapConvention::midpoint_tau_half;
  std::optional<std::int64_t> shots;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> outputs;  // empty: every column

  void validate() const;
};

std::string to_string(Model m);
std::string to_string(FlapConvention c);

/// Names accepted by preset().
std::vector<std::string> preset_names();
ExperimentConfig preset(const std::string& name);

/// Parses "key = value" lines ('#' starts a comment). A `preset` key selects
/// the base configuration; without it the Fig. 2 chain values are used as
/// defaults and `tau_grid` is required.
ExperimentConfig parse_config(const std::string& text);

/// A preset name, or a path to a config file.
ExperimentConfig load_config(const std::string& preset_or_path);

/// Decimal or 0x-prefixed hexadecimal 64-bit seed.
std::uint64_t parse_seed(const std::string& text);

struct EmpiricalColumns {
  double re_G;
  double im_G;
  double std_error;
  double tvd;
};

struct SweepRow {
  double tau;
  double re_F;
  double im_F;
  double C;
  double mean_w;
  double second_moment_w;
  double variance_w;
  double rel_entropy;
  double dissipation_gap;
  double jarzynski;
  double pinsker_slack;
  double linear_response_gap;
  std::optional<EmpiricalColumns> empirical;

  // Identity diagnostics, not emitted as columns.
  double otoc_gap;            // |F - G| with G from the exact distribution
  double square_commutator;   // <[W_tau, H0]^dagger [W_tau, H0]>
  double commutator_gap;      // |C - 2 (1 - Re F)|
};

struct SweepResult {
  ExperimentConfig config;
  std::vector<SweepRow> rows;
};

/// Identity tolerances enforced by --check and `verify`.
struct IdentityTolerances {
  double otoc = 1e-9;
  double second_moment = 1e-9;
  double dissipation = 1e-9;
  double jarzynski = 1e-9;
  double pinsker = 1e-10;
};

struct IdentityViolationReport {
  std::size_t row;
  double tau;
  std::string identity;
  double value;
};

SweepResult run_sweep(const ExperimentConfig& config);

std::vector<IdentityViolationReport> check_identities(const SweepResult& result,
                                                      const IdentityTolerances& tol = {});

/// Column names in emission order, filtered by config.outputs.
std::vector<std::string> columns(const SweepResult& result);

void emit_csv(const SweepResult& result, std::ostream& os);
void emit_json(const SweepResult& result, std::ostream& os);

/// format is "csv" or "json"; path "-" writes to stdout.
void emit(const SweepResult& result, const std::string& format, const std::string& path);

}  // namespace scramble::experiment
