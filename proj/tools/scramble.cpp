// Command-line runner for wing-flap tau sweeps.
//
//   scramble run <config-or-preset> [--format csv|json] [--out PATH] [--shots N] [--seed S] [--check]
//   scramble list-presets
//   scramble verify <config-or-preset>
//
// Exit codes: 0 success, 1 validation, 2 numerical identity failure, 3 I/O.

#include "scramble/experiment.hpp"
#include "scramble/types.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <map>

namespace ex = scramble::experiment;

namespace {

constexpr int kValidation = 1;
constexpr int kIdentity = 2;
constexpr int kIo = 3;

void report(const std::vector<ex::IdentityViolationReport>& violations) {
  for (const auto& v : violations)
    std::cerr << "identity violated: " << v.identity << " at row " << v.row << " (tau = " << v.tau
              << "), value " << v.value << '\n';
}

void summarize(const ex::SweepResult& result) {
  std::map<std::string, double> worst{{"otoc_characteristic_function", 0},
                                      {"second_moment_square_commutator", 0},
                                      {"mean_work_relative_entropy", 0},
                                      {"jarzynski", 0},
                                      {"pinsker_min_slack", INFINITY}};
  for (const auto& r : result.rows) {
    worst["otoc_characteristic_function"] = std::max(worst["otoc_characteristic_function"], r.otoc_gap);
    worst["second_moment_square_commutator"] =
        std::max(worst["second_moment_square_commutator"], std::abs(r.second_moment_w - r.square_commutator));
    worst["mean_work_relative_entropy"] = std::max(worst["mean_work_relative_entropy"], r.dissipation_gap);
    worst["jarzynski"] = std::max(worst["jarzynski"], std::abs(r.jarzynski - 1));
    worst["pinsker_min_slack"] = std::min(worst["pinsker_min_slack"], r.pinsker_slack);
  }
  std::cout << result.config.name << ": " << result.rows.size() << " grid points\n";
  for (const auto& [name, value] : worst) std::cout << "  " << name << " = " << value << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wing-flap OTOC and work-statistics sweeps on spin-1/2 chains"};
  app.require_subcommand(1);

  std::string source, format = "csv", out = "-", seed_text;
  std::int64_t shots = 0;
  bool check = false;

  auto* run = app.add_subcommand("run", "Run a tau sweep and emit a dataset");
  run->add_option("config", source, "Preset name or config file")->required();
  run->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  run->add_option("--out", out, "Output path ('-' for stdout)");
  run->add_option("--shots", shots, "Shots per grid point for the sampled protocol");
  run->add_option("--seed", seed_text, "Sampler seed (decimal or 0x hex)");
  run->add_flag("--check", check, "Exit with code 2 if any identity gap exceeds tolerance");

  auto* list = app.add_subcommand("list-presets", "List built-in presets");

  auto* verify = app.add_subcommand("verify", "Run only the identity checks");
  verify->add_option("config", source, "Preset name or config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kValidation;
  }

  try {
    if (list->parsed()) {
      for (const auto& name : ex::preset_names()) std::cout << name << '\n';
      return 0;
    }

    ex::ExperimentConfig config = ex::load_config(source);
    if (run->parsed()) {
      if (run->count("--shots")) config.shots = shots;
      if (run->count("--seed")) config.seed = ex::parse_seed(seed_text);
      if (config.shots && !config.seed) config.seed = 0;
    } else {
      config.shots.reset();
    }
    config.validate();

    const auto result = ex::run_sweep(config);
    const auto violations = ex::check_identities(result);

    if (verify->parsed()) {
      summarize(result);
      report(violations);
      std::cout << (violations.empty() ? "all identities hold\n" : "identity check FAILED\n");
      return violations.empty() ? 0 : kIdentity;
    }

    ex::emit(result, format, out);
    if (check && !violations.empty()) {
      report(violations);
      return kIdentity;
    }
    return 0;
  } catch (const ex::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const scramble::PreconditionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const ex::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIdentity;
  }
}
