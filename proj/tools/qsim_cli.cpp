#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qsim/qcore.hpp"
#include "qsim/scenarios.hpp"

namespace {

constexpr int kExitConfigError = 2;
constexpr int kExitNumericalGuard = 3;

int do_run(const std::string& config_path, std::optional<std::uint64_t> seed,
           std::optional<std::string> output, std::optional<int> threads,
           std::optional<std::string> format) {
  qsim::scenarios::ScenarioConfig cfg;
  try {
    cfg = qsim::scenarios::parse_config_file(config_path);
    if (seed) cfg.seed = *seed;
    if (output) cfg.output_dir = *output;
    if (const char* env = std::getenv("QSIM_OUTPUT_DIR"); env && !output)
      cfg.output_dir = env;
    if (threads) cfg.threads = *threads;
    if (format) {
      if (*format == "csv")
        cfg.format = qsim::scenarios::Format::csv;
      else if (*format == "json")
        cfg.format = qsim::scenarios::Format::json;
      else if (*format == "both")
        cfg.format = qsim::scenarios::Format::both;
      else
        throw qsim::scenarios::ConfigError("--format must be csv, json or both");
    }
  } catch (const qsim::scenarios::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  }
  try {
    auto result = qsim::scenarios::run_scenario(cfg);
    for (const auto& file : result.artifacts) std::cout << file << "\n";
    return 0;
  } catch (const qsim::scenarios::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const qsim::StepTooLarge& e) {
    std::cerr << "numerical guard (step too large): " << e.what() << "\n";
    return kExitNumericalGuard;
  } catch (const qsim::ImpossibleOutcome& e) {
    std::cerr << "numerical guard (impossible outcome): " << e.what() << "\n";
    return kExitNumericalGuard;
  } catch (const std::exception& e) {
    std::cerr << "numerical guard: " << e.what() << "\n";
    return kExitNumericalGuard;
  }
}

int do_validate(const std::string& config_path) {
  try {
    auto cfg = qsim::scenarios::parse_config_file(config_path);
    std::cout << cfg.to_json().dump(2) << "\n";
    return 0;
  } catch (const qsim::scenarios::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic quantum measurement and trajectory simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> output;
  std::optional<int> threads;
  std::optional<std::string> format;

  auto* run = app.add_subcommand("run", "Run a scenario from a config file");
  run->add_option("config", config_path, "Config file (JSON)")->required();
  run->add_option("--seed", seed, "Override the RNG seed");
  run->add_option("--output", output, "Override the output directory");
  run->add_option("--threads", threads, "Worker threads (0 = all cores)");
  run->add_option("--format", format, "Artifact format: csv, json or both");

  auto* validate =
      app.add_subcommand("validate", "Parse and echo a resolved config");
  std::string validate_path;
  validate->add_option("config", validate_path, "Config file (JSON)")
      ->required();

  auto* list = app.add_subcommand("list-scenarios", "List scenario names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitConfigError;
  }

  if (run->parsed()) return do_run(config_path, seed, output, threads, format);
  if (validate->parsed()) return do_validate(validate_path);
  if (list->parsed()) {
    for (const auto& name : qsim::scenarios::scenario_names())
      std::cout << name << "\n";
    return 0;
  }
  return kExitConfigError;
}
