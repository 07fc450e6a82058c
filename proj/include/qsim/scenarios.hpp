#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace qsim::scenarios {

inline constexpr const char* kCodeVersion = "qsim 0.1.0";

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Scenario {
  polarization,
  modal_pointer,
  decay_counting,
  decay_homodyne,
  hyperion_classical,
  hyperion_quantum,
  ehrenfest_sweep,
  ising,
  thermalization,
};

enum class Format { csv, json, both };

const std::vector<std::string>& scenario_names();
Scenario scenario_from_name(const std::string& name);  // ConfigError on miss
std::string to_string(Scenario s);
std::string to_string(Format f);

struct ScenarioConfig {
  Scenario scenario = Scenario::polarization;
  nlohmann::json params;  // scenario-specific, fully defaulted after parsing
  std::uint64_t seed = 0;
  std::string output_dir = ".";
  Format format = Format::both;
  int threads = 0;  // 0 = hardware concurrency

  nlohmann::json to_json() const;
};

// Parses a config document (or a manifest produced by run_scenario, whose
// embedded "config" object is then used). Unknown keys are rejected with the
// offending key named; scenario params are validated and defaulted strictly.
ScenarioConfig parse_config_file(const std::string& path);
ScenarioConfig parse_config_json(const nlohmann::json& doc);

struct RunResult {
  std::vector<std::string> artifacts;  // paths written, manifest last
};

// Executes the scenario, writes its artifact files and a manifest.json into
// output_dir. Artifacts are deterministic for a fixed (config, seed); the
// manifest additionally records wall time.
RunResult run_scenario(const ScenarioConfig& config);

}  // namespace qsim::scenarios
