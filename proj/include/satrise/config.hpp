// JSON run configuration: one document fully determines a simulation.
#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "satrise/sim.hpp"

namespace satrise {

/// Configuration problem; the message starts with the offending key path.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  Scenario scenario = Scenario::defaults();
  std::filesystem::path out_dir = "out";
};

/// Parses "hard" or "smooth:EPS".
SgnMode parse_sgn_mode(const std::string& text);
std::string to_string(const SgnMode& mode);

/// Missing keys keep their defaults; unknown keys are rejected.
RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::filesystem::path& path);

/// Serializes every key, so the output reloads to the same scenario.
std::string dump_run_config(const RunConfig& cfg);

}  // namespace satrise
