// CLI verbs as library functions; tools/satrise_cli.cpp only parses argv.
#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace satrise {

/// Exit codes shared by every verb.
enum ExitCode : int {
  kExitOk = 0,
  kExitConfigError = 1,
  kExitDiverged = 2,
  kExitGainsFail = 3,
};

struct CommandOptions {
  std::optional<std::filesystem::path> config;
  std::optional<std::filesystem::path> out_dir;
  std::optional<std::string> controller;
  std::optional<double> dt;
  std::optional<double> duration;
  std::optional<std::string> sgn;
};

/// Writes log.csv, metrics.csv and gains_report.txt.
int cmd_run(const CommandOptions& opts, std::ostream& out, std::ostream& err);

/// Runs all three controllers on one scenario and writes comparison.csv.
int cmd_compare(const CommandOptions& opts, std::ostream& out, std::ostream& err);

int cmd_validate_gains(const CommandOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace satrise
