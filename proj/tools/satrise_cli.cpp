#include <iostream>

#include "CLI11.hpp"
#include "satrise/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Saturated RISE hexarotor simulator"};
  app.require_subcommand(1);

  satrise::CommandOptions opts;
  std::string config, out_dir, controller, sgn;
  double dt = 0.0, duration = 0.0;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config, "JSON run configuration (defaults when omitted)");
    cmd->add_option("--out", out_dir, "output directory");
    cmd->add_option("--controller", controller, "proposed | proposed-no-sgn | baseline");
    cmd->add_option("--dt", dt, "integration step [s]");
    cmd->add_option("--duration", duration, "simulated time [s]");
    cmd->add_option("--sgn", sgn, "hard | smooth:EPS");
  };
  auto* run = app.add_subcommand("run", "simulate one controller and write log.csv, metrics.csv, gains_report.txt");
  auto* compare = app.add_subcommand("compare", "simulate all controllers and write comparison.csv");
  auto* validate = app.add_subcommand("validate-gains", "check the sufficient gain conditions");
  for (auto* cmd : {run, compare, validate}) add_common(cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : satrise::kExitConfigError;
  }

  auto* active = app.get_subcommands().front();
  if (!config.empty()) opts.config = config;
  if (!out_dir.empty()) opts.out_dir = out_dir;
  if (!controller.empty()) opts.controller = controller;
  if (active->count("--dt")) opts.dt = dt;
  if (active->count("--duration")) opts.duration = duration;
  if (!sgn.empty()) opts.sgn = sgn;

  if (active == run) return satrise::cmd_run(opts, std::cout, std::cerr);
  if (active == compare) return satrise::cmd_compare(opts, std::cout, std::cerr);
  return satrise::cmd_validate_gains(opts, std::cout, std::cerr);
}
