#include "satrise/commands.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include "satrise/config.hpp"
#include "satrise/csv_io.hpp"

namespace satrise {

namespace {

RunConfig resolve_config(const CommandOptions& opts) {
  RunConfig cfg = opts.config ? load_run_config(*opts.config) : RunConfig{};
  Scenario& sc = cfg.scenario;
  if (opts.out_dir) cfg.out_dir = *opts.out_dir;
  if (opts.controller) {
    const auto kind = parse_controller_kind(*opts.controller);
    if (!kind) throw ConfigError("controller: unknown controller '" + *opts.controller + "'");
    sc.controller = *kind;
  }
  if (opts.dt) {
    if (!(*opts.dt > 0.0) || !std::isfinite(*opts.dt)) throw ConfigError("dt: must be positive");
    sc.dt = *opts.dt;
  }
  if (opts.duration) sc.duration = *opts.duration;
  if (opts.sgn) sc.sgn = parse_sgn_mode(*opts.sgn);
  if (!(sc.duration >= sc.dt)) throw ConfigError("duration: must be at least dt");
  try {
    sc.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("scenario: ") + e.what());
  }
  return cfg;
}

// Longest period among the reference and disturbance sinusoids.
double signal_period(const Scenario& sc) {
  double w_min = 0.0;
  for (const SinusoidSignal* s : {&sc.trajectory.signal, &sc.disturbance.signal}) {
    for (int i = 0; i < 6; ++i) {
      const double w = std::abs(s->frequency(i));
      if (w > 0.0 && s->amplitude(i) != 0.0 && (w_min == 0.0 || w < w_min)) w_min = w;
    }
  }
  return w_min > 0.0 ? 2.0 * std::numbers::pi / w_min : 1.0;
}

std::string vec_text(const Vec6& v) {
  std::ostringstream os;
  os.precision(6);
  os << "[";
  for (int i = 0; i < 6; ++i) os << (i ? ", " : "") << v(i);
  os << "]";
  return os.str();
}

std::string gains_report_text(const Scenario& sc, const ControllerGains& effective) {
  const WrenchMap wrench = build_allocation_matrix(sc.params);
  const InputShift shift = input_shift(sc.params);
  const MassBounds mb = sample_mass_bounds(sc.params, sc.params.rho);
  const ValidationReport rep = validate_gains(effective, mb.lower, mb.upper);

  std::ostringstream os;
  os.precision(6);
  os << "controller: " << to_string(sc.controller) << "\n";
  os << "Gamma1 (effective): " << vec_text(effective.gamma1) << "\n";
  os << "conservative virtual-input bound v_bar_c: " << conservative_bound(wrench, shift) << "\n";
  os << rep.to_text();

  const double period = signal_period(sc);
  const NdSweep sweep = sweep_Nd(sc.trajectory, sc.disturbance, sc.params, wrench, 0.0, period, 2000);
  os << "empirical N_d sweep over " << period << " s:\n";
  os << "  sup|N_d|    = " << vec_text(sweep.zeta_nd1) << "\n";
  os << "  sup|dN_d/dt| = " << vec_text(sweep.zeta_nd2) << "\n";
  os << "  theta_i - (sup|N_d,i| + sup|dN_d,i/dt| / lambda3_i) =";
  for (int i = 0; i < 6; ++i) {
    os << " " << effective.theta(i) - (sweep.zeta_nd1(i) + sweep.zeta_nd2(i) / effective.lambda3(i));
  }
  os << "\n";
  return os.str();
}

std::string ranking_line(const std::array<std::pair<ControllerKind, TrackingMetrics>, 3>& rows) {
  auto sorted = rows;
  std::stable_sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    if (a.second.diverged != b.second.diverged) return !a.second.diverged;
    if (a.second.diverged) return false;
    return a.second.rmse_pos_steady < b.second.rmse_pos_steady;
  });
  std::string line = "ranking (steady-state position RMSE):";
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    line += i ? " < " : " ";
    line += std::string(to_string(sorted[i].first));
    if (sorted[i].second.diverged) line += "(diverged)";
  }
  return line;
}

}  // namespace

int cmd_run(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  try {
    cfg = resolve_config(opts);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfigError;
  }
  const Scenario& sc = cfg.scenario;
  const SimResult res = run(sc);
  if (!res.gains_report.checkable_conditions_pass()) {
    err << "warning: gains violate the sufficient stability conditions (see gains_report.txt)\n";
  }

  std::filesystem::create_directories(cfg.out_dir);
  write_log_csv(cfg.out_dir / "log.csv", res.log);
  write_metrics_csv(cfg.out_dir / "metrics.csv", res.metrics);
  {
    std::ofstream os(cfg.out_dir / "gains_report.txt");
    os << gains_report_text(sc, res.effective_gains);
    if (res.diverged) os << "run halted: " << res.halt_reason << "\n";
  }

  out << to_string(sc.controller) << ": " << res.log.size() << " samples, t_end = " << res.log.back().t
      << " s, steady-state position RMSE = " << res.metrics.rmse_pos_steady
      << " m, bound violation = " << res.metrics.max_bound_violation << " N"
      << (res.diverged ? ", DIVERGED (" + res.halt_reason + ")" : std::string()) << "\n";
  return res.metrics.diverged ? kExitDiverged : kExitOk;
}

int cmd_compare(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  try {
    cfg = resolve_config(opts);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfigError;
  }
  constexpr std::array kinds = {ControllerKind::kProposed, ControllerKind::kProposedNoSgn,
                                ControllerKind::kBaseline};
  std::array<std::future<SimResult>, 3> jobs;
  for (std::size_t i = 0; i < kinds.size(); ++i) {
    Scenario sc = cfg.scenario;
    sc.controller = kinds[i];
    jobs[i] = std::async(std::launch::async, [sc] { return run(sc); });
  }
  std::array<std::pair<ControllerKind, TrackingMetrics>, 3> rows;
  std::array<double, 3> t_end{};
  for (std::size_t i = 0; i < kinds.size(); ++i) {
    const SimResult res = jobs[i].get();
    rows[i] = {kinds[i], res.metrics};
    t_end[i] = res.log.back().t;
  }

  std::filesystem::create_directories(cfg.out_dir);
  std::ofstream os(cfg.out_dir / "comparison.csv");
  os << "controller," << metrics_csv_header() << ",t_end\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    os << to_string(rows[i].first) << ',' << metrics_csv_row(rows[i].second) << ',' << format_double(t_end[i])
       << '\n';
  }
  for (const auto& [kind, m] : rows) {
    out << to_string(kind) << ": steady-state position RMSE = " << m.rmse_pos_steady
        << " m, diverged = " << (m.diverged ? "yes" : "no") << "\n";
  }
  out << ranking_line(rows) << "\n";
  return kExitOk;
}

int cmd_validate_gains(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  try {
    cfg = resolve_config(opts);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfigError;
  }
  const Scenario& sc = cfg.scenario;
  const ControllerGains effective = effective_gains(sc.controller, sc.gains, build_allocation_matrix(sc.params),
                                                    input_shift(sc.params));
  const MassBounds mb = sample_mass_bounds(sc.params, sc.params.rho);
  const ValidationReport rep = validate_gains(effective, mb.lower, mb.upper);
  out << gains_report_text(sc, effective);
  return rep.checkable_conditions_pass() ? kExitOk : kExitGainsFail;
}

}  // namespace satrise
