// Command-line front end: equilibria, stability reports, simulations, delay sweeps
// and the acceptance checks.

#include <fmt/format.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "sirdelay/acceptance.hpp"
#include "sirdelay/analytics.hpp"
#include "sirdelay/config.hpp"
#include "sirdelay/integrator.hpp"
#include "sirdelay/report.hpp"
#include "sirdelay/svg.hpp"

namespace {

using namespace sirdelay;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitComputation = 1;
constexpr int kExitConfig = 2;

/// Raised for failures of the numerical pipeline (no equilibrium, integration error).
struct ComputationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string preset;
  std::string config_path;
  std::string tau;
  std::string delta;
  std::optional<double> horizon;
  std::optional<double> step;
  std::string out_dir;
  std::string format;
  bool plot = false;
  bool dump_config = false;
  int criterion = 0;
};

ScenarioConfig load_scenario(const Options& o) {
  if (!o.preset.empty()) return load_preset(o.preset);
  if (!o.config_path.empty()) return load_config_file(o.config_path);
  throw ConfigError("preset", "one of --preset or --config is required");
}

double single_delay(const std::string& text, const std::string& field) {
  const auto values = parse_range(text, field);
  if (values.size() != 1) throw ConfigError(field, "expected a single value for this subcommand");
  return values.front();
}

/// Applies --tau/--delta (single values), --horizon and --step to the scenario.
void apply_overrides(ScenarioConfig& cfg, const Options& o, bool sweeping) {
  if (!sweeping) {
    const Params& p = cfg.model.params();
    const double tau = o.tau.empty() ? p.tau : single_delay(o.tau, "tau");
    const double delta = o.delta.empty() ? p.delta : single_delay(o.delta, "delta");
    cfg.model = cfg.model.with_delays(tau, delta);
  }
  if (o.horizon) {
    if (!(*o.horizon > 0.0) || !std::isfinite(*o.horizon)) throw ConfigError("horizon", "must be positive");
    cfg.horizon = *o.horizon;
    if (cfg.sweep) cfg.sweep->horizon = *o.horizon;
  }
  if (o.step) {
    if (!(*o.step > 0.0) || !std::isfinite(*o.step)) throw ConfigError("step", "must be positive");
    cfg.step = *o.step;
  }
}

std::string format_of(const Options& o, const std::string& fallback) { return o.format.empty() ? fallback : o.format; }

/// Writes `text` to DIR/name when --out is given, otherwise to stdout.
void emit(const Options& o, const std::string& name, const std::string& text) {
  if (o.out_dir.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::error_code ec;
  std::filesystem::create_directories(o.out_dir, ec);
  if (ec) throw ConfigError("out", fmt::format("cannot create '{}': {}", o.out_dir, ec.message()));
  const auto path = std::filesystem::path(o.out_dir) / name;
  std::ofstream f(path);
  if (!f) throw ConfigError("out", fmt::format("cannot write '{}'", path.string()));
  f << text;
  std::cout << "wrote " << path.string() << '\n';
}

void require_out_for_plot(const Options& o) {
  if (o.plot && o.out_dir.empty()) throw ConfigError("out", "--plot needs --out DIR");
}

Equilibrium require_focus(const ScenarioConfig& cfg) {
  const auto eq = focus_equilibrium(cfg);
  if (!eq)
    throw ComputationError(fmt::format("no {} equilibrium for this parameter set",
                                       cfg.focus == Focus::Endemic ? "endemic" : "disease-free"));
  return *eq;
}

int run_equilibria(const Options& o, const ScenarioConfig& cfg) {
  const auto eqs = find_equilibria(cfg.model);
  if (format_of(o, "csv") == "json") {
    json arr = json::array();
    for (const auto& e : eqs) arr.push_back(to_json(e));
    emit(o, "equilibria.json", arr.dump(2));
  } else {
    std::string csv = "kind,x,y,z,residual\n";
    for (const auto& e : eqs)
      csv += fmt::format("{},{:.17g},{:.17g},{:.17g},{:.3g}\n", to_string(e.kind), e.state.x, e.state.y, e.state.z,
                         e.residual);
    emit(o, "equilibria.csv", csv);
  }
  return kExitOk;
}

void append_checks(std::string& csv, const std::string& criterion, const std::vector<Inequality>& checks) {
  for (const auto& q : checks)
    csv += fmt::format("{},\"{}\",{:.17g},{},{:.17g},{}\n", criterion, q.label, q.lhs, to_string(q.relation), q.rhs,
                       q.holds ? "true" : "false");
}

StabilityReport build_report(const ScenarioConfig& cfg) {
  const Equilibrium focus = require_focus(cfg);
  StabilityReport report = stability_report(cfg.model, focus, find_equilibria(cfg.model));
  annotate_reference_values(report, cfg.reference_values);
  return report;
}

int run_stability(const Options& o, const ScenarioConfig& cfg) {
  const StabilityReport report = build_report(cfg);
  if (o.format == "json") {
    emit(o, "stability.json", to_json(report).dump(2));
  } else if (o.format == "csv") {
    std::string csv = "criterion,label,lhs,relation,rhs,holds\n";
    append_checks(csv, "delay-free", report.delay_free.checks);
    append_checks(csv, "tau-persistence", report.tau_persistence.checks);
    append_checks(csv, "tau-critical", report.tau_only.checks);
    append_checks(csv, "delta-only", report.delta_only.checks);
    append_checks(csv, "combined", report.combined.checks);
    append_checks(csv, "global", report.global.checks);
    emit(o, "stability.csv", csv);
  } else {
    emit(o, "stability.txt", to_table(report));
  }
  return kExitOk;
}

Trajectory simulate(const ScenarioConfig& cfg) {
  const double step = cfg.step ? *cfg.step : default_step(cfg.model);
  try {
    return integrate(cfg.model, cfg.history, cfg.horizon, step);
  } catch (const IntegrationError& e) {
    throw ComputationError(e.what());
  } catch (const std::invalid_argument& e) {
    const std::string what = e.what();
    const std::string field = what.rfind("history", 0) == 0                ? "history"
                              : what.find("horizon must") != std::string::npos ? "horizon"
                                                                               : "step";
    throw ConfigError(field, what);
  }
}

int run_simulate(const Options& o, const ScenarioConfig& cfg) {
  require_out_for_plot(o);
  const Trajectory traj = simulate(cfg);
  if (format_of(o, "csv") == "json") emit(o, "trajectory.json", trajectory_json(traj).dump(2));
  else emit(o, "trajectory.csv", trajectory_csv(traj));
  if (o.plot) {
    const Params& p = cfg.model.params();
    emit(o, "trajectory.svg",
         trajectory_svg(traj, fmt::format("{} (tau = {:g}, delta = {:g})", cfg.name, p.tau, p.delta)));
  }
  return kExitOk;
}

std::vector<DelayPoint> sweep_grid(const Options& o, const ScenarioConfig& cfg) {
  if (o.tau.empty() && o.delta.empty()) {
    if (!cfg.sweep || cfg.sweep->points.empty())
      throw ConfigError("sweep.points", "no sweep grid in the configuration; pass --tau and/or --delta");
    return cfg.sweep->points;
  }
  const Params& p = cfg.model.params();
  const auto taus = o.tau.empty() ? std::vector<double>{p.tau} : parse_range(o.tau, "tau");
  const auto deltas = o.delta.empty() ? std::vector<double>{p.delta} : parse_range(o.delta, "delta");
  std::vector<DelayPoint> grid;
  for (double t : taus)
    for (double d : deltas) grid.push_back({t, d});
  return grid;
}

std::string sweep_svg(const std::vector<SweepRow>& rows, const std::string& title) {
  bool single_delta = true;
  for (const auto& r : rows) single_delta = single_delta && r.delays.delta == rows.front().delays.delta;
  std::vector<double> xs;
  Series re{"max Re(lambda)", {}, ""}, amp{"amplitude", {}, ""};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    xs.push_back(single_delta ? r.delays.tau : static_cast<double>(i));
    re.values.push_back(r.max_re_lambda);
    const bool sustained = r.classification && r.classification->kind == RegimeKind::SustainedOscillation;
    amp.values.push_back(sustained ? r.classification->amplitude : 0.0);
  }
  return svg_line_plot(xs, {re, amp}, title, single_delta ? "tau" : "grid row");
}

int run_sweep(const Options& o, const ScenarioConfig& cfg) {
  require_out_for_plot(o);
  const auto grid = sweep_grid(o, cfg);
  SweepOptions opts;
  opts.horizon = cfg.sweep ? cfg.sweep->horizon : cfg.horizon;
  if (o.horizon) opts.horizon = *o.horizon;
  opts.step = cfg.step;
  const auto rows = sweep(cfg.model, grid, cfg.history, focus_equilibrium(cfg), opts);
  if (format_of(o, "csv") == "json") emit(o, "sweep.json", sweep_json(rows).dump(2));
  else emit(o, "sweep.csv", sweep_csv(rows));
  if (o.plot) emit(o, "sweep.svg", sweep_svg(rows, fmt::format("{} delay sweep", cfg.name)));
  return kExitOk;
}

/// Without a scenario: the acceptance criteria. With one: every oracle probe and
/// reference value of its stability report.
int run_verify(const Options& o) {
  if (o.preset.empty() && o.config_path.empty()) {
    bool all = true;
    for (int id : acceptance::criterion_ids()) {
      if (o.criterion != 0 && id != o.criterion) continue;
      const auto r = acceptance::run_criterion(id);
      std::cout << acceptance::format_line(r) << std::endl;
      all = all && r.passed;
    }
    return all ? kExitOk : kExitComputation;
  }
  ScenarioConfig cfg = load_scenario(o);
  apply_overrides(cfg, o, false);
  const StabilityReport report = build_report(cfg);
  bool all = true;
  for (const auto& p : report.probes) {
    std::cout << fmt::format("[{}] {} at tau = {:g}, delta = {:g}: max Re = {:.6g}, expected {}\n",
                             p.agrees ? "PASS" : "FAIL", p.criterion, p.tau, p.delta, p.max_re, p.expectation);
    all = all && p.agrees;
  }
  for (const auto& n : report.notes) {
    const bool discrepancy = n.rfind("reference discrepancy", 0) == 0;
    std::cout << fmt::format("[{}] {}\n", discrepancy ? "FAIL" : "NOTE", n);
    all = all && !discrepancy;
  }
  return all ? kExitOk : kExitComputation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Delayed SIR model with vaccination and treatment: equilibria, stability, simulation"};
  app.fallthrough();
  Options o;

  auto* preset = app.add_option("--preset", o.preset, "Bundled scenario name");
  auto* config = app.add_option("--config", o.config_path, "Scenario JSON file")->check(CLI::ExistingFile);
  preset->excludes(config);
  app.add_option("--tau", o.tau, "Incubation delay, A:B:STEP range for sweeps");
  app.add_option("--delta", o.delta, "Recovery delay, A:B:STEP range for sweeps");
  app.add_option("--horizon", o.horizon, "Integration horizon");
  app.add_option("--step", o.step, "Integration step");
  app.add_option("--out", o.out_dir, "Output directory (stdout when omitted)");
  app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_flag("--plot", o.plot, "Also write an SVG plot (needs --out)");
  app.add_flag("--dump-config", o.dump_config, "Print the effective configuration as JSON and exit");

  auto* equilibria = app.add_subcommand("equilibria", "List equilibria of the scenario");
  auto* stability = app.add_subcommand("stability", "Stability report at the focus equilibrium");
  auto* simulate_cmd = app.add_subcommand("simulate", "Integrate the delay system");
  auto* sweep_cmd = app.add_subcommand("sweep", "Classify long-run behaviour over a delay grid");
  auto* verify = app.add_subcommand("verify", "Run acceptance criteria, or check a scenario's report");
  verify->add_option("--criterion", o.criterion, "Run only this acceptance criterion");
  app.require_subcommand(0, 1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (o.dump_config) {
      ScenarioConfig cfg = load_scenario(o);
      apply_overrides(cfg, o, sweep_cmd->parsed());
      std::cout << to_json(cfg).dump(2) << '\n';
      return kExitOk;
    }
    if (verify->parsed()) return run_verify(o);
    if (app.get_subcommands().empty()) throw ConfigError("subcommand", "expected one of equilibria, stability, simulate, sweep, verify");

    ScenarioConfig cfg = load_scenario(o);
    apply_overrides(cfg, o, sweep_cmd->parsed());
    if (equilibria->parsed()) return run_equilibria(o, cfg);
    if (stability->parsed()) return run_stability(o, cfg);
    if (simulate_cmd->parsed()) return run_simulate(o, cfg);
    return run_sweep(o, cfg);
  } catch (const ConfigError& e) {
    std::cerr << "config error in field '" << e.field() << "': " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "computation error: " << e.what() << '\n';
    return kExitComputation;
  }
}
