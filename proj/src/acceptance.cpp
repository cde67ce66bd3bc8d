#include "sirdelay/acceptance.hpp"

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>

#include "sirdelay/analytics.hpp"
#include "sirdelay/characteristic.hpp"
#include "sirdelay/config.hpp"
#include "sirdelay/criteria.hpp"
#include "sirdelay/cubic.hpp"
#include "sirdelay/integrator.hpp"

namespace sirdelay::acceptance {

namespace {

// Pinned tolerances and budgets.
constexpr double kEquilibriumTol = 1e-9;
constexpr double kEquilibriumBudget = 1.0;
constexpr double kRootTol = 1e-9;
constexpr double kCubicRootTol = 0.005;
constexpr double kTauPlusTol = 0.01;
constexpr double kBracketBudget = 30.0;
constexpr double kRegimeBudget = 60.0;
constexpr double kConvergenceTol = 1e-2;
constexpr double kGlobalBudget = 60.0;
constexpr double kNonlinearBudget = 30.0;
constexpr double kOrderLow = 14.0, kOrderHigh = 18.0;
constexpr double kDriftTol = 1e-8;
constexpr double kAgreementBand = 0.05;

struct Outcome {
  bool passed;
  std::string detail;
};

std::string fmt_state(const State& s) { return fmt::format("({:.6g}, {:.6g}, {:.6g})", s.x, s.y, s.z); }

Outcome equilibria_closed_forms() {
  const auto start = std::chrono::steady_clock::now();
  const std::pair<const char*, State> expected[] = {
      {"ex5_1", {2.0, 6.0, 6.0}},
      {"ex5_2", {5.0, 0.0, 0.0}},
      {"ex5_3", {2.0, 2.0, 2.0}},
      {"ex5_4", {2.5, 0.0, 0.0}},
      {"ex5_5", {200.0 / 21.0, 10.0 / 21.0, 30.0 / 21.0}},
      {"ex5_6", {(std::sqrt(41.0) - 1.0) / 2.0, 0.0, 0.0}},
      {"ex5_7", {(std::sqrt(57.0) - 3.0) / 4.0, 0.0, 0.0}},
  };
  std::string detail;
  bool ok = true;
  for (const auto& [name, want] : expected) {
    const auto eq = focus_equilibrium(load_preset(name));
    const double err = eq ? (eq->state - want).max_abs() : INFINITY;
    if (!(err <= kEquilibriumTol)) {
      ok = false;
      detail += fmt::format("{}: expected {}, got {}; ", name, fmt_state(want), eq ? fmt_state(eq->state) : "none");
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (secs >= kEquilibriumBudget) {
    ok = false;
    detail += fmt::format("runtime {:.2f} s over budget; ", secs);
  }
  if (ok) detail = fmt::format("7 presets within {:g} in {:.3f} s", kEquilibriumTol, secs);
  return {ok, detail};
}

Outcome delay_free_verdicts() {
  std::string detail;
  bool ok = true;
  {
    const auto cfg = load_preset("ex5_1");
    const auto eq = focus_equilibrium(cfg);
    const JacCoeffs j = jacobian_coeffs(cfg.model, *eq);
    const auto res = delay_free_stable(char_coeffs(j), j);
    if (!(res.hurwitz_conditions && res.verdict == DelayFreeVerdict::Stable)) {
      ok = false;
      detail += "ex5_1 not Stable by the coefficient conditions; ";
    }
  }
  for (const char* name : {"ex5_2", "ex5_4"}) {
    const auto cfg = load_preset(name);
    const auto eq = focus_equilibrium(cfg);
    const JacCoeffs j = jacobian_coeffs(cfg.model, *eq);
    const CharCoeffs cc = char_coeffs(j);
    const auto res = delay_free_stable(cc, j);
    if (!res.delay_free_equivalent || res.verdict != DelayFreeVerdict::Stable) {
      ok = false;
      detail += fmt::format("{} not flagged delay-free equivalent; ", name);
    }
    for (const Complex& z : char_roots_scan(cc, 0.0, 0.0).roots)
      if (std::abs(z) > kRootTol && !(z.real() < 0.0)) {
        ok = false;
        detail += fmt::format("{} has nonzero root {:g}{:+g}i with Re >= 0; ", name, z.real(), z.imag());
      }
    if (std::string(name) == "ex5_2") {
      const auto roots = char_roots_scan(cc, 0.0, 0.0).roots;
      bool match = roots.size() == 3;
      const double want[] = {0.0, -1.0, -2.0};
      for (std::size_t i = 0; match && i < 3; ++i) match = std::abs(roots[i] - Complex(want[i], 0.0)) <= kRootTol;
      if (!match) {
        ok = false;
        detail += fmt::format("ex5_2 roots differ from {{0, -1, -2}} (found {}); ", roots.size());
      }
    }
  }
  if (ok) detail = "ex5_1 Stable; ex5_2 and ex5_4 delay-free equivalent; ex5_2 roots {0, -1, -2}";
  return {ok, detail};
}

Outcome cubic_solver() {
  const auto a = solve_cubic_real(42.0, -46.0, -117.0, -8.0);
  std::vector<double> pos_a;
  for (double r : a)
    if (r > 0.0) pos_a.push_back(r);
  const auto b = solve_cubic_real(756.0, 1488.0, 500.0, 84.0);
  int pos_b = 0;
  for (double r : b) pos_b += r > 0.0;
  const bool ok = pos_a.size() == 1 && std::abs(pos_a[0] - 2.325) <= kCubicRootTol && pos_b == 0;
  return {ok, fmt::format("(42,-46,-117,-8): {} positive root(s){}; (756,1488,500,84): {} positive root(s)", pos_a.size(),
                          pos_a.empty() ? "" : fmt::format(" first {:.6f}", pos_a[0]), pos_b)};
}

Outcome tau_plus_formula() {
  const double tau = tau_from_pseudo_delay(0.2125, 2.325, 0);
  return {std::abs(tau - 4.32) <= kTauPlusTol, fmt::format("tau+ = {:.6f}", tau)};
}

Outcome bifurcation_bracket() {
  const auto start = std::chrono::steady_clock::now();
  const auto cfg = load_preset("ex5_3");
  const CharCoeffs cc = char_coeffs(jacobian_coeffs(cfg.model, *focus_equilibrium(cfg)));
  auto re = [&](double tau) { return char_roots_scan(cc, tau, 0.0).max_real(); };
  double lo = 0.0, hi = -1.0;
  for (double tau = 0.0; tau <= 10.0 + 1e-9; tau += 0.25) {
    if (re(tau) > 0.0) {
      hi = tau;
      break;
    }
    lo = tau;
  }
  if (hi < 0.0) return {false, "no crossing found for tau in [0, 10]"};
  for (int it = 0; it < 30; ++it) {
    const double mid = 0.5 * (lo + hi);
    (re(mid) > 0.0 ? hi : lo) = mid;
  }
  const double tau_star = 0.5 * (lo + hi);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool ok = tau_star >= 4.0 && tau_star <= 5.0 && secs < kBracketBudget;
  return {ok, fmt::format("crossing at tau* = {:.6f} ({:.2f} s)", tau_star, secs)};
}

Outcome regime_sweep() {
  const auto start = std::chrono::steady_clock::now();
  const auto cfg = load_preset("ex5_3");
  const auto eq = focus_equilibrium(cfg);
  std::vector<DelayPoint> grid;
  for (double tau : {0.0, 0.9, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0}) grid.push_back({tau, 0.0});
  SweepOptions opts;
  opts.horizon = 200.0;
  const auto rows = sweep(cfg.model, grid, ConstantHistory{{1.0, 1.0, 1.0}}, eq, opts);
  bool ok = true;
  std::string detail;
  for (const SweepRow& r : rows) {
    const double tau = r.delays.tau;
    const RegimeKind kind = r.classification ? r.classification->kind : RegimeKind::Unclassified;
    bool row_ok;
    if (!r.classification) row_ok = false;
    else if (tau < 3.5) row_ok = kind == RegimeKind::Converged;
    else if (tau < 4.5) row_ok = kind == RegimeKind::DampedOscillation || kind == RegimeKind::Converged;
    else row_ok = kind == RegimeKind::SustainedOscillation;
    ok = ok && row_ok;
    detail += fmt::format("tau={:g}:{}{} ", tau, r.classification ? to_string(kind) : "Error", row_ok ? "" : "(!)");
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (secs >= kRegimeBudget) ok = false;
  detail += fmt::format("({:.2f} s)", secs);
  return {ok, detail};
}

struct ConvergenceRun {
  int failures = 0;
  int runs = 0;
  std::string first_failure;
};

void converge_runs(ConvergenceRun& acc, const ScenarioConfig& cfg, const State& target, const std::vector<State>& histories,
                   const std::vector<DelayPoint>& delays, double horizon) {
  for (const DelayPoint& dp : delays)
    for (const State& h0 : histories) {
      ++acc.runs;
      const ModelSpec m = cfg.model.with_delays(dp.tau, dp.delta);
      std::string why;
      try {
        const Trajectory traj = integrate(m, ConstantHistory{h0}, horizon, default_step(m));
        const double err = (traj.states.back() - target).max_abs();
        if (!(err <= kConvergenceTol)) why = fmt::format("final deviation {:.3g}", err);
      } catch (const std::exception& e) {
        why = e.what();
      }
      if (!why.empty()) {
        ++acc.failures;
        if (acc.first_failure.empty())
          acc.first_failure = fmt::format("{} (tau={:g}, delta={:g}) from {}: {}", cfg.name, dp.tau, dp.delta,
                                          fmt_state(h0), why);
      }
    }
}

Outcome global_by_simulation() {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<State> histories = {
      {0.1, 0.1, 0.1}, {10.0, 10.0, 10.0}, {0.1, 10.0, 5.0}, {10.0, 0.1, 0.1}, {1.0, 5.0, 10.0}};
  const std::vector<DelayPoint> delays = {{0.0, 0.0}, {1.0, 1.0}, {5.0, 2.0}};
  ConvergenceRun a, b;
  converge_runs(a, load_preset("ex5_1"), {2.0, 6.0, 6.0}, histories, delays, 300.0);
  converge_runs(b, load_preset("ex5_2"), {5.0, 0.0, 0.0}, histories, delays, 300.0);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool ok = a.failures == 0 && b.failures == 0 && secs < kGlobalBudget;
  std::string detail = fmt::format("ex5_1 {}/{} converged, ex5_2 {}/{} converged ({:.2f} s)", a.runs - a.failures, a.runs,
                                   b.runs - b.failures, b.runs, secs);
  if (!a.first_failure.empty()) detail += "; e.g. " + a.first_failure;
  if (!b.first_failure.empty()) detail += "; e.g. " + b.first_failure;
  return {ok, detail};
}

Outcome nonlinear_preset() {
  const auto start = std::chrono::steady_clock::now();
  ConvergenceRun acc;
  const State target{(std::sqrt(57.0) - 3.0) / 4.0, 0.0, 0.0};
  converge_runs(acc, load_preset("ex5_7"), target, {{0.5, 0.5, 0.5}}, {{1.0, 0.5}, {1.0, 1.5}, {9.0, 0.5}, {9.0, 1.5}},
                200.0);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::string detail = fmt::format("{}/{} converged ({:.2f} s)", acc.runs - acc.failures, acc.runs, secs);
  if (!acc.first_failure.empty()) detail += "; " + acc.first_failure;
  return {acc.failures == 0 && secs < kNonlinearBudget, detail};
}

Outcome integrator_order() {
  // Zero response functions and b = c = r = 0 reduce the system to linear decay,
  // x(t) = a/d + (x0 - a/d) e^{-d t}, y(t) = y0 e^{-d1 t}, with z = 0.
  const Params p{.a = 10.0, .b = 0.0, .b1 = 0.0, .c = 0.0, .d = 1.0, .d1 = 1.0, .r = 0.0, .alpha = 1.0};
  const ModelSpec model(p, response::Zero{}, response::Zero{}, response::Zero{});
  const State x0{1.0, 1.0, 0.0};
  auto max_error = [&](double h) {
    const Trajectory traj = integrate(model, ConstantHistory{x0}, 10.0, h);
    double err = 0.0;
    for (std::size_t i = 0; i < traj.mesh.size(); ++i) {
      const double t = traj.mesh[i];
      const State exact{p.a / p.d + (x0.x - p.a / p.d) * std::exp(-p.d * t), x0.y * std::exp(-p.d1 * t), 0.0};
      err = std::max(err, (traj.states[i] - exact).max_abs());
    }
    return err;
  };
  const double ratio = max_error(0.1) / max_error(0.05);
  bool ok = ratio >= kOrderLow && ratio <= kOrderHigh;
  std::string detail = fmt::format("error ratio {:.3f} under step halving", ratio);

  double worst = 0.0;
  std::string worst_at;
  for (const auto& name : preset_names()) {
    const auto cfg = load_preset(name);
    for (const Equilibrium& eq : find_equilibria(cfg.model)) {
      const Trajectory traj = integrate(cfg.model, ConstantHistory{eq.state}, 100.0, default_step(cfg.model));
      double drift = 0.0;
      for (const State& s : traj.states) drift = std::max(drift, (s - eq.state).max_abs());
      if (drift > worst) {
        worst = drift;
        worst_at = fmt::format("{} {}", name, fmt_state(eq.state));
      }
    }
  }
  ok = ok && worst < kDriftTol;
  detail += fmt::format("; max equilibrium drift {:.3g}{}", worst, worst_at.empty() ? "" : " at " + worst_at);
  return {ok, detail};
}

Outcome theory_simulation_agreement() {
  const auto start = std::chrono::steady_clock::now();
  int rows = 0, violations = 0, constrained = 0;
  std::string first;
  for (const auto& name : preset_names()) {
    const auto cfg = load_preset(name);
    if (!cfg.sweep) continue;
    const auto eq = focus_equilibrium(cfg);
    SweepOptions opts;
    opts.horizon = cfg.sweep->horizon;
    const auto result = sweep(cfg.model, cfg.sweep->points, cfg.history, eq, opts);
    for (const SweepRow& r : result) {
      ++rows;
      const bool converged = r.classification && r.classification->kind == RegimeKind::Converged;
      bool bad = false;
      if (r.max_re_lambda < -kAgreementBand) {
        ++constrained;
        bad = !converged;
      } else if (r.max_re_lambda > kAgreementBand) {
        ++constrained;
        bad = converged;
      }
      if (bad) {
        ++violations;
        if (first.empty())
          first = fmt::format("{} tau={:g} delta={:g} max Re={:.4g} -> {}", name, r.delays.tau, r.delays.delta,
                              r.max_re_lambda, r.classification ? to_string(r.classification->kind) : r.error);
      }
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::string detail = fmt::format("{} rows, {} outside the +-{:g} band, {} violations ({:.2f} s)", rows, constrained,
                                   kAgreementBand, violations, secs);
  if (!first.empty()) detail += "; first: " + first;
  return {violations == 0, detail};
}

struct Entry {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

const std::vector<Entry>& registry() {
  static const std::vector<Entry> entries = {
      {1, "equilibrium-closed-forms", equilibria_closed_forms},
      {2, "delay-free-verdicts", delay_free_verdicts},
      {3, "cubic-solver", cubic_solver},
      {4, "tau-plus-formula", tau_plus_formula},
      {5, "bifurcation-bracket", bifurcation_bracket},
      {6, "regime-sweep", regime_sweep},
      {7, "global-stability-simulation", global_by_simulation},
      {8, "nonlinear-preset-stability", nonlinear_preset},
      {9, "integrator-order-and-drift", integrator_order},
      {10, "theory-simulation-agreement", theory_simulation_agreement},
  };
  return entries;
}

}  // namespace

std::vector<int> criterion_ids() {
  std::vector<int> ids;
  for (const auto& e : registry()) ids.push_back(e.id);
  return ids;
}

CriterionResult run_criterion(int id) {
  for (const auto& e : registry()) {
    if (e.id != id) continue;
    CriterionResult res{e.id, e.name, false, "", 0.0};
    const auto start = std::chrono::steady_clock::now();
    try {
      const Outcome o = e.run();
      res.passed = o.passed;
      res.detail = o.detail;
    } catch (const std::exception& ex) {
      res.detail = fmt::format("exception: {}", ex.what());
    }
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return res;
  }
  return {id, "unknown", false, "no such criterion", 0.0};
}

std::vector<CriterionResult> run_all() {
  std::vector<CriterionResult> out;
  for (int id : criterion_ids()) out.push_back(run_criterion(id));
  return out;
}

std::string format_line(const CriterionResult& r) {
  return fmt::format("[{}] {:>2} {} ({:.2f} s): {}", r.passed ? "PASS" : "FAIL", r.id, r.name, r.seconds, r.detail);
}

}  // namespace sirdelay::acceptance
