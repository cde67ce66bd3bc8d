#include "sirdelay/report.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace sirdelay {

namespace {

constexpr double kMarginal = 1e-9;
constexpr double kProbeOffset = 0.1;

using DelayPair = std::pair<double, double>;

// Worst case over a delay grid: the largest real part when stability is expected,
// the smallest when instability is.
OracleProbe grid_probe(const std::string& criterion, const CharCoeffs& cc, const std::vector<DelayPair>& pts,
                       bool expect_stable, const SearchBox& box, bool allow_zero_root = false) {
  OracleProbe worst{criterion, 0.0, 0.0, 0.0,
                    !expect_stable ? "max Re > 0 on the probe grid"
                    : allow_zero_root ? "max Re <= 0 on the probe grid (a zero root is allowed)"
                                      : "max Re < 0 on the probe grid",
                    true};
  bool first = true;
  for (const auto& [tau, delta] : pts) {
    const double re = char_roots_scan(cc, tau, delta, box).max_real();
    const bool worse = first || (expect_stable ? re > worst.max_re : re < worst.max_re);
    if (worse) {
      worst.tau = tau;
      worst.delta = delta;
      worst.max_re = re;
      first = false;
    }
  }
  worst.agrees = !expect_stable ? worst.max_re > kMarginal
                 : allow_zero_root ? worst.max_re <= kMarginal
                                   : worst.max_re < -kMarginal;
  return worst;
}

void crossing_probes(std::vector<OracleProbe>& out, const std::string& criterion, const CharCoeffs& cc, double at,
                     bool along_tau, bool stable_at_zero, const SearchBox& box) {
  const double before = at * (1.0 - kProbeOffset), after = at * (1.0 + kProbeOffset);
  const double tb = along_tau ? before : 0.0, db = along_tau ? 0.0 : before;
  const double ta = along_tau ? after : 0.0, da = along_tau ? 0.0 : after;
  const double re_before = char_roots_scan(cc, tb, db, box).max_real();
  const double re_after = char_roots_scan(cc, ta, da, box).max_real();
  if (stable_at_zero) {
    out.push_back({criterion, tb, db, re_before, "max Re < 0 just below the switch", re_before < -kMarginal});
    out.push_back({criterion, ta, da, re_after, "max Re > 0 just above the switch", re_after > kMarginal});
  } else {
    const bool changed = (re_before > kMarginal) != (re_after > kMarginal);
    out.push_back({criterion, tb, db, re_before, "sign of max Re changes across the switch", changed});
    out.push_back({criterion, ta, da, re_after, "sign of max Re changes across the switch", changed});
  }
}

std::string fmt_state(const State& s) { return fmt::format("({:.10g}, {:.10g}, {:.10g})", s.x, s.y, s.z); }

bool close(double a, double b, double rel) { return std::abs(a - b) <= rel * std::max(1.0, std::abs(b)); }

}  // namespace

StabilityReport stability_report(const ModelSpec& model, const Equilibrium& focus, const std::vector<Equilibrium>& all,
                                 const SearchBox& box) {
  StabilityReport rep;
  rep.equilibrium = focus;
  rep.tau = model.params().tau;
  rep.delta = model.params().delta;
  rep.jac = jacobian_coeffs(model, focus);
  rep.cc = char_coeffs(rep.jac);
  const CharCoeffs& cc = rep.cc;

  rep.delay_free = delay_free_stable(cc, rep.jac);
  const bool stable0 = rep.delay_free.verdict == DelayFreeVerdict::Stable;
  rep.tau_persistence = tau_persistence(cc);
  rep.tau_only = tau_critical(cc, stable0);
  rep.delta_only = delta_analysis(cc);
  rep.combined = general_delay_analysis(cc, rep.tau, rep.delta);
  rep.global = global_verdict(model, all);

  const RootScan scan = char_roots_scan(cc, rep.tau, rep.delta, box);
  rep.oracle_roots = scan.roots;
  rep.oracle_diagnostic = scan.diagnostic;

  // Delay-free verdict against the roots at tau = delta = 0.
  const double re0 = char_roots_scan(cc, 0.0, 0.0, box).max_real();
  // With the delayed terms gone the spectrum is the same for every delay, zero root included.
  const bool zero_root = stable0 && rep.delay_free.delay_free_equivalent && std::abs(re0) <= kMarginal;
  if (stable0) {
    const bool agrees = rep.delay_free.delay_free_equivalent ? re0 <= kMarginal : re0 < -kMarginal;
    rep.probes.push_back({"delay-free", 0.0, 0.0, re0,
                          rep.delay_free.delay_free_equivalent ? "max Re <= 0 (a zero root is allowed)" : "max Re < 0",
                          agrees});
    if (zero_root)
      rep.notes.push_back("delay-free: a zero characteristic root is present; the linearisation is only marginally stable");
  } else {
    rep.probes.push_back({"delay-free", 0.0, 0.0, re0, "informational (criterion not conclusive)", true});
  }

  const std::vector<DelayPair> tau_grid = {{0.5, 0.0}, {1.0, 0.0}, {2.0, 0.0}, {5.0, 0.0}, {10.0, 0.0}, {20.0, 0.0}};
  const std::vector<DelayPair> delta_grid = {{0.0, 0.5}, {0.0, 1.0}, {0.0, 2.0}, {0.0, 5.0}, {0.0, 10.0}, {0.0, 20.0}};

  switch (rep.tau_only.verdict) {
    case TauVerdict::PreservedStable: rep.probes.push_back(grid_probe("tau-critical", cc, tau_grid, true, box, zero_root)); break;
    case TauVerdict::PreservedUnstable: rep.probes.push_back(grid_probe("tau-critical", cc, tau_grid, false, box)); break;
    case TauVerdict::SwitchAt:
      crossing_probes(rep.probes, "tau-critical", cc, rep.tau_only.primary->delay, true, stable0, box);
      break;
    case TauVerdict::Inconclusive: break;
  }
  if (rep.tau_persistence.verdict == TauPersistenceVerdict::Preserved)
    rep.probes.push_back(grid_probe("tau-persistence", cc, tau_grid, re0 < 0.0, box));

  switch (rep.delta_only.verdict) {
    case DeltaVerdict::Preserved:
      if (std::abs(re0) > kMarginal) rep.probes.push_back(grid_probe("delta-only", cc, delta_grid, re0 < 0.0, box));
      break;
    case DeltaVerdict::SwitchAt:
    case DeltaVerdict::SecondBifurcationPossible:
      crossing_probes(rep.probes, "delta-only", cc, rep.delta_only.crossings.front().delay, false, stable0, box);
      break;
    case DeltaVerdict::Inconclusive: break;
  }

  const double re_here = scan.max_real();
  if (rep.combined.verdict == CombinedVerdict::Preserved) {
    const bool same = (re_here < -kMarginal) == (re0 < -kMarginal);
    rep.probes.push_back({"combined", rep.tau, rep.delta, re_here, "same stability as without delays", same});
  } else if (rep.combined.verdict == CombinedVerdict::SwitchPossible) {
    rep.probes.push_back({"combined", rep.tau, rep.delta, re_here, "informational", true});
  }

  if (rep.global.verdict == GlobalVerdict::EndemicGAS || rep.global.verdict == GlobalVerdict::DiseaseFreeGAS) {
    const EquilibriumKind kind =
        rep.global.verdict == GlobalVerdict::EndemicGAS ? EquilibriumKind::Endemic : EquilibriumKind::DiseaseFree;
    for (const Equilibrium& eq : all) {
      if (eq.kind != kind) continue;
      const CharCoeffs gcc = char_coeffs(jacobian_coeffs(model, eq));
      const std::vector<DelayPair> pts = {{rep.tau, rep.delta}, {0.0, 0.0}, {1.0, 1.0}, {5.0, 2.0}};
      OracleProbe p = grid_probe("global", gcc, pts, true, box);
      p.expectation = fmt::format("max Re < 0 at {} for every delay", fmt_state(eq.state));
      rep.probes.push_back(p);
    }
  }

  for (const OracleProbe& p : rep.probes)
    if (!p.agrees)
      rep.notes.push_back(fmt::format("oracle disagrees with {}: expected {}, found max Re = {:.6g} at tau = {:g}, delta = {:g}",
                                      p.criterion, p.expectation, p.max_re, p.tau, p.delta));
  if (!rep.tau_only.diagnostic.empty()) rep.notes.push_back("tau-critical: " + rep.tau_only.diagnostic);
  if (!rep.delta_only.diagnostic.empty()) rep.notes.push_back("delta-only: " + rep.delta_only.diagnostic);
  if (!rep.combined.diagnostic.empty()) rep.notes.push_back("combined: " + rep.combined.diagnostic);
  if (!rep.global.note.empty()) rep.notes.push_back("global: " + rep.global.note);
  return rep;
}

void annotate_reference_values(StabilityReport& rep, const nlohmann::json& ref) {
  if (!ref.is_object()) return;
  if (auto it = ref.find("characteristic_polynomial"); it != ref.end() && it->is_string()) {
    const std::string theirs = it->get<std::string>();
    if (theirs != rep.delay_free.polynomial)
      rep.notes.push_back(fmt::format("reference discrepancy: characteristic polynomial computed as {} but reference gives {}",
                                      rep.delay_free.polynomial, theirs));
  }
  if (auto it = ref.find("pseudo_delay_cubic"); it != ref.end() && it->is_array() && it->size() == 4) {
    const std::vector<double> v = it->get<std::vector<double>>();
    auto matches = [&](const PseudoDelayCubic& c) {
      return close(c.c3, v[0], 1e-6) && close(c.c2, v[1], 1e-6) && close(c.c1, v[2], 1e-6) && close(c.c0, v[3], 1e-6);
    };
    if (!matches(rep.tau_only.cubic)) {
      const auto& c = rep.tau_only.cubic;
      const auto& t = rep.tau_only.truncated_cubic;
      rep.notes.push_back(fmt::format(
          "reference discrepancy: pseudo-delay cubic computed as ({:g}, {:g}, {:g}, {:g}) (truncated variant ({:g}, {:g}, {:g}, {:g})) "
          "but reference gives ({:g}, {:g}, {:g}, {:g})",
          c.c3, c.c2, c.c1, c.c0, t.c3, t.c2, t.c1, t.c0, v[0], v[1], v[2], v[3]));
    }
  }
  if (auto it = ref.find("delay_free_roots"); it != ref.end() && it->is_array()) {
    const RootScan scan = char_roots_scan(rep.cc, 0.0, 0.0);
    for (const auto& r : *it) {
      if (!r.is_number()) continue;
      const double x = r.get<double>();
      const bool found = std::any_of(scan.roots.begin(), scan.roots.end(),
                                     [&](Complex z) { return std::abs(z - Complex(x, 0.0)) < 1e-6; });
      if (!found)
        rep.notes.push_back(fmt::format("reference discrepancy: {:.10g} is not a root of {}", x, rep.delay_free.polynomial));
    }
  }
  if (auto it = ref.find("tau_plus"); it != ref.end() && it->is_number()) {
    const double theirs = it->get<double>();
    if (!rep.tau_only.primary)
      rep.notes.push_back(fmt::format("reference discrepancy: reference gives tau+ = {:g} but no switch was computed", theirs));
    else if (!close(rep.tau_only.primary->delay, theirs, 1e-3))
      rep.notes.push_back(fmt::format("reference discrepancy: tau+ computed as {:.6g} but reference gives {:g}",
                                      rep.tau_only.primary->delay, theirs));
  }
  if (auto it = ref.find("equilibrium"); it != ref.end() && it->is_array() && it->size() == 3) {
    const std::vector<double> v = it->get<std::vector<double>>();
    const State s{v[0], v[1], v[2]};
    if ((s - rep.equilibrium.state).max_abs() > 1e-9)
      rep.notes.push_back(fmt::format("reference discrepancy: equilibrium computed as {} but reference gives {}",
                                      fmt_state(rep.equilibrium.state), fmt_state(s)));
  }
}

nlohmann::json to_json(const Inequality& q) {
  return {{"label", q.label}, {"lhs", q.lhs}, {"relation", to_string(q.relation)}, {"rhs", q.rhs},
          {"holds", q.holds}, {"boundary", q.boundary}};
}

nlohmann::json to_json(const Equilibrium& eq) {
  return {{"kind", to_string(eq.kind)},
          {"state", {eq.state.x, eq.state.y, eq.state.z}},
          {"residual", eq.residual}};
}

nlohmann::json to_json(const Classification& c) {
  nlohmann::json j = {{"kind", to_string(c.kind)},
                      {"window", {c.window_start, c.window_end}},
                      {"peaks", c.peaks}};
  switch (c.kind) {
    case RegimeKind::Converged:
      j["target"] = {c.target.x, c.target.y, c.target.z};
      j["max_deviation"] = c.max_deviation;
      break;
    case RegimeKind::DampedOscillation: j["decay_ratio"] = c.decay_ratio; break;
    case RegimeKind::SustainedOscillation:
      j["period"] = c.period;
      j["amplitude"] = c.amplitude;
      break;
    default: break;
  }
  return j;
}

nlohmann::json sweep_json(const std::vector<SweepRow>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const SweepRow& r : rows) {
    nlohmann::json row = {{"tau", r.delays.tau}, {"delta", r.delays.delta}};
    row["classification"] = r.classification ? to_json(*r.classification) : nlohmann::json(nullptr);
    row["max_re_lambda"] = std::isfinite(r.max_re_lambda) ? nlohmann::json(r.max_re_lambda) : nlohmann::json(nullptr);
    row["error"] = r.error.empty() ? nlohmann::json(nullptr) : nlohmann::json(r.error);
    arr.push_back(row);
  }
  return arr;
}

nlohmann::json trajectory_json(const Trajectory& traj, double stride) {
  nlohmann::json t = nlohmann::json::array(), x = t, y = t, z = t;
  const double horizon = traj.horizon();
  const auto n = static_cast<std::size_t>(std::floor(horizon / stride + 1e-9));
  for (std::size_t k = 0; k <= n; ++k) {
    const double tk = std::min(static_cast<double>(k) * stride, horizon);
    const State s = dense_eval(traj, tk);
    t.push_back(tk);
    x.push_back(s.x);
    y.push_back(s.y);
    z.push_back(s.z);
  }
  return {{"step", traj.meta.step},
          {"model_hash", fmt::format("{:016x}", traj.meta.model_hash)},
          {"t", t}, {"x", x}, {"y", y}, {"z", z}};
}

namespace {

nlohmann::json checks_json(const std::vector<Inequality>& checks) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& q : checks) arr.push_back(to_json(q));
  return arr;
}

nlohmann::json crossing_json(const DelayCrossing& c) {
  return {{"T", c.T}, {"nu", c.nu}, {"delay", c.delay}, {"k", c.k}};
}

nlohmann::json cubic_json(const PseudoDelayCubic& c) { return nlohmann::json::array({c.c3, c.c2, c.c1, c.c0}); }

nlohmann::json optional_json(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); }

}  // namespace

nlohmann::json to_json(const StabilityReport& r) {
  nlohmann::json j;
  j["equilibrium"] = to_json(r.equilibrium);
  j["delays"] = {{"tau", r.tau}, {"delta", r.delta}};
  j["jacobian_coeffs"] = {{"A", r.jac.A}, {"B", r.jac.B}, {"C", r.jac.C}, {"D", r.jac.D}, {"E", r.jac.E}, {"alpha", r.jac.alpha}};
  j["char_coeffs"] = {{"l", r.cc.l}, {"m", r.cc.m}, {"n", r.cc.n}, {"l1", r.cc.l1}, {"m1", r.cc.m1}, {"n1", r.cc.n1}};

  j["delay_free"] = {{"verdict", to_string(r.delay_free.verdict)},
                     {"coefficient_conditions", r.delay_free.hurwitz_conditions},
                     {"delay_free_equivalent", r.delay_free.delay_free_equivalent},
                     {"polynomial", r.delay_free.polynomial},
                     {"checks", checks_json(r.delay_free.checks)}};

  j["tau_persistence"] = {{"verdict", to_string(r.tau_persistence.verdict)},
                          {"a0", r.tau_persistence.a0},
                          {"a1", r.tau_persistence.a1},
                          {"a2", r.tau_persistence.a2},
                          {"checks", checks_json(r.tau_persistence.checks)}};

  nlohmann::json tc = {{"verdict", to_string(r.tau_only.verdict)},
                       {"pseudo_delay_cubic", cubic_json(r.tau_only.cubic)},
                       {"truncated_cubic", cubic_json(r.tau_only.truncated_cubic)},
                       {"cubic_roots", r.tau_only.cubic_roots},
                       {"checks", checks_json(r.tau_only.checks)},
                       {"diagnostic", r.tau_only.diagnostic}};
  tc["switch"] = r.tau_only.primary ? crossing_json(*r.tau_only.primary) : nlohmann::json(nullptr);
  tc["crossings"] = nlohmann::json::array();
  for (const auto& c : r.tau_only.crossings) tc["crossings"].push_back(crossing_json(c));
  j["tau_only"] = tc;

  nlohmann::json dd = {{"verdict", to_string(r.delta_only.verdict)},
                       {"nu_squared", r.delta_only.nu_squared},
                       {"sign_patterns", r.delta_only.sign_patterns},
                       {"checks", checks_json(r.delta_only.checks)},
                       {"diagnostic", r.delta_only.diagnostic}};
  dd["crossings"] = nlohmann::json::array();
  for (const auto& c : r.delta_only.crossings) dd["crossings"].push_back(crossing_json(c));
  j["delta_only"] = dd;

  j["combined"] = {{"verdict", to_string(r.combined.verdict)},
                   {"nu", optional_json(r.combined.nu)},
                   {"theta", optional_json(r.combined.theta)},
                   {"psi_at_zero", r.combined.psi_at_zero},
                   {"checks", checks_json(r.combined.checks)},
                   {"diagnostic", r.combined.diagnostic}};

  j["global"] = {{"verdict", to_string(r.global.verdict)},
                 {"boundary", r.global.boundary},
                 {"checks", checks_json(r.global.checks)},
                 {"note", r.global.note}};

  nlohmann::json roots = nlohmann::json::array();
  for (const Complex& z : r.oracle_roots) roots.push_back({z.real(), z.imag()});
  j["oracle"] = {{"roots", roots}, {"diagnostic", r.oracle_diagnostic}};
  nlohmann::json probes = nlohmann::json::array();
  for (const auto& p : r.probes)
    probes.push_back({{"criterion", p.criterion},
                      {"tau", p.tau},
                      {"delta", p.delta},
                      {"max_re", p.max_re},
                      {"expectation", p.expectation},
                      {"agrees", p.agrees}});
  j["oracle"]["probes"] = probes;
  j["notes"] = r.notes;
  return j;
}

namespace {

void append_checks(std::string& out, const std::vector<Inequality>& checks) {
  for (const auto& q : checks)
    out += fmt::format("    {:<52} {:>14.8g} {:<2} {:<14.8g} {}{}\n", q.label, q.lhs, to_string(q.relation), q.rhs,
                       q.holds ? "holds" : "fails", q.boundary ? " (boundary)" : "");
}

}  // namespace

std::string to_table(const StabilityReport& r) {
  std::string out;
  out += fmt::format("equilibrium {} [{}], tau = {:g}, delta = {:g}\n", fmt_state(r.equilibrium.state),
                     to_string(r.equilibrium.kind), r.tau, r.delta);
  out += fmt::format("A = {:.8g}, B = {:.8g}, C = {:.8g}, D = {:.8g}, E = {:.8g}, alpha = {:.8g}\n", r.jac.A, r.jac.B,
                     r.jac.C, r.jac.D, r.jac.E, r.jac.alpha);
  out += fmt::format("l = {:.8g}, m = {:.8g}, n = {:.8g}, l1 = {:.8g}, m1 = {:.8g}, n1 = {:.8g}\n", r.cc.l, r.cc.m, r.cc.n,
                     r.cc.l1, r.cc.m1, r.cc.n1);
  out += fmt::format("delay-free polynomial: {}\n\n", r.delay_free.polynomial);

  out += fmt::format("[delay-free]        {}{}\n", to_string(r.delay_free.verdict),
                     r.delay_free.delay_free_equivalent ? " (delayed terms drop out: D = 0, C <= 0, A <= 0)" : "");
  append_checks(out, r.delay_free.checks);

  out += fmt::format("[tau-persistence]   {}  a0 = {:.8g}, a1 = {:.8g}, a2 = {:.8g}\n",
                     to_string(r.tau_persistence.verdict), r.tau_persistence.a0, r.tau_persistence.a1,
                     r.tau_persistence.a2);
  append_checks(out, r.tau_persistence.checks);

  out += fmt::format("[tau-critical]      {}", to_string(r.tau_only.verdict));
  if (r.tau_only.primary)
    out += fmt::format("  tau+ = {:.6g} (T = {:.6g}, nu = {:.6g})", r.tau_only.primary->delay, r.tau_only.primary->T,
                       r.tau_only.primary->nu);
  const auto& c = r.tau_only.cubic;
  out += fmt::format("\n    pseudo-delay cubic ({:.8g}, {:.8g}, {:.8g}, {:.8g})\n", c.c3, c.c2, c.c1, c.c0);
  append_checks(out, r.tau_only.checks);

  out += fmt::format("[delta-only]        {}", to_string(r.delta_only.verdict));
  for (const auto& x : r.delta_only.crossings) out += fmt::format("  delta = {:.6g} (k = {})", x.delay, x.k);
  out += "\n";
  append_checks(out, r.delta_only.checks);

  out += fmt::format("[combined]          {}", to_string(r.combined.verdict));
  if (r.combined.nu) out += fmt::format("  nu = {:.6g}", *r.combined.nu);
  if (r.combined.theta) out += fmt::format("  theta = {:.6g}", *r.combined.theta);
  out += "\n";
  append_checks(out, r.combined.checks);

  out += fmt::format("[global]            {}{}\n", to_string(r.global.verdict), r.global.boundary ? " (boundary)" : "");
  append_checks(out, r.global.checks);

  out += "\n[oracle] rightmost roots at the configured delays:\n";
  for (std::size_t i = 0; i < std::min<std::size_t>(r.oracle_roots.size(), 5); ++i)
    out += fmt::format("    {:.10g} {:+.10g}i\n", r.oracle_roots[i].real(), r.oracle_roots[i].imag());
  if (!r.oracle_diagnostic.empty()) out += "    " + r.oracle_diagnostic + "\n";
  out += "[oracle] cross-checks:\n";
  for (const auto& p : r.probes)
    out += fmt::format("    {:<16} tau = {:<8g} delta = {:<8g} max Re = {:<+12.6g} {} ({})\n", p.criterion, p.tau,
                       p.delta, p.max_re, p.agrees ? "agrees" : "DISAGREES", p.expectation);
  if (!r.notes.empty()) {
    out += "[notes]\n";
    for (const auto& n : r.notes) out += "    " + n + "\n";
  }
  return out;
}

}  // namespace sirdelay
