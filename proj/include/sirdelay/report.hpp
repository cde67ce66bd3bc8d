#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "sirdelay/analytics.hpp"
#include "sirdelay/characteristic.hpp"
#include "sirdelay/criteria.hpp"
#include "sirdelay/model.hpp"

namespace sirdelay {

/// A rightmost-root scan used to confirm or contradict one criterion.
struct OracleProbe {
  std::string criterion;
  double tau = 0.0;
  double delta = 0.0;
  double max_re = 0.0;
  std::string expectation;  // e.g. "max Re < 0"
  bool agrees = true;
};

struct StabilityReport {
  Equilibrium equilibrium;
  JacCoeffs jac;
  CharCoeffs cc;
  double tau = 0.0;
  double delta = 0.0;

  DelayFreeResult delay_free;
  TauPersistenceResult tau_persistence;
  TauCriticalResult tau_only;
  DeltaResult delta_only;
  CombinedResult combined;
  GlobalResult global;

  std::vector<Complex> oracle_roots;  // at (tau, delta), descending real part
  std::string oracle_diagnostic;
  std::vector<OracleProbe> probes;
  std::vector<std::string> notes;  // disagreements and reference-value discrepancies
};

/// Evaluates every criterion at `focus` with the model's delays and cross-checks
/// each verdict against root scans. `all` is the full equilibrium list (needed by
/// the global criteria).
StabilityReport stability_report(const ModelSpec& model, const Equilibrium& focus, const std::vector<Equilibrium>& all,
                                 const SearchBox& box = {});

/// Compares pipeline values against externally supplied reference values and adds
/// a note per mismatch. Recognised keys: characteristic_polynomial (string),
/// pseudo_delay_cubic ([c3, c2, c1, c0]), delay_free_roots (numbers), tau_plus,
/// equilibrium ([x, y, z]).
void annotate_reference_values(StabilityReport& report, const nlohmann::json& reference);

nlohmann::json to_json(const StabilityReport& report);

/// Human-readable table, one block per criterion.
std::string to_table(const StabilityReport& report);

nlohmann::json to_json(const Equilibrium& eq);
nlohmann::json to_json(const Classification& c);

/// Mirror of sweep_csv with the full classification and any row error.
nlohmann::json sweep_json(const std::vector<SweepRow>& rows);

/// {"t": [...], "x": [...], "y": [...], "z": [...]} sampled every `stride`.
nlohmann::json trajectory_json(const Trajectory& traj, double stride = 0.1);
nlohmann::json to_json(const Inequality& q);

}  // namespace sirdelay
