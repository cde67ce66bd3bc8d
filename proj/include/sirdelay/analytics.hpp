#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sirdelay/characteristic.hpp"
#include "sirdelay/integrator.hpp"
#include "sirdelay/model.hpp"

namespace sirdelay {

enum class RegimeKind { Converged, DampedOscillation, SustainedOscillation, Diverged, Unclassified };

std::string to_string(RegimeKind kind);

/// Long-run behaviour of a trajectory over the analysed window.
///
/// Only the fields relevant to `kind` are meaningful: target and max_deviation for
/// Converged, decay_ratio for DampedOscillation, period and amplitude for
/// SustainedOscillation.
struct Classification {
  RegimeKind kind = RegimeKind::Unclassified;
  State target;
  double max_deviation = 0.0;
  double decay_ratio = 0.0;
  double period = 0.0;
  double amplitude = 0.0;
  int peaks = 0;
  double window_start = 0.0;
  double window_end = 0.0;
};

struct ClassifyOptions {
  double tail_fraction = 0.5;
  std::optional<double> convergence_tol;  // default 1e-2 (1 + |candidate|)
  double divergence_bound = 1e6;
  double damped_below = 0.9;    // last/first peak amplitude
  double sustained_above = 0.9;
  double sustained_below = 1.1;
  int min_sustained_peaks = 3;
};

/// Classifies the trailing part of a trajectory from the infected component.
///
/// Amplitudes are measured from the candidate's y (or from the window mean when no
/// candidate is given). Throws std::invalid_argument when the horizon is shorter
/// than 50 or than ten times the larger delay.
Classification classify(const Trajectory& traj, const std::optional<Equilibrium>& candidate,
                        const ClassifyOptions& opts = {});

struct DelayPoint {
  double tau = 0.0;
  double delta = 0.0;
  bool operator==(const DelayPoint&) const = default;
};

struct SweepRow {
  DelayPoint delays;
  std::optional<Classification> classification;  // empty when the row failed
  double max_re_lambda = 0.0;                    // NaN without a candidate equilibrium
  std::string error;
};

struct SweepOptions {
  double horizon = 200.0;
  std::optional<double> step;  // default_step per row when unset
  ClassifyOptions classify;
  SearchBox box;
  unsigned threads = 0;  // 0 = hardware concurrency
};

/// One integration and classification per delay pair, plus the rightmost
/// characteristic root at the candidate for cross-reference. Rows come back in
/// grid order. Integration errors are recorded in the row.
std::vector<SweepRow> sweep(const ModelSpec& model, const std::vector<DelayPoint>& grid, const HistorySpec& history,
                            const std::optional<Equilibrium>& candidate, const SweepOptions& opts = {});

/// tau,delta,classification,period,amplitude,max_re_lambda
std::string sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace sirdelay
