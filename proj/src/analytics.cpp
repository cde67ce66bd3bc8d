#include "sirdelay/analytics.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "sirdelay/characteristic.hpp"

namespace sirdelay {

std::string to_string(RegimeKind kind) {
  switch (kind) {
    case RegimeKind::Converged: return "Converged";
    case RegimeKind::DampedOscillation: return "DampedOscillation";
    case RegimeKind::SustainedOscillation: return "SustainedOscillation";
    case RegimeKind::Diverged: return "Diverged";
    case RegimeKind::Unclassified: return "Unclassified";
  }
  return "?";
}

namespace {

struct Peak {
  double t;
  double value;
};

// Vertex of the parabola y1 + b u + c u^2 through three neighbouring samples.
Peak refine_peak(double t0, double t1, double t2, double y0, double y1, double y2) {
  const double h1 = t1 - t0, h2 = t2 - t1;
  const double d1 = (y1 - y0) / h1, d2 = (y2 - y1) / h2;
  const double c = (d2 - d1) / (h1 + h2);
  const double b = (d1 * h2 + d2 * h1) / (h1 + h2);
  if (!(c < 0.0)) return {t1, y1};
  const double u = std::clamp(-b / (2.0 * c), -h1, h2);
  return {t1 + u, y1 + b * u + c * u * u};
}

}  // namespace

Classification classify(const Trajectory& traj, const std::optional<Equilibrium>& candidate,
                        const ClassifyOptions& opts) {
  const double horizon = traj.horizon();
  const double max_delay = std::max(traj.meta.tau, traj.meta.delta);
  if (horizon < 50.0 || horizon < 10.0 * max_delay)
    throw std::invalid_argument(fmt::format(
        "classify: horizon {:g} must be at least 50 and at least ten times the larger delay {:g}", horizon, max_delay));
  if (!(opts.tail_fraction > 0.0 && opts.tail_fraction <= 1.0))
    throw std::invalid_argument("classify: tail fraction must lie in (0, 1]");

  Classification cls;
  cls.window_start = horizon * (1.0 - opts.tail_fraction);
  cls.window_end = horizon;
  const auto first = static_cast<std::size_t>(
      std::lower_bound(traj.mesh.begin(), traj.mesh.end(), cls.window_start) - traj.mesh.begin());

  for (const State& s : traj.states)
    if (!(s.max_abs() <= opts.divergence_bound)) {
      cls.kind = RegimeKind::Diverged;
      return cls;
    }

  cls.target = candidate ? candidate->state : traj.states.back();
  const double tol = opts.convergence_tol.value_or(1e-2 * (1.0 + cls.target.norm()));
  double mean_y = 0.0;
  for (std::size_t i = first; i < traj.states.size(); ++i) {
    cls.max_deviation = std::max(cls.max_deviation, (traj.states[i] - cls.target).norm());
    mean_y += traj.states[i].y;
  }
  mean_y /= static_cast<double>(traj.states.size() - first);
  if (cls.max_deviation < tol) {
    cls.kind = RegimeKind::Converged;
    return cls;
  }

  const double ref = candidate ? candidate->state.y : mean_y;
  const double noise = 1e-9 * (1.0 + std::abs(ref));
  std::vector<Peak> peaks;
  for (std::size_t i = std::max<std::size_t>(first, 1); i + 1 < traj.states.size(); ++i) {
    const double y0 = traj.states[i - 1].y, y1 = traj.states[i].y, y2 = traj.states[i + 1].y;
    if (!(y1 > y0 && y1 >= y2)) continue;
    const Peak pk = refine_peak(traj.mesh[i - 1], traj.mesh[i], traj.mesh[i + 1], y0, y1, y2);
    if (pk.value - ref > noise) peaks.push_back(pk);
  }
  cls.peaks = static_cast<int>(peaks.size());
  if (peaks.size() < 2) return cls;

  const double amp_first = peaks.front().value - ref;
  const double amp_last = peaks.back().value - ref;
  const double ratio = amp_last / amp_first;
  cls.decay_ratio = ratio;
  if (ratio < opts.damped_below) {
    cls.kind = RegimeKind::DampedOscillation;
    return cls;
  }
  if (ratio >= opts.sustained_above && ratio <= opts.sustained_below &&
      cls.peaks >= opts.min_sustained_peaks) {
    cls.kind = RegimeKind::SustainedOscillation;
    cls.period = (peaks.back().t - peaks.front().t) / static_cast<double>(peaks.size() - 1);
    double sum = 0.0;
    for (const Peak& pk : peaks) sum += pk.value - ref;
    cls.amplitude = sum / static_cast<double>(peaks.size());
  }
  return cls;
}

std::vector<SweepRow> sweep(const ModelSpec& model, const std::vector<DelayPoint>& grid, const HistorySpec& history,
                            const std::optional<Equilibrium>& candidate, const SweepOptions& opts) {
  if (grid.empty()) throw std::invalid_argument("sweep: empty delay grid");
  std::vector<SweepRow> rows(grid.size());

  auto run_row = [&](std::size_t i) {
    SweepRow& row = rows[i];
    row.delays = grid[i];
    row.max_re_lambda = std::numeric_limits<double>::quiet_NaN();
    try {
      const ModelSpec m = model.with_delays(grid[i].tau, grid[i].delta);
      if (candidate) {
        const CharCoeffs cc = char_coeffs(jacobian_coeffs(m, *candidate));
        row.max_re_lambda = char_roots_scan(cc, grid[i].tau, grid[i].delta, opts.box).max_real();
      }
      const Trajectory traj = integrate(m, history, opts.horizon, opts.step.value_or(default_step(m)));
      row.classification = classify(traj, candidate, opts.classify);
    } catch (const std::exception& e) {
      row.error = e.what();
    }
  };

  unsigned n_threads = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
  n_threads = std::min<unsigned>(n_threads, static_cast<unsigned>(grid.size()));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < grid.size(); i = next++) run_row(i);
  };
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < n_threads; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "tau,delta,classification,period,amplitude,max_re_lambda\n";
  auto num = [](double v) { return std::isfinite(v) ? fmt::format("{:.10g}", v) : std::string(); };
  for (const SweepRow& r : rows) {
    std::string kind = "Error", period, amplitude;
    if (r.classification) {
      kind = to_string(r.classification->kind);
      if (r.classification->kind == RegimeKind::SustainedOscillation) {
        period = num(r.classification->period);
        amplitude = num(r.classification->amplitude);
      }
    }
    out += fmt::format("{},{},{},{},{},{}\n", num(r.delays.tau), num(r.delays.delta), kind, period, amplitude,
                       num(r.max_re_lambda));
  }
  return out;
}

}  // namespace sirdelay
