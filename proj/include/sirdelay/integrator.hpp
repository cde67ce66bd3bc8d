#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "sirdelay/model.hpp"

namespace sirdelay {

/// Same state on the whole initial interval [-max(tau, delta), 0].
struct ConstantHistory {
  State value;
  bool operator==(const ConstantHistory&) const = default;
};

/// Time-ordered samples, linearly interpolated. Must cover [-max(tau, delta), 0].
struct SampledHistory {
  std::vector<double> times;
  std::vector<State> states;
  bool operator==(const SampledHistory&) const = default;
};

using HistorySpec = std::variant<ConstantHistory, SampledHistory>;

/// History value at t <= 0. Sampled tables are held constant outside their range.
State history_at(const HistorySpec& h, double t);

/// Throws std::invalid_argument when the history is malformed, negative, or does
/// not reach back to -max_delay.
void validate_history(const HistorySpec& h, double max_delay);

struct TrajectoryMeta {
  double step = 0.0;
  double tau = 0.0;
  double delta = 0.0;
  std::uint64_t model_hash = 0;
  bool operator==(const TrajectoryMeta&) const = default;
};

/// Mesh solution with stored derivatives for cubic Hermite dense output.
struct Trajectory {
  std::vector<double> mesh;
  std::vector<State> states;
  std::vector<State> derivatives;
  TrajectoryMeta meta;

  double horizon() const { return mesh.empty() ? 0.0 : mesh.back(); }
  bool operator==(const Trajectory&) const = default;
};

class IntegrationError : public std::runtime_error {
 public:
  enum class Kind { Negativity, BlowUp };

  IntegrationError(Kind kind, double time, const std::string& what)
      : std::runtime_error(what), kind_(kind), time_(time) {}

  Kind kind() const { return kind_; }
  double time() const { return time_; }

 private:
  Kind kind_;
  double time_;
};

inline constexpr double kNegativityTolerance = 1e-6;

/// min(0.01, smallest positive delay / 20), or 0.01 without delays.
double default_step(const ModelSpec& model);

/// Classical RK4 by the method of steps. Delayed values come from the Hermite
/// interpolant of completed steps or from the history. Throws std::invalid_argument
/// for a bad horizon, step or history and IntegrationError when the solution turns
/// negative beyond tolerance or stops being finite.
Trajectory integrate(const ModelSpec& model, const HistorySpec& history, double horizon, double step);

/// Cubic Hermite interpolation, exact at mesh points. Throws std::out_of_range
/// outside [0, horizon].
State dense_eval(const Trajectory& traj, double t);

/// FNV-1a over a canonical text form of the model.
std::uint64_t model_hash(const ModelSpec& model);

/// CSV with header t,x,y,z sampled every `stride` time units (plus the horizon).
std::string trajectory_csv(const Trajectory& traj, double stride = 0.1);

}  // namespace sirdelay
