#include "sirdelay/integrator.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace sirdelay {

namespace {

struct HistoryAt {
  const double t;
  State operator()(const ConstantHistory& c) const { return c.value; }
  State operator()(const SampledHistory& s) const {
    if (s.times.empty()) throw std::invalid_argument("history: empty sample table");
    if (t <= s.times.front()) return s.states.front();
    if (t >= s.times.back()) return s.states.back();
    const auto it = std::upper_bound(s.times.begin(), s.times.end(), t);
    const std::size_t i = static_cast<std::size_t>(it - s.times.begin());
    const double w = (t - s.times[i - 1]) / (s.times[i] - s.times[i - 1]);
    return s.states[i - 1] * (1.0 - w) + s.states[i] * w;
  }
};

State hermite(double t0, double t1, const State& y0, const State& y1, const State& f0, const State& f1, double t) {
  const double h = t1 - t0;
  const double s = (t - t0) / h;
  const double s2 = s * s, s3 = s2 * s;
  const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
  const double h10 = s3 - 2.0 * s2 + s;
  const double h01 = -2.0 * s3 + 3.0 * s2;
  const double h11 = s3 - s2;
  return y0 * h00 + f0 * (h10 * h) + y1 * h01 + f1 * (h11 * h);
}

State interpolate(const Trajectory& traj, double t) {
  const auto& mesh = traj.mesh;
  if (t >= mesh.back()) return traj.states.back();
  auto it = std::upper_bound(mesh.begin(), mesh.end(), t);
  const std::size_t i = static_cast<std::size_t>(it - mesh.begin());  // mesh[i-1] <= t < mesh[i]
  if (mesh[i - 1] == t) return traj.states[i - 1];
  return hermite(mesh[i - 1], mesh[i], traj.states[i - 1], traj.states[i], traj.derivatives[i - 1],
                 traj.derivatives[i], t);
}

double min_positive_delay(const Params& p) {
  double m = 0.0;
  for (double d : {p.tau, p.delta})
    if (d > 0.0) m = m == 0.0 ? d : std::min(m, d);
  return m;
}

void check_state(const State& s, double t) {
  if (!s.finite())
    throw IntegrationError(IntegrationError::Kind::BlowUp, t, fmt::format("blow-up: non-finite state at t = {:g}", t));
  if (s.min_component() < -kNegativityTolerance)
    throw IntegrationError(IntegrationError::Kind::Negativity, t,
                           fmt::format("negativity violation at t = {:g}: ({:g}, {:g}, {:g})", t, s.x, s.y, s.z));
}

}  // namespace

State history_at(const HistorySpec& h, double t) { return std::visit(HistoryAt{t}, h); }

void validate_history(const HistorySpec& h, double max_delay) {
  if (const auto* c = std::get_if<ConstantHistory>(&h)) {
    if (!c->value.finite() || c->value.min_component() < 0.0)
      throw std::invalid_argument("history: constant value must be finite and nonnegative");
    return;
  }
  const auto& s = std::get<SampledHistory>(h);
  if (s.times.empty() || s.times.size() != s.states.size())
    throw std::invalid_argument("history: times and states must be nonempty and of equal length");
  for (std::size_t i = 0; i < s.times.size(); ++i) {
    if (!std::isfinite(s.times[i]) || s.times[i] > 0.0)
      throw std::invalid_argument("history: sample times must be finite and <= 0");
    if (i > 0 && !(s.times[i] > s.times[i - 1]))
      throw std::invalid_argument("history: sample times must be strictly increasing");
    if (!s.states[i].finite() || s.states[i].min_component() < 0.0)
      throw std::invalid_argument("history: sample states must be finite and nonnegative");
  }
  if (s.times.back() != 0.0) throw std::invalid_argument("history: last sample must be at t = 0");
  if (s.times.front() > -max_delay)
    throw std::invalid_argument(fmt::format("history: samples must reach back to t = {:g}", -max_delay));
}

double default_step(const ModelSpec& model) {
  const double m = min_positive_delay(model.params());
  return m > 0.0 ? std::min(0.01, m / 20.0) : 0.01;
}

Trajectory integrate(const ModelSpec& model, const HistorySpec& history, double horizon, double step) {
  const Params& p = model.params();
  if (!std::isfinite(horizon) || horizon <= 0.0) throw std::invalid_argument("integrate: horizon must be positive");
  if (!std::isfinite(step) || step <= 0.0) throw std::invalid_argument("integrate: step must be positive");
  const double min_delay = min_positive_delay(p);
  if (min_delay > 0.0 && step > min_delay * (1.0 + 1e-12))
    throw std::invalid_argument(fmt::format("integrate: step {:g} exceeds the smallest positive delay {:g}", step, min_delay));
  if (min_delay == 0.0 && step > horizon / 100.0 * (1.0 + 1e-12))
    throw std::invalid_argument(fmt::format("integrate: step {:g} exceeds horizon/100 without delays", step));
  validate_history(history, std::max(p.tau, p.delta));

  const auto n_steps = static_cast<std::size_t>(std::ceil(horizon / step - 1e-9));
  Trajectory traj;
  traj.meta = {step, p.tau, p.delta, model_hash(model)};
  traj.mesh.reserve(n_steps + 1);
  traj.states.reserve(n_steps + 1);
  traj.derivatives.reserve(n_steps + 1);

  // Delayed component at time s; a zero delay reads the stage state itself.
  auto past = [&](double s) { return s <= 0.0 ? history_at(history, s) : interpolate(traj, s); };
  auto rhs = [&](double t, const State& u) {
    const double x_tau = p.tau > 0.0 ? past(t - p.tau).x : u.x;
    const double y_delta = p.delta > 0.0 ? past(t - p.delta).y : u.y;
    return eval_rhs(model, u, x_tau, y_delta);
  };

  State u = history_at(history, 0.0);
  traj.mesh.push_back(0.0);
  traj.states.push_back(u);
  traj.derivatives.push_back(rhs(0.0, u));

  for (std::size_t i = 1; i <= n_steps; ++i) {
    const double t = traj.mesh.back();
    const double t_next = i == n_steps ? horizon : static_cast<double>(i) * step;
    const double h = t_next - t;
    try {
      const State k1 = traj.derivatives.back();
      const State k2 = rhs(t + 0.5 * h, u + k1 * (0.5 * h));
      const State k3 = rhs(t + 0.5 * h, u + k2 * (0.5 * h));
      const State k4 = rhs(t + h, u + k3 * h);
      u = u + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
      check_state(u, t_next);
      traj.mesh.push_back(t_next);
      traj.states.push_back(u);
      traj.derivatives.push_back(rhs(t_next, u));
      if (!traj.derivatives.back().finite())
        throw IntegrationError(IntegrationError::Kind::BlowUp, t_next,
                               fmt::format("blow-up: non-finite derivative at t = {:g}", t_next));
    } catch (const std::domain_error&) {
      throw IntegrationError(IntegrationError::Kind::BlowUp, t_next,
                             fmt::format("blow-up: non-finite value in the step ending at t = {:g}", t_next));
    }
  }
  return traj;
}

State dense_eval(const Trajectory& traj, double t) {
  if (traj.mesh.empty() || !(t >= 0.0) || t > traj.horizon())
    throw std::out_of_range(fmt::format("dense_eval: t = {:g} outside [0, {:g}]", t, traj.horizon()));
  return interpolate(traj, t);
}

std::uint64_t model_hash(const ModelSpec& model) {
  const Params& p = model.params();
  const std::string text =
      fmt::format("{:a},{:a},{:a},{:a},{:a},{:a},{:a},{:a},{:a},{:a}|{}|{}|{}", p.a, p.b, p.b1, p.c, p.d, p.d1, p.r,
                  p.alpha, p.tau, p.delta, describe(model.f(), "x", "y"), describe(model.V(), "x"), describe(model.P(), "y"));
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

std::string trajectory_csv(const Trajectory& traj, double stride) {
  if (!(stride > 0.0)) throw std::invalid_argument("trajectory_csv: stride must be positive");
  std::string out = "t,x,y,z\n";
  const double horizon = traj.horizon();
  const auto n = static_cast<std::size_t>(std::floor(horizon / stride + 1e-9));
  auto row = [&](double t) {
    const State s = dense_eval(traj, t);
    out += fmt::format("{:.10g},{:.12g},{:.12g},{:.12g}\n", t, s.x, s.y, s.z);
  };
  for (std::size_t k = 0; k <= n; ++k) row(std::min(static_cast<double>(k) * stride, horizon));
  if (static_cast<double>(n) * stride < horizon * (1.0 - 1e-12)) row(horizon);
  return out;
}

}  // namespace sirdelay
