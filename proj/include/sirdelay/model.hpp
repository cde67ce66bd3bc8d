#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "sirdelay/response.hpp"

namespace sirdelay {

/// Rate constants and delays of the delayed three-compartment system.
///
///   x' = a - b f(x, y) - d x - c V(x) + alpha z
///   y' = b1 f(x(t - tau), y) - r P(y) - d1 y
///   z' = r P(y(t - delta)) - alpha z
struct Params {
  double a = 0.0;      // susceptible inflow
  double b = 0.0;      // contact rate
  double b1 = 0.0;     // conversion rate, b1 <= b
  double c = 0.0;      // vaccination rate
  double d = 0.0;      // susceptible removal
  double d1 = 0.0;     // infected removal
  double r = 0.0;      // treatment rate
  double alpha = 0.0;  // re-susceptibility rate
  double tau = 0.0;    // incubation delay
  double delta = 0.0;  // recovery delay

  bool operator==(const Params&) const = default;
};

struct State {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  bool operator==(const State&) const = default;

  State operator+(const State& o) const { return {x + o.x, y + o.y, z + o.z}; }
  State operator-(const State& o) const { return {x - o.x, y - o.y, z - o.z}; }
  State operator*(double s) const { return {x * s, y * s, z * s}; }
  friend State operator*(double s, const State& v) { return v * s; }

  double max_abs() const;
  double norm() const;
  double min_component() const;
  bool finite() const;
};

/// Parameters plus the incidence (f), vaccination (V) and recovery (P) forms.
/// Construction validates every invariant and throws std::invalid_argument.
class ModelSpec {
 public:
  ModelSpec(Params params, ResponseFn f, ResponseFn V, ResponseFn P);

  const Params& params() const { return params_; }
  const ResponseFn& f() const { return f_; }
  const ResponseFn& V() const { return V_; }
  const ResponseFn& P() const { return P_; }

  /// Same functions with different delays.
  ModelSpec with_delays(double tau, double delta) const;

  /// f = x*y, V = x, P = y: the case with closed-form equilibria and Lyapunov results.
  bool is_bilinear_special_case() const;

  bool operator==(const ModelSpec&) const = default;

 private:
  Params params_;
  ResponseFn f_;
  ResponseFn V_;
  ResponseFn P_;
};

/// Right-hand side with the delayed arguments supplied explicitly.
/// Throws std::domain_error on non-finite input.
State eval_rhs(const ModelSpec& model, const State& now, double x_tau, double y_delta);

/// Right-hand side at a constant state (delayed arguments equal to the current ones).
State eval_rhs_stationary(const ModelSpec& model, const State& s);

enum class EquilibriumKind { DiseaseFree, Endemic };

std::string to_string(EquilibriumKind kind);

struct Equilibrium {
  State state;
  EquilibriumKind kind = EquilibriumKind::DiseaseFree;
  double residual = 0.0;
};

struct DiseaseFreeSearch {
  std::optional<Equilibrium> equilibrium;
  std::string reason;  // empty when found
};

/// Solves a - d x - c V(x) = 0 by bisection on [0, a/d].
DiseaseFreeSearch find_disease_free(const ModelSpec& model);

/// Endemic (y > 0) equilibria. Closed form for the bilinear special case, otherwise
/// damped Newton from a deterministic 8x8x8 grid of starts.
std::vector<Equilibrium> find_endemic(const ModelSpec& model);

/// The generic multi-start Newton route, exposed so it can be checked against the
/// closed form.
std::vector<Equilibrium> find_endemic_newton(const ModelSpec& model);

/// Disease-free (when it exists) followed by endemic equilibria.
std::vector<Equilibrium> find_equilibria(const ModelSpec& model);

/// True when a/(c+d) and (d1+r)/b1 agree within the equality band, i.e. the
/// existence condition for the bilinear endemic state sits exactly on its boundary.
bool endemic_existence_on_boundary(const ModelSpec& model);

/// Partial-derivative aggregates of the linearisation around an equilibrium.
struct JacCoeffs {
  double A = 0.0;  // -b f_x - c V' - d
  double B = 0.0;  // -b f_y
  double C = 0.0;  // b1 f_y - d1 - r P'
  double D = 0.0;  // b1 df/dx_tau
  double E = 0.0;  // r dP/dy_delta
  double alpha = 0.0;
};

JacCoeffs jacobian_coeffs(const ModelSpec& model, const State& at);
inline JacCoeffs jacobian_coeffs(const ModelSpec& model, const Equilibrium& eq) {
  return jacobian_coeffs(model, eq.state);
}

}  // namespace sirdelay
