#include "sirdelay/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sirdelay/numeric.hpp"

namespace sirdelay {

double State::max_abs() const { return std::max({std::abs(x), std::abs(y), std::abs(z)}); }
double State::norm() const { return std::sqrt(x * x + y * y + z * z); }
double State::min_component() const { return std::min({x, y, z}); }
bool State::finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

void validate_params(const Params& p) {
  const std::pair<const char*, double> fields[] = {{"a", p.a},   {"b", p.b}, {"b1", p.b1},
                                                   {"c", p.c},   {"d", p.d}, {"d1", p.d1},
                                                   {"r", p.r},   {"alpha", p.alpha},
                                                   {"tau", p.tau}, {"delta", p.delta}};
  for (const auto& [name, value] : fields) {
    require(std::isfinite(value), std::string("params.") + name + " must be finite");
    require(value >= 0.0, std::string("params.") + name + " must be nonnegative");
  }
  require(p.b1 <= p.b, "params.b1 must not exceed params.b");
}

bool is_linear_one(const ResponseFn& fn) {
  const auto* lin = std::get_if<response::Linear>(&fn);
  return lin != nullptr && lin->k == 1.0;
}

}  // namespace

ModelSpec::ModelSpec(Params params, ResponseFn f, ResponseFn V, ResponseFn P)
    : params_(params), f_(std::move(f)), V_(std::move(V)), P_(std::move(P)) {
  validate_params(params_);
  require(arity(f_) != Arity::Unary, "f must be a two-argument response function, got '" +
                                         std::string(kind_name(f_)) + "'");
  require(arity(V_) != Arity::Binary, "V must be a one-argument response function, got '" +
                                          std::string(kind_name(V_)) + "'");
  require(arity(P_) != Arity::Binary, "P must be a one-argument response function, got '" +
                                          std::string(kind_name(P_)) + "'");
  validate(f_);
  validate(V_);
  validate(P_);
}

ModelSpec ModelSpec::with_delays(double tau, double delta) const {
  Params p = params_;
  p.tau = tau;
  p.delta = delta;
  return ModelSpec(p, f_, V_, P_);
}

bool ModelSpec::is_bilinear_special_case() const {
  return std::holds_alternative<response::Bilinear>(f_) && is_linear_one(V_) && is_linear_one(P_);
}

State eval_rhs(const ModelSpec& model, const State& now, double x_tau, double y_delta) {
  if (!now.finite() || !std::isfinite(x_tau) || !std::isfinite(y_delta))
    throw std::domain_error("eval_rhs: non-finite argument");
  const Params& p = model.params();
  const double infection = eval(model.f(), now.x, now.y);
  const double delayed_infection = eval(model.f(), x_tau, now.y);
  return {p.a - p.b * infection - p.d * now.x - p.c * eval(model.V(), now.x) + p.alpha * now.z,
          p.b1 * delayed_infection - p.r * eval(model.P(), now.y) - p.d1 * now.y,
          p.r * eval(model.P(), y_delta) - p.alpha * now.z};
}

State eval_rhs_stationary(const ModelSpec& model, const State& s) { return eval_rhs(model, s, s.x, s.y); }

std::string to_string(EquilibriumKind kind) {
  return kind == EquilibriumKind::DiseaseFree ? "disease-free" : "endemic";
}

bool endemic_existence_on_boundary(const ModelSpec& model) {
  const Params& p = model.params();
  if (p.b1 == 0.0 || p.c + p.d == 0.0) return false;
  return nearly_equal(p.a / (p.c + p.d), (p.d1 + p.r) / p.b1);
}

JacCoeffs jacobian_coeffs(const ModelSpec& model, const State& at) {
  const Params& p = model.params();
  const double fx = partial(model.f(), 0, at.x, at.y);
  const double fy = partial(model.f(), 1, at.x, at.y);
  const double dV = derivative(model.V(), at.x);
  const double dP = derivative(model.P(), at.y);
  if (!std::isfinite(fx) || !std::isfinite(fy) || !std::isfinite(dV) || !std::isfinite(dP))
    throw std::domain_error("jacobian_coeffs: response partial undefined at the equilibrium");
  JacCoeffs j;
  j.A = -p.b * fx - p.c * dV - p.d;
  j.B = -p.b * fy;
  j.C = p.b1 * fy - p.d1 - p.r * dP;
  j.D = p.b1 * fx;
  j.E = p.r * dP;
  j.alpha = p.alpha;
  return j;
}

}  // namespace sirdelay
