#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

#include "sirdelay/model.hpp"
#include "sirdelay/numeric.hpp"

namespace sirdelay {

namespace {

constexpr double kResidualTol = 1e-10;
constexpr double kDedupDistance = 1e-8;
constexpr int kGridPerAxis = 8;

Equilibrium make_equilibrium(const ModelSpec& model, const State& s, EquilibriumKind kind) {
  return {s, kind, eval_rhs_stationary(model, s).max_abs()};
}

Eigen::Matrix3d stationary_jacobian(const ModelSpec& model, const State& s) {
  const JacCoeffs j = jacobian_coeffs(model, s);
  Eigen::Matrix3d m;
  // Delayed and current arguments coincide at a constant state.
  m << j.A, j.B, j.alpha,  //
      j.D, j.C, 0.0,       //
      0.0, j.E, -j.alpha;
  return m;
}

Eigen::Vector3d as_vector(const State& s) { return {s.x, s.y, s.z}; }
State as_state(const Eigen::Vector3d& v) { return {v[0], v[1], v[2]}; }

std::optional<State> damped_newton(const ModelSpec& model, State s) {
  double res = eval_rhs_stationary(model, s).max_abs();
  for (int iter = 0; iter < 100; ++iter) {
    if (res < 1e-14) break;
    const Eigen::Vector3d g = as_vector(eval_rhs_stationary(model, s));
    const Eigen::Matrix3d jac = stationary_jacobian(model, s);
    const auto lu = jac.fullPivLu();
    if (!lu.isInvertible()) return std::nullopt;
    const Eigen::Vector3d step = lu.solve(g);
    if (!step.allFinite()) return std::nullopt;

    double lambda = 1.0;
    bool accepted = false;
    for (int k = 0; k < 30; ++k, lambda *= 0.5) {
      const State trial = as_state(as_vector(s) - lambda * step);
      if (!trial.finite()) continue;
      double trial_res;
      try {
        trial_res = eval_rhs_stationary(model, trial).max_abs();
      } catch (const std::domain_error&) {
        continue;
      }
      if (std::isfinite(trial_res) && trial_res < res) {
        s = trial;
        res = trial_res;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  if (!(res < kResidualTol)) return std::nullopt;
  return s;
}

void push_unique(std::vector<Equilibrium>& out, const Equilibrium& eq) {
  for (const auto& e : out)
    if ((e.state - eq.state).norm() < kDedupDistance) return;
  out.push_back(eq);
}

}  // namespace

DiseaseFreeSearch find_disease_free(const ModelSpec& model) {
  if (!vanishes_without_infection(model.f()))
    return {std::nullopt, "incidence f(x, 0) is not identically zero; no disease-free state can be stationary"};
  const Params& p = model.params();
  if (p.d <= 0.0) return {std::nullopt, "susceptible removal rate d is zero; bracket [0, a/d] undefined"};

  auto g = [&](double x) { return p.a - p.d * x - p.c * eval(model.V(), x); };
  double lo = 0.0;
  double hi = p.a / p.d;
  double glo = g(lo);
  double ghi = g(hi);
  if (glo == 0.0) hi = lo;
  else if (ghi == 0.0) lo = hi;
  else if ((glo > 0.0) == (ghi > 0.0))
    return {std::nullopt, "a - d x - c V(x) has no sign change on [0, a/d]"};

  for (int iter = 0; iter < 200 && hi - lo > 2.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, hi);
       ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double gm = g(mid);
    if (gm == 0.0) {
      lo = hi = mid;
      break;
    }
    if ((gm > 0.0) == (glo > 0.0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  const double x = std::abs(g(lo)) <= std::abs(g(hi)) ? lo : hi;
  if (std::abs(g(x)) >= 1e-12)
    return {std::nullopt, "bisection stalled with residual above 1e-12"};
  return {make_equilibrium(model, {x, 0.0, 0.0}, EquilibriumKind::DiseaseFree), ""};
}

std::vector<Equilibrium> find_endemic_newton(const ModelSpec& model) {
  const Params& p = model.params();
  const double upper = p.d > 0.0 ? p.a / p.d : p.a;
  std::vector<Equilibrium> found;
  for (int i = 0; i < kGridPerAxis; ++i)
    for (int j = 0; j < kGridPerAxis; ++j)
      for (int k = 0; k < kGridPerAxis; ++k) {
        const double step = upper / (kGridPerAxis - 1);
        const State start{i * step, j * step, k * step};
        std::optional<State> root;
        try {
          root = damped_newton(model, start);
        } catch (const std::domain_error&) {
          continue;
        }
        if (!root) continue;
        State s = *root;
        if (s.min_component() < -1e-12 || s.y <= 1e-9) continue;
        s = {std::max(s.x, 0.0), s.y, std::max(s.z, 0.0)};
        const Equilibrium eq = make_equilibrium(model, s, EquilibriumKind::Endemic);
        if (eq.residual < kResidualTol) push_unique(found, eq);
      }
  std::sort(found.begin(), found.end(), [](const Equilibrium& a, const Equilibrium& b) {
    return std::tie(a.state.x, a.state.y, a.state.z) < std::tie(b.state.x, b.state.y, b.state.z);
  });
  return found;
}

std::vector<Equilibrium> find_endemic(const ModelSpec& model) {
  if (!model.is_bilinear_special_case()) return find_endemic_newton(model);

  const Params& p = model.params();
  if (p.b1 == 0.0 || p.alpha == 0.0) return {};
  const double x = (p.d1 + p.r) / p.b1;
  const double lhs = x;
  const double rhs = p.c + p.d > 0.0 ? p.a / (p.c + p.d) : std::numeric_limits<double>::infinity();
  // Strict inequality: the boundary a/(c+d) == (d1+r)/b1 collapses onto the disease-free state.
  if (!(lhs < rhs) || nearly_equal(lhs, rhs)) return {};
  const double denom = p.b * p.d1 + p.r * (p.b - p.b1);
  if (denom <= 0.0) return {};
  const double y = (p.b1 * p.a - (p.c + p.d) * (p.d1 + p.r)) / denom;
  const double z = p.r / p.alpha * y;
  return {make_equilibrium(model, {x, y, z}, EquilibriumKind::Endemic)};
}

std::vector<Equilibrium> find_equilibria(const ModelSpec& model) {
  std::vector<Equilibrium> out;
  if (auto dfe = find_disease_free(model); dfe.equilibrium) out.push_back(*dfe.equilibrium);
  for (const auto& e : find_endemic(model)) out.push_back(e);
  return out;
}

}  // namespace sirdelay
