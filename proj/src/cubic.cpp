#include "sirdelay/cubic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sirdelay {

double eval_cubic(double c3, double c2, double c1, double c0, double t) { return ((c3 * t + c2) * t + c1) * t + c0; }

namespace {

std::vector<double> solve_quadratic(double a, double b, double c) {
  if (a == 0.0) {
    if (b == 0.0) return {};
    return {-c / b};
  }
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) {
    // Tangency lost to rounding still counts as a double root.
    if (disc > -1e-14 * b * b) return {-b / (2.0 * a)};
    return {};
  }
  // Citardauq form avoids cancellation.
  const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
  std::vector<double> roots;
  if (q != 0.0) roots = {q / a, c / q};
  else roots = {0.0};
  return roots;
}

std::vector<double> solve_monic_cubic(double a, double b, double c) {
  // t^3 + a t^2 + b t + c, substitute t = s - a/3.
  const double a3 = a / 3.0;
  const double p = b - a * a3;
  const double q = 2.0 * a3 * a3 * a3 - a3 * b + c;
  const double half_q = 0.5 * q;
  const double third_p = p / 3.0;
  const double disc = half_q * half_q + third_p * third_p * third_p;

  std::vector<double> roots;
  if (disc < 0.0) {
    const double r = std::sqrt(-third_p);
    const double cos_arg = std::clamp(-half_q / (r * r * r), -1.0, 1.0);
    const double phi = std::acos(cos_arg);
    for (int k = 0; k < 3; ++k)
      roots.push_back(2.0 * r * std::cos((phi + 2.0 * std::numbers::pi * k) / 3.0) - a3);
  } else {
    const double sq = std::sqrt(disc);
    const double u = std::cbrt(-half_q + sq);
    const double v = std::cbrt(-half_q - sq);
    roots.push_back(u + v - a3);
    if (disc == 0.0 || std::abs(disc) <= 1e-14 * (half_q * half_q))
      roots.push_back(-0.5 * (u + v) - a3);  // double root
  }
  return roots;
}

}  // namespace

std::vector<double> solve_cubic_real(double c3, double c2, double c1, double c0) {
  const double scale = std::max({std::abs(c3), std::abs(c2), std::abs(c1), std::abs(c0)});
  if (!(scale > 0.0)) {
    if (std::isnan(scale)) throw std::domain_error("solve_cubic_real: non-finite coefficient");
    throw std::domain_error("solve_cubic_real: identically zero polynomial");
  }
  if (!std::isfinite(scale)) throw std::domain_error("solve_cubic_real: non-finite coefficient");

  auto negligible = [&](double v) { return std::abs(v) <= 1e-14 * scale; };

  std::vector<double> roots;
  if (!negligible(c3)) {
    roots = solve_monic_cubic(c2 / c3, c1 / c3, c0 / c3);
  } else if (!negligible(c2)) {
    roots = solve_quadratic(c2, c1, c0);
  } else if (!negligible(c1)) {
    roots = {-c0 / c1};
  } else {
    return {};  // nonzero constant
  }

  // Newton polish against the full (unreduced) polynomial.
  for (double& t : roots) {
    for (int k = 0; k < 4; ++k) {
      const double f = eval_cubic(c3, c2, c1, c0, t);
      const double df = (3.0 * c3 * t + 2.0 * c2) * t + c1;
      if (df == 0.0 || f == 0.0) break;
      const double next = t - f / df;
      if (!std::isfinite(next) || std::abs(eval_cubic(c3, c2, c1, c0, next)) >= std::abs(f)) break;
      t = next;
    }
  }

  std::sort(roots.begin(), roots.end());
  std::vector<double> merged;
  for (double t : roots)
    if (merged.empty() || std::abs(t - merged.back()) > 1e-10 * std::max(1.0, std::abs(t))) merged.push_back(t);
  return merged;
}

}  // namespace sirdelay
