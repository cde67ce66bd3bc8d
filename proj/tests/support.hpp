#pragma once

#include <random>

#include "sirdelay/characteristic.hpp"
#include "sirdelay/model.hpp"

namespace sirdelay::testing {

/// f = x y, V = x, P = y with the given rates.
inline ModelSpec bilinear_model(Params p) {
  return ModelSpec(p, response::Bilinear{}, response::Linear{1.0}, response::Linear{1.0});
}

inline Params base_params() {
  return Params{.a = 10, .b = 1, .b1 = 1, .c = 1, .d = 1, .d1 = 1, .r = 1, .alpha = 1, .tau = 0, .delta = 0};
}

/// Characteristic coefficients drawn uniformly from [-scale, scale].
inline CharCoeffs random_coeffs(std::mt19937_64& rng, double scale = 5.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  return {u(rng), u(rng), u(rng), u(rng), u(rng), u(rng)};
}

/// Largest term magnitude of F at lambda, the natural scale for residual checks.
inline double char_scale(const CharCoeffs& cc, double tau, double delta, Complex lambda) {
  const double a = std::abs(lambda);
  const double e1 = std::abs(std::exp(-lambda * tau)), e2 = std::abs(std::exp(-lambda * (tau + delta)));
  return std::max({1.0, a * a * a, std::abs(cc.l) * a * a, std::abs(cc.m) * a, std::abs(cc.n),
                   (std::abs(cc.l1) * a + std::abs(cc.m1)) * e1, std::abs(cc.n1) * e2});
}

}  // namespace sirdelay::testing
