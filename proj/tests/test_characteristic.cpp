#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "sirdelay/characteristic.hpp"
#include "support.hpp"

using namespace sirdelay;
using sirdelay::testing::char_scale;
using sirdelay::testing::random_coeffs;

namespace {

// Eigenvalues of the companion matrix of lambda^3 + p2 lambda^2 + p1 lambda + p0.
std::vector<Complex> companion_roots(double p2, double p1, double p0) {
  Eigen::Matrix3d c;
  c << -p2, -p1, -p0, 1, 0, 0, 0, 1, 0;
  const Eigen::Vector3cd ev = c.eigenvalues();
  return {ev[0], ev[1], ev[2]};
}

double max_real(const std::vector<Complex>& roots) {
  double m = -INFINITY;
  for (const auto& z : roots) m = std::max(m, z.real());
  return m;
}

}  // namespace

TEST_CASE("coefficients from Jacobian aggregates") {
  const JacCoeffs j{.A = -8, .B = -2, .C = 0, .D = 6, .E = 1, .alpha = 1};
  const CharCoeffs cc = char_coeffs(j);
  CHECK(cc.l == 9.0);
  CHECK(cc.m == 8.0);
  CHECK(cc.n == 0.0);
  CHECK(cc.l1 == 12.0);
  CHECK(cc.m1 == 12.0);
  CHECK(cc.n1 == -6.0);
  CHECK_FALSE(std::signbit(char_coeffs(JacCoeffs{.A = -6, .C = 0, .alpha = 1}).n));
}

TEST_CASE("property: characteristic function equals det(lambda I - J0 - J1 e^{-lambda tau} - J2 e^{-lambda(tau+delta)})") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 100; ++trial) {
    const JacCoeffs j{.A = u(rng), .B = u(rng), .C = u(rng), .D = u(rng), .E = u(rng), .alpha = std::abs(u(rng))};
    const double tau = std::abs(u(rng)), delta = std::abs(u(rng));
    const Complex lam(u(rng), u(rng));
    const Complex e1 = std::exp(-lam * tau), e2 = std::exp(-lam * delta);
    // Linearisation: x' = A x + B y + alpha z, y' = C y + D x(t - tau), z' = E y(t - delta) - alpha z.
    Eigen::Matrix3cd m;
    m << lam - j.A, -j.B, -j.alpha, -j.D * e1, lam - j.C, 0.0, 0.0, -j.E * e2, lam + j.alpha;
    const Complex det = m.determinant();
    const Complex f = char_function(char_coeffs(j), tau, delta, lam);
    CHECK(std::abs(f - det) <= 1e-10 * std::max(1.0, std::abs(det)));
  }
}

TEST_CASE("property: derivative matches a complex central difference") {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 100; ++trial) {
    const CharCoeffs cc = random_coeffs(rng);
    const Complex lam(std::uniform_real_distribution<double>(-2, 2)(rng), std::uniform_real_distribution<double>(0, 5)(rng));
    const double h = 1e-6;
    const Complex fd = (char_function(cc, 1.3, 0.7, lam + h) - char_function(cc, 1.3, 0.7, lam - h)) / (2 * h);
    CHECK(std::abs(char_derivative(cc, 1.3, 0.7, lam) - fd) <= 1e-5 * std::max(1.0, std::abs(fd)));
  }
}

TEST_CASE("property: with zero delays the scan agrees with companion-matrix eigenvalues") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 40; ++trial) {
    const CharCoeffs cc = random_coeffs(rng, 3.0);
    const auto want = companion_roots(cc.l, cc.m + cc.l1, cc.n + cc.m1 + cc.n1);
    bool inside = true;
    for (const auto& z : want) inside = inside && z.real() > -19.0 && z.real() < 4.0 && std::abs(z.imag()) < 49.0;
    if (!inside) continue;
    const RootScan scan = char_roots_scan(cc, 0.0, 0.0);
    CHECK(scan.max_real() == doctest::Approx(max_real(want)).epsilon(1e-7).scale(1.0));
    for (const auto& z : want) {
      const Complex up(z.real(), std::abs(z.imag()));
      const bool found = std::any_of(scan.roots.begin(), scan.roots.end(),
                                     [&](const Complex& r) { return std::abs(r - up) < 1e-6 * (1.0 + std::abs(up)); });
      CHECK(found);
    }
  }
}

TEST_CASE("property: scanned roots satisfy F = 0 and are ordered in the upper half plane") {
  std::mt19937_64 rng(24);
  std::uniform_real_distribution<double> d(0.0, 5.0);
  for (int trial = 0; trial < 15; ++trial) {
    const CharCoeffs cc = random_coeffs(rng, 3.0);
    const double tau = d(rng), delta = d(rng);
    const RootScan scan = char_roots_scan(cc, tau, delta);
    for (std::size_t i = 0; i < scan.roots.size(); ++i) {
      const Complex z = scan.roots[i];
      CHECK(z.imag() >= 0.0);
      CHECK(std::abs(char_function(cc, tau, delta, z)) <= 1e-8 * char_scale(cc, tau, delta, z));
      if (i > 0) CHECK(scan.roots[i - 1].real() >= z.real());
    }
  }
}

TEST_CASE("known delay-free spectrum") {
  // lambda^3 + 3 lambda^2 + 2 lambda = lambda (lambda + 1)(lambda + 2)
  const CharCoeffs cc{.l = 3, .m = 2, .n = 0, .l1 = 0, .m1 = 0, .n1 = 0};
  const RootScan scan = char_roots_scan(cc, 1.0, 1.0);
  REQUIRE(scan.roots.size() == 3);
  CHECK(std::abs(scan.roots[0]) < 1e-9);
  CHECK(std::abs(scan.roots[1] + 1.0) < 1e-9);
  CHECK(std::abs(scan.roots[2] + 2.0) < 1e-9);
  CHECK(delay_free_polynomial(cc) == "lambda^3 + 3*lambda^2 + 2*lambda");
}

TEST_CASE("empty scan reports a diagnostic") {
  const CharCoeffs cc{.l = 3, .m = 2, .n = 0};
  SearchBox box;
  box.re_min = 10.0;
  box.re_max = 20.0;
  const RootScan scan = char_roots_scan(cc, 0.0, 0.0, box);
  CHECK(scan.roots.empty());
  CHECK(scan.max_real() == -INFINITY);
  CHECK_FALSE(scan.diagnostic.empty());
}
