#include "sirdelay/characteristic.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace sirdelay {

CharCoeffs char_coeffs(const JacCoeffs& j) {
  CharCoeffs cc;
  cc.l = j.alpha - (j.A + j.C);
  cc.m = j.A * j.C - j.alpha * (j.A + j.C);
  cc.n = j.alpha * j.C * j.A;
  cc.l1 = -j.B * j.D;
  cc.m1 = -j.B * j.alpha * j.D;
  cc.n1 = -j.D * j.alpha * j.E;
  // Adding +0.0 turns a negative zero into a positive one so it prints as "0".
  for (double* v : {&cc.l, &cc.m, &cc.n, &cc.l1, &cc.m1, &cc.n1}) *v += 0.0;
  return cc;
}

namespace {

struct Terms {
  Complex f, df, d2f;
  double scale;
};

Terms evaluate(const CharCoeffs& cc, double tau, double delta, Complex lam) {
  const double theta = tau + delta;
  const Complex e1 = std::exp(-lam * tau);
  const Complex e2 = std::exp(-lam * theta);
  const Complex lin = cc.l1 * lam + cc.m1;
  Terms t;
  t.f = ((lam + cc.l) * lam + cc.m) * lam + cc.n + lin * e1 + cc.n1 * e2;
  t.df = (3.0 * lam + 2.0 * cc.l) * lam + cc.m + cc.l1 * e1 - tau * lin * e1 - theta * cc.n1 * e2;
  t.d2f = 6.0 * lam + 2.0 * cc.l - 2.0 * tau * cc.l1 * e1 + tau * tau * lin * e1 + theta * theta * cc.n1 * e2;
  const double r = std::abs(lam);
  t.scale = r * r * r + std::abs(cc.l) * r * r + std::abs(cc.m) * r + std::abs(cc.n) +
            (std::abs(cc.l1) * r + std::abs(cc.m1)) * std::abs(e1) + std::abs(cc.n1) * std::abs(e2);
  return t;
}

bool accepted(const Terms& t) {
  return std::isfinite(t.scale) && std::abs(t.f) < 1e-9 * std::max(1.0, t.scale);
}

// Schroeder's iteration on F/F': quadratic for simple and multiple roots alike.
std::optional<Complex> refine(const CharCoeffs& cc, double tau, double delta, Complex lam) {
  for (int it = 0; it < 80; ++it) {
    const Terms t = evaluate(cc, tau, delta, lam);
    if (!std::isfinite(t.scale)) return std::nullopt;
    if (t.f == Complex(0.0)) return lam;
    const Complex denom = t.df * t.df - t.f * t.d2f;
    Complex step;
    if (std::abs(denom) > 0.0) step = t.f * t.df / denom;
    else if (std::abs(t.df) > 0.0) step = t.f / t.df;
    else return std::nullopt;
    lam -= step;
    if (!std::isfinite(lam.real()) || !std::isfinite(lam.imag())) return std::nullopt;
    if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(lam))) break;
  }
  const Terms t = evaluate(cc, tau, delta, lam);
  if (!accepted(t)) return std::nullopt;
  return lam;
}

}  // namespace

Complex char_function(const CharCoeffs& cc, double tau, double delta, Complex lambda) {
  return evaluate(cc, tau, delta, lambda).f;
}

Complex char_derivative(const CharCoeffs& cc, double tau, double delta, Complex lambda) {
  return evaluate(cc, tau, delta, lambda).df;
}

double RootScan::max_real() const {
  return roots.empty() ? -std::numeric_limits<double>::infinity() : roots.front().real();
}

RootScan char_roots_scan(const CharCoeffs& cc, double tau, double delta, const SearchBox& box) {
  const int nr = std::max(box.re_points, 3);
  const int ni = std::max(box.im_points, 3);
  const double dr = (box.re_max - box.re_min) / (nr - 1);
  const double di = (box.im_max - box.im_min) / (ni - 1);

  std::vector<double> mag(static_cast<std::size_t>(nr) * ni);
  auto at = [&](int i, int k) -> double& { return mag[static_cast<std::size_t>(i) * ni + k]; };
  for (int i = 0; i < nr; ++i)
    for (int k = 0; k < ni; ++k) {
      const double v = std::abs(char_function(cc, tau, delta, {box.re_min + i * dr, box.im_min + k * di}));
      at(i, k) = std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
    }

  std::vector<Complex> candidates;
  for (int i = 0; i < nr; ++i)
    for (int k = 0; k < ni; ++k) {
      const double v = at(i, k);
      if (!std::isfinite(v)) continue;
      bool minimum = true;
      for (int a = -1; a <= 1 && minimum; ++a)
        for (int b = -1; b <= 1; ++b) {
          if (a == 0 && b == 0) continue;
          const int ii = i + a, kk = k + b;
          if (ii < 0 || ii >= nr || kk < 0 || kk >= ni) continue;
          if (at(ii, kk) < v) {
            minimum = false;
            break;
          }
        }
      if (!minimum) continue;
      candidates.emplace_back(box.re_min + i * dr, box.im_min + k * di);
      // Iterates from a real start stay real, so a nearby complex pair needs an off-axis seed.
      if (box.im_min + k * di == 0.0) candidates.emplace_back(box.re_min + i * dr, 0.5 * di);
    }

  std::vector<Complex> roots;
  for (const Complex& c : candidates) {
    auto r = refine(cc, tau, delta, c);
    if (!r) continue;
    Complex z = *r;
    if (z.imag() < 0.0) z = std::conj(z);
    if (z.imag() <= 1e-9 * std::max(1.0, std::abs(z))) z = {z.real(), 0.0};
    if (z.real() < box.re_min - dr || z.real() > box.re_max + dr || z.imag() > box.im_max + di) continue;
    roots.push_back(z);
  }

  // Sort before dedup so the merge is order independent.
  std::sort(roots.begin(), roots.end(), [](Complex a, Complex b) {
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() < b.imag();
  });
  std::vector<Complex> unique;
  for (const Complex& z : roots) {
    const bool dup = std::any_of(unique.begin(), unique.end(), [&](Complex u) {
      return std::abs(u - z) < 1e-8 * std::max(1.0, std::abs(z));
    });
    if (!dup) unique.push_back(z);
  }

  RootScan scan;
  scan.roots = std::move(unique);
  if (scan.roots.empty())
    scan.diagnostic = fmt::format("no root located from {} grid minima on a {}x{} grid; refine the grid or enlarge the box",
                                  candidates.size(), nr, ni);
  return scan;
}

std::string delay_free_polynomial(const CharCoeffs& cc) {
  const double c2 = cc.l;
  const double c1 = cc.l1 + cc.m;
  const double c0 = cc.n + cc.m1 + cc.n1;
  std::string out = "lambda^3";
  auto term = [&](double c, const char* power) {
    if (c == 0.0) return;
    out += c < 0.0 ? " - " : " + ";
    const double a = std::abs(c);
    if (*power == '\0') out += fmt::format("{:g}", a);
    else if (a == 1.0) out += power;
    else out += fmt::format("{:g}*{}", a, power);
  };
  term(c2, "lambda^2");
  term(c1, "lambda");
  term(c0, "");
  return out;
}

}  // namespace sirdelay
