#pragma once

#include <complex>
#include <string>
#include <vector>

#include "sirdelay/model.hpp"

namespace sirdelay {

/// Coefficients of the transcendental characteristic function
///
///   F(lambda) = lambda^3 + l lambda^2 + m lambda + n
///             + (l1 lambda + m1) e^{-lambda tau} + n1 e^{-lambda (tau + delta)}.
struct CharCoeffs {
  double l = 0.0;
  double m = 0.0;
  double n = 0.0;
  double l1 = 0.0;
  double m1 = 0.0;
  double n1 = 0.0;

  bool operator==(const CharCoeffs&) const = default;
  bool delay_terms_vanish() const { return l1 == 0.0 && m1 == 0.0 && n1 == 0.0; }
};

CharCoeffs char_coeffs(const JacCoeffs& j);

using Complex = std::complex<double>;

Complex char_function(const CharCoeffs& cc, double tau, double delta, Complex lambda);
Complex char_derivative(const CharCoeffs& cc, double tau, double delta, Complex lambda);

/// Rectangle of the complex plane searched by the root scan. Only the upper half
/// is needed since roots come in conjugate pairs.
struct SearchBox {
  double re_min = -20.0;
  double re_max = 5.0;
  double im_min = 0.0;
  double im_max = 50.0;
  int re_points = 200;
  int im_points = 200;
};

struct RootScan {
  std::vector<Complex> roots;  // Im >= 0, sorted by descending real part
  std::string diagnostic;      // set when nothing converged

  /// Real part of the rightmost root, or -inf when the scan found nothing.
  double max_real() const;
};

/// Grid scan of |F| over the box, local minima refined by a multiplicity-robust
/// Newton iteration, deduplicated at 1e-8. A root is accepted when |F| is below
/// 1e-9 relative to the magnitude of the largest term of F at that point.
RootScan char_roots_scan(const CharCoeffs& cc, double tau, double delta, const SearchBox& box = {});

/// Delay-free characteristic polynomial lambda^3 + l lambda^2 + (l1+m) lambda + (n+m1+n1),
/// formatted for reports.
std::string delay_free_polynomial(const CharCoeffs& cc);

}  // namespace sirdelay
