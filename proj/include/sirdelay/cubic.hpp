#pragma once

#include <vector>

namespace sirdelay {

/// Real roots of c3 t^3 + c2 t^2 + c1 t + c0, ascending, repeated roots merged.
///
/// Uses the trigonometric form when the depressed cubic has three real roots and
/// Cardano otherwise, followed by Newton polishing. Leading coefficients that are
/// negligible against the rest (|c| <= 1e-14 max|c|) drop the degree. Throws
/// std::domain_error for the identically zero polynomial.
std::vector<double> solve_cubic_real(double c3, double c2, double c1, double c0);

/// Horner evaluation of the same cubic.
double eval_cubic(double c3, double c2, double c1, double c0, double t);

}  // namespace sirdelay
