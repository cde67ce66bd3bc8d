#pragma once

#include <string>
#include <string_view>
#include <variant>

namespace sirdelay {

// Response-function catalog. Incidence f takes (x, y); vaccination V and
// recovery P take a single argument u.
namespace response {

struct Zero {
  bool operator==(const Zero&) const = default;
};
struct Linear {
  double k = 1.0;  // k*u
  bool operator==(const Linear&) const = default;
};
struct Bilinear {  // x*y
  bool operator==(const Bilinear&) const = default;
};
struct SaturatingIncidence {
  double k = 1.0;  // (x/(x+k))*y
  bool operator==(const SaturatingIncidence&) const = default;
};
struct FractionalMix {  // x/(x+y), 0 at the origin
  bool operator==(const FractionalMix&) const = default;
};
struct SaturatingUnary {
  double k = 1.0;  // u/(k+u)
  bool operator==(const SaturatingUnary&) const = default;
};
struct PowerSum {
  double p1 = 0.0;
  double p2 = 0.0;  // p1*u + p2*u^2
  bool operator==(const PowerSum&) const = default;
};

}  // namespace response

using ResponseFn =
    std::variant<response::Zero, response::Linear, response::Bilinear, response::SaturatingIncidence,
                 response::FractionalMix, response::SaturatingUnary, response::PowerSum>;

enum class Arity { Unary, Binary, Either };

Arity arity(const ResponseFn& fn);

/// Stable lower-case identifier used in model files ("bilinear", "saturating_unary", ...).
std::string_view kind_name(const ResponseFn& fn);

/// Human-readable formula, e.g. "x*y/(x+2)".
std::string describe(const ResponseFn& fn, std::string_view arg1 = "u", std::string_view arg2 = "y");

// Two-argument forms. Unary variants are rejected with std::invalid_argument.
double eval(const ResponseFn& fn, double x, double y);
double partial(const ResponseFn& fn, int arg_index, double x, double y);

// One-argument forms. Binary variants are rejected with std::invalid_argument.
double eval(const ResponseFn& fn, double u);
double derivative(const ResponseFn& fn, double u);

/// True when f(x, 0) == 0 for every x, i.e. a disease-free state can be stationary.
bool vanishes_without_infection(const ResponseFn& fn);

/// Rejects negative or non-finite shape constants (k <= 0 for the saturating forms).
void validate(const ResponseFn& fn);

}  // namespace sirdelay
