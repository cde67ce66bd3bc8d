#include "sirdelay/response.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace sirdelay {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

[[noreturn]] void wrong_arity(const ResponseFn& fn, const char* wanted) {
  throw std::invalid_argument(std::string("response function '") + std::string(kind_name(fn)) +
                              "' cannot be used as a " + wanted + " function");
}

}  // namespace

Arity arity(const ResponseFn& fn) {
  return std::visit(overloaded{
                        [](const response::Zero&) { return Arity::Either; },
                        [](const response::Linear&) { return Arity::Unary; },
                        [](const response::Bilinear&) { return Arity::Binary; },
                        [](const response::SaturatingIncidence&) { return Arity::Binary; },
                        [](const response::FractionalMix&) { return Arity::Binary; },
                        [](const response::SaturatingUnary&) { return Arity::Unary; },
                        [](const response::PowerSum&) { return Arity::Unary; },
                    },
                    fn);
}

std::string_view kind_name(const ResponseFn& fn) {
  return std::visit(overloaded{
                        [](const response::Zero&) { return std::string_view("zero"); },
                        [](const response::Linear&) { return std::string_view("linear"); },
                        [](const response::Bilinear&) { return std::string_view("bilinear"); },
                        [](const response::SaturatingIncidence&) {
                          return std::string_view("saturating_incidence");
                        },
                        [](const response::FractionalMix&) { return std::string_view("fractional_mix"); },
                        [](const response::SaturatingUnary&) { return std::string_view("saturating_unary"); },
                        [](const response::PowerSum&) { return std::string_view("power_sum"); },
                    },
                    fn);
}

std::string describe(const ResponseFn& fn, std::string_view a, std::string_view b) {
  std::ostringstream os;
  std::visit(overloaded{
                 [&](const response::Zero&) { os << "0"; },
                 [&](const response::Linear& f) {
                   if (f.k == 1.0)
                     os << a;
                   else
                     os << f.k << "*" << a;
                 },
                 [&](const response::Bilinear&) { os << a << "*" << b; },
                 [&](const response::SaturatingIncidence& f) {
                   os << a << "*" << b << "/(" << a << "+" << f.k << ")";
                 },
                 [&](const response::FractionalMix&) { os << a << "/(" << a << "+" << b << ")"; },
                 [&](const response::SaturatingUnary& f) { os << a << "/(" << f.k << "+" << a << ")"; },
                 [&](const response::PowerSum& f) { os << f.p1 << "*" << a << "+" << f.p2 << "*" << a << "^2"; },
             },
             fn);
  return os.str();
}

double eval(const ResponseFn& fn, double x, double y) {
  return std::visit(overloaded{
                        [](const response::Zero&) { return 0.0; },
                        [&](const response::Bilinear&) { return x * y; },
                        [&](const response::SaturatingIncidence& f) { return x / (x + f.k) * y; },
                        [&](const response::FractionalMix&) {
                          const double s = x + y;
                          return s == 0.0 ? 0.0 : x / s;
                        },
                        [&](const auto&) -> double { wrong_arity(fn, "two-argument"); },
                    },
                    fn);
}

double partial(const ResponseFn& fn, int arg_index, double x, double y) {
  if (arg_index != 0 && arg_index != 1) throw std::out_of_range("partial: argument index must be 0 or 1");
  const bool wrt_x = arg_index == 0;
  return std::visit(overloaded{
                        [](const response::Zero&) { return 0.0; },
                        [&](const response::Bilinear&) { return wrt_x ? y : x; },
                        [&](const response::SaturatingIncidence& f) {
                          const double s = x + f.k;
                          return wrt_x ? f.k * y / (s * s) : x / s;
                        },
                        [&](const response::FractionalMix&) {
                          const double s = x + y;
                          if (s == 0.0) return 0.0;
                          return wrt_x ? y / (s * s) : -x / (s * s);
                        },
                        [&](const auto&) -> double { wrong_arity(fn, "two-argument"); },
                    },
                    fn);
}

double eval(const ResponseFn& fn, double u) {
  return std::visit(overloaded{
                        [](const response::Zero&) { return 0.0; },
                        [&](const response::Linear& f) { return f.k * u; },
                        [&](const response::SaturatingUnary& f) { return u / (f.k + u); },
                        [&](const response::PowerSum& f) { return f.p1 * u + f.p2 * u * u; },
                        [&](const auto&) -> double { wrong_arity(fn, "one-argument"); },
                    },
                    fn);
}

double derivative(const ResponseFn& fn, double u) {
  return std::visit(overloaded{
                        [](const response::Zero&) { return 0.0; },
                        [](const response::Linear& f) { return f.k; },
                        [&](const response::SaturatingUnary& f) {
                          const double s = f.k + u;
                          return f.k / (s * s);
                        },
                        [&](const response::PowerSum& f) { return f.p1 + 2.0 * f.p2 * u; },
                        [&](const auto&) -> double { wrong_arity(fn, "one-argument"); },
                    },
                    fn);
}

bool vanishes_without_infection(const ResponseFn& fn) {
  return !std::holds_alternative<response::FractionalMix>(fn);
}

void validate(const ResponseFn& fn) {
  auto check = [](double v, bool strictly_positive, const char* what) {
    if (!std::isfinite(v) || v < 0.0 || (strictly_positive && v == 0.0))
      throw std::invalid_argument(std::string("response function constant ") + what + " must be " +
                                  (strictly_positive ? "positive" : "nonnegative") + " and finite");
  };
  std::visit(overloaded{
                 [&](const response::Linear& f) { check(f.k, false, "k"); },
                 [&](const response::SaturatingIncidence& f) { check(f.k, true, "k"); },
                 [&](const response::SaturatingUnary& f) { check(f.k, true, "k"); },
                 [&](const response::PowerSum& f) {
                   check(f.p1, false, "p1");
                   check(f.p2, false, "p2");
                 },
                 [](const auto&) {},
             },
             fn);
}

}  // namespace sirdelay
