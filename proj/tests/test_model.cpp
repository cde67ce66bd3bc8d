#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "sirdelay/model.hpp"
#include "support.hpp"

using namespace sirdelay;
using sirdelay::testing::base_params;
using sirdelay::testing::bilinear_model;

TEST_CASE("parameter validation names the offending field") {
  Params p = base_params();
  p.b1 = 2.0;
  try {
    bilinear_model(p);
    FAIL("expected rejection");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("params.b1") != std::string::npos);
  }
  p = base_params();
  p.tau = -1.0;
  CHECK_THROWS_AS(bilinear_model(p), std::invalid_argument);
  p = base_params();
  p.alpha = NAN;
  CHECK_THROWS_AS(bilinear_model(p), std::invalid_argument);
}

TEST_CASE("right-hand side at the bilinear endemic state vanishes") {
  const ModelSpec m = bilinear_model(base_params());
  const State s = eval_rhs_stationary(m, {2.0, 6.0, 6.0});
  CHECK(s.max_abs() == doctest::Approx(0.0));
  CHECK_THROWS_AS(eval_rhs(m, {NAN, 1.0, 1.0}, 1.0, 1.0), std::domain_error);
}

TEST_CASE("with_delays keeps everything else") {
  const ModelSpec m = bilinear_model(base_params());
  const ModelSpec d = m.with_delays(2.0, 3.0);
  CHECK(d.params().tau == 2.0);
  CHECK(d.params().delta == 3.0);
  CHECK(d.params().a == m.params().a);
  CHECK(d.f() == m.f());
}

TEST_CASE("bilinear equilibria follow the closed forms") {
  const auto eqs = find_equilibria(bilinear_model(base_params()));
  REQUIRE(eqs.size() == 2);
  CHECK(eqs[0].kind == EquilibriumKind::DiseaseFree);
  CHECK(eqs[0].state.x == doctest::Approx(5.0));
  CHECK(eqs[1].kind == EquilibriumKind::Endemic);
  CHECK((eqs[1].state - State{2.0, 6.0, 6.0}).max_abs() < 1e-12);
}

TEST_CASE("no endemic state below the threshold") {
  Params p = base_params();
  p.r = 4.0;
  const auto eqs = find_equilibria(bilinear_model(p));
  REQUIRE(eqs.size() == 1);
  CHECK(eqs[0].kind == EquilibriumKind::DiseaseFree);
}

TEST_CASE("property: closed form and multi-start Newton agree on random bilinear models") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.2, 3.0);
  int compared = 0;
  for (int trial = 0; trial < 100; ++trial) {
    Params p{.a = 5.0 + 5.0 * u(rng), .b = u(rng), .b1 = 0.0, .c = u(rng), .d = u(rng), .d1 = u(rng), .r = u(rng),
             .alpha = u(rng), .tau = 0.0, .delta = 0.0};
    p.b1 = p.b * std::uniform_real_distribution<double>(0.3, 1.0)(rng);
    const ModelSpec m = bilinear_model(p);
    const auto closed = find_endemic(m);
    const auto newton = find_endemic_newton(m);
    REQUIRE(closed.size() == newton.size());
    for (std::size_t i = 0; i < closed.size(); ++i) {
      CHECK((closed[i].state - newton[i].state).max_abs() < 1e-8 * (1.0 + closed[i].state.max_abs()));
      ++compared;
    }
  }
  CHECK(compared > 10);
}

TEST_CASE("property: every reported equilibrium is stationary, nonnegative and of its kind") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.2, 3.0);
  const ResponseFn incidences[] = {response::Bilinear{}, response::SaturatingIncidence{2.0}, response::FractionalMix{}};
  const ResponseFn unaries[] = {response::Linear{1.0}, response::SaturatingUnary{1.0}, response::PowerSum{0.0, 1.0},
                                response::Zero{}};
  for (int trial = 0; trial < 120; ++trial) {
    Params p{.a = 10.0 * u(rng), .b = u(rng), .b1 = 0.0, .c = u(rng), .d = u(rng), .d1 = u(rng), .r = u(rng),
             .alpha = u(rng), .tau = 0.0, .delta = 0.0};
    p.b1 = p.b;
    const ModelSpec m(p, incidences[trial % 3], unaries[trial % 4], unaries[(trial / 4) % 3]);
    for (const Equilibrium& e : find_equilibria(m)) {
      CHECK(eval_rhs_stationary(m, e.state).max_abs() < 1e-8 * (1.0 + e.state.max_abs()));
      CHECK(e.state.min_component() >= 0.0);
      if (e.kind == EquilibriumKind::Endemic) CHECK(e.state.y > 0.0);
      else CHECK(e.state.y == 0.0);
    }
  }
}

TEST_CASE("Jacobian aggregates at the bilinear endemic state") {
  const JacCoeffs j = jacobian_coeffs(bilinear_model(base_params()), State{2.0, 6.0, 6.0});
  CHECK(j.A == doctest::Approx(-8.0));
  CHECK(j.B == doctest::Approx(-2.0));
  CHECK(j.C == doctest::Approx(0.0));
  CHECK(j.D == doctest::Approx(6.0));
  CHECK(j.E == doctest::Approx(1.0));
}

TEST_CASE("property: Jacobian aggregates match finite differences of the right-hand side") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> pos(0.5, 5.0);
  const ModelSpec m(Params{.a = 3, .b = 2, .b1 = 1.5, .c = 1, .d = 0.5, .d1 = 1, .r = 2, .alpha = 0.7},
                    response::SaturatingIncidence{2.0}, response::SaturatingUnary{1.0}, response::PowerSum{1.0, 0.5});
  for (int trial = 0; trial < 50; ++trial) {
    const State s{pos(rng), pos(rng), pos(rng)};
    const JacCoeffs j = jacobian_coeffs(m, s);
    const double h = 1e-6;
    auto rhs = [&](State now, double xt, double yd) { return eval_rhs(m, now, xt, yd); };
    const State dx = (rhs({s.x + h, s.y, s.z}, s.x, s.y) - rhs({s.x - h, s.y, s.z}, s.x, s.y)) * (0.5 / h);
    const State dy = (rhs({s.x, s.y + h, s.z}, s.x, s.y) - rhs({s.x, s.y - h, s.z}, s.x, s.y)) * (0.5 / h);
    const State dxt = (rhs(s, s.x + h, s.y) - rhs(s, s.x - h, s.y)) * (0.5 / h);
    const State dyd = (rhs(s, s.x, s.y + h) - rhs(s, s.x, s.y - h)) * (0.5 / h);
    CHECK(j.A == doctest::Approx(dx.x).epsilon(1e-6));
    CHECK(j.B == doctest::Approx(dy.x).epsilon(1e-6));
    CHECK(j.C == doctest::Approx(dy.y).epsilon(1e-6));
    CHECK(j.D == doctest::Approx(dxt.y).epsilon(1e-6));
    CHECK(j.E == doctest::Approx(dyd.z).epsilon(1e-6));
  }
}

TEST_CASE("endemic existence boundary is detected") {
  Params p = base_params();
  p.a = 4.0;  // a/(c+d) = 2 = (d1+r)/b1
  CHECK(endemic_existence_on_boundary(bilinear_model(p)));
  CHECK_FALSE(endemic_existence_on_boundary(bilinear_model(base_params())));
}
