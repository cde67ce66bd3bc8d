#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "sirdelay/analytics.hpp"
#include "support.hpp"

using namespace sirdelay;
using sirdelay::testing::base_params;
using sirdelay::testing::bilinear_model;

namespace {

/// Synthetic trajectory y(t) = 2 + g(t) sampled at h with exact derivatives.
template <class G, class DG>
Trajectory synthetic(G g, DG dg, double horizon = 200.0, double h = 0.05) {
  Trajectory traj;
  const auto n = static_cast<int>(std::lround(horizon / h));
  for (int i = 0; i <= n; ++i) {
    const double t = i * h;
    traj.mesh.push_back(t);
    traj.states.push_back({1.0, 2.0 + g(t), 1.0});
    traj.derivatives.push_back({0.0, dg(t), 0.0});
  }
  return traj;
}

const Equilibrium candidate{{1.0, 2.0, 1.0}, EquilibriumKind::Endemic, 0.0};

}  // namespace

TEST_CASE("constant trajectory converges to the candidate") {
  const auto c = classify(synthetic([](double) { return 0.0; }, [](double) { return 0.0; }), candidate);
  CHECK(c.kind == RegimeKind::Converged);
  CHECK(c.max_deviation == doctest::Approx(0.0));
}

TEST_CASE("pure oscillation is sustained with the right period and amplitude") {
  const double w = 2.0 * std::numbers::pi / 7.0;
  const auto c = classify(synthetic([&](double t) { return 0.5 * std::sin(w * t); },
                                    [&](double t) { return 0.5 * w * std::cos(w * t); }),
                          candidate);
  CHECK(c.kind == RegimeKind::SustainedOscillation);
  CHECK(c.period == doctest::Approx(7.0).epsilon(1e-3));
  CHECK(c.amplitude == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("decaying oscillation is damped") {
  const double w = 2.0 * std::numbers::pi / 7.0, k = 0.02;
  auto g = [&](double t) { return 0.5 * std::exp(-k * t) * std::sin(w * t); };
  auto dg = [&](double t) { return 0.5 * std::exp(-k * t) * (w * std::cos(w * t) - k * std::sin(w * t)); };
  const auto c = classify(synthetic(g, dg), candidate);
  CHECK(c.kind == RegimeKind::DampedOscillation);
  CHECK(c.decay_ratio < 0.9);
}

TEST_CASE("growth beyond the bound diverges") {
  const auto c = classify(synthetic([](double t) { return std::exp(0.1 * t); }, [](double t) { return 0.1 * std::exp(0.1 * t); }),
                          candidate);
  CHECK(c.kind == RegimeKind::Diverged);
}

TEST_CASE("short horizons are refused") {
  const auto traj = synthetic([](double) { return 0.0; }, [](double) { return 0.0; }, 40.0);
  CHECK_THROWS_AS(classify(traj, candidate), std::invalid_argument);
  Trajectory delayed = synthetic([](double) { return 0.0; }, [](double) { return 0.0; }, 60.0);
  delayed.meta.tau = 10.0;
  CHECK_THROWS_AS(classify(delayed, candidate), std::invalid_argument);
}

TEST_CASE("sweep rows come back in grid order regardless of thread count") {
  const ModelSpec m = bilinear_model(base_params());
  const auto eq = find_equilibria(m).back();
  const std::vector<DelayPoint> grid = {{0, 0}, {0.5, 0.2}, {1, 1}, {0.2, 0.5}, {0.1, 0.1}};
  SweepOptions one;
  one.horizon = 60.0;
  one.threads = 1;
  SweepOptions many = one;
  many.threads = 4;
  const auto a = sweep(m, grid, ConstantHistory{{2.2, 5.5, 6.1}}, eq, one);
  const auto b = sweep(m, grid, ConstantHistory{{2.2, 5.5, 6.1}}, eq, many);
  REQUIRE(a.size() == grid.size());
  REQUIRE(b.size() == grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(a[i].delays == grid[i]);
    CHECK(b[i].delays == grid[i]);
    CHECK(a[i].max_re_lambda == b[i].max_re_lambda);
    CHECK(a[i].classification.has_value() == b[i].classification.has_value());
    if (a[i].classification && b[i].classification) CHECK(a[i].classification->kind == b[i].classification->kind);
  }
  CHECK(sweep_csv(a) == sweep_csv(b));
}

TEST_CASE("sweep records integration failures in the row") {
  const ModelSpec m = bilinear_model(base_params());
  SweepOptions opts;
  opts.horizon = 60.0;
  const auto rows = sweep(m, {{1.0, 1.0}}, ConstantHistory{{0.1, 0.1, 0.1}}, find_equilibria(m).back(), opts);
  REQUIRE(rows.size() == 1);
  CHECK_FALSE(rows[0].classification.has_value());
  CHECK_FALSE(rows[0].error.empty());
  const std::string csv = sweep_csv(rows);
  CHECK(csv.rfind("tau,delta,classification,period,amplitude,max_re_lambda\n", 0) == 0);
  CHECK(csv.find(",Error,") != std::string::npos);
}

TEST_CASE("sweep without a candidate leaves the root column empty") {
  const ModelSpec m = bilinear_model(base_params());
  SweepOptions opts;
  opts.horizon = 60.0;
  const auto rows = sweep(m, {{0.0, 0.0}}, ConstantHistory{{1, 1, 1}}, std::nullopt, opts);
  REQUIRE(rows.size() == 1);
  CHECK(std::isnan(rows[0].max_re_lambda));
  std::istringstream in(sweep_csv(rows));
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  CHECK(row.back() == ',');
}
