#include <cmath>

#include "doctest.h"
#include "sirdelay/config.hpp"
#include "sirdelay/report.hpp"
#include "sirdelay/svg.hpp"
#include "support.hpp"

using namespace sirdelay;
using nlohmann::json;

namespace {

StabilityReport report_for(const std::string& name) {
  const ScenarioConfig cfg = load_preset(name);
  StabilityReport r = stability_report(cfg.model, *focus_equilibrium(cfg), find_equilibria(cfg.model));
  annotate_reference_values(r, cfg.reference_values);
  return r;
}

void expect_operands(const json& checks) {
  REQUIRE(checks.is_array());
  for (const auto& q : checks) {
    CHECK(q.contains("label"));
    CHECK(q.contains("lhs"));
    CHECK(q.contains("rhs"));
    CHECK(q.contains("relation"));
    CHECK(q.contains("holds"));
  }
}

}  // namespace

TEST_CASE("report JSON lists every inequality with both sides") {
  const json j = to_json(report_for("ex5_3"));
  for (const char* key : {"delay_free", "tau_persistence", "tau_only", "delta_only", "combined", "global"}) {
    CAPTURE(key);
    REQUIRE(j.contains(key));
    expect_operands(j[key]["checks"]);
  }
  CHECK(j["equilibrium"]["state"] == json::array({2.0, 2.0, 2.0}));
  CHECK(j["tau_only"]["verdict"] == "SwitchAt");
  CHECK(j.contains("oracle"));
}

TEST_CASE("oracle cross-checks agree for every local criterion") {
  for (const auto& name : preset_names()) {
    CAPTURE(name);
    for (const auto& p : report_for(name).probes) {
      CAPTURE(p.criterion);
      CAPTURE(p.tau);
      CAPTURE(p.delta);
      if (p.criterion != "global") CHECK(p.agrees);
    }
  }
}

TEST_CASE("the global criterion is contradicted by the spectrum for two bilinear presets") {
  // Both satisfy the endemic global condition yet have roots in the right half plane
  // at some delays; the report must surface this rather than hide it.
  for (const char* name : {"ex5_1", "ex5_3"}) {
    CAPTURE(name);
    const StabilityReport r = report_for(name);
    CHECK(r.global.verdict == GlobalVerdict::EndemicGAS);
    bool disagreement = false;
    for (const auto& p : r.probes) disagreement = disagreement || (p.criterion == "global" && !p.agrees);
    CHECK(disagreement);
  }
}

TEST_CASE("reference values that disagree with the computation become notes") {
  const ScenarioConfig cfg = load_preset("ex5_2");
  StabilityReport r = stability_report(cfg.model, *focus_equilibrium(cfg), find_equilibria(cfg.model));
  const std::size_t before = r.notes.size();
  annotate_reference_values(r, json{{"equilibrium", {5.0, 0.0, 0.0}}});
  CHECK(r.notes.size() == before);
  annotate_reference_values(r, json{{"equilibrium", {4.0, 0.0, 0.0}}});
  REQUIRE(r.notes.size() == before + 1);
  CHECK(r.notes.back().find("reference discrepancy") == 0);
  annotate_reference_values(r, json{{"characteristic_polynomial", "lambda^3 + 3*lambda^2 + 2*lambda"}});
  CHECK(r.notes.size() == before + 1);
}

TEST_CASE("the table has a block per criterion") {
  const std::string t = to_table(report_for("ex5_1"));
  for (const char* block : {"[delay-free]", "[tau-persistence]", "[tau-critical]", "[delta-only]", "[combined]", "[global]",
                            "[oracle]"})
    CHECK(t.find(block) != std::string::npos);
}

TEST_CASE("trajectory JSON mirrors the CSV sampling") {
  const ModelSpec m = sirdelay::testing::bilinear_model(sirdelay::testing::base_params());
  const Trajectory traj = integrate(m, ConstantHistory{{1, 1, 1}}, 3.0, 0.01);
  const json j = trajectory_json(traj);
  CHECK(j["t"].size() == 31);
  CHECK(j["x"].size() == 31);
  CHECK(j["t"].back().get<double>() == doctest::Approx(3.0));
}

TEST_CASE("sweep JSON mirrors the CSV columns") {
  SweepRow ok{{1.0, 0.5}, Classification{}, -0.2, ""};
  ok.classification->kind = RegimeKind::SustainedOscillation;
  ok.classification->period = 6.0;
  ok.classification->amplitude = 0.3;
  const SweepRow bad{{2.0, 0.5}, std::nullopt, NAN, "blow-up"};
  const json j = sweep_json({ok, bad});
  REQUIRE(j.size() == 2);
  CHECK(j[0]["tau"] == 1.0);
  CHECK(j[0]["classification"]["kind"] == "SustainedOscillation");
  CHECK(j[1]["classification"].is_null());
  CHECK(j[1]["max_re_lambda"].is_null());
  CHECK(j[1]["error"] == "blow-up");
  const std::string csv = sweep_csv({ok, bad});
  CHECK(csv.find("1,0.5,SustainedOscillation,6,0.3,-0.2") != std::string::npos);
}

TEST_CASE("SVG output is self-contained and escaped") {
  const std::string svg = svg_line_plot({0, 1, 2}, {{"a<b", {1, 2, 3}, ""}, {"c", {3, NAN, 1}, "#000"}}, "t & x");
  CHECK(svg.rfind("<?xml", 0) == 0);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("a&lt;b") != std::string::npos);
  CHECK(svg.find("t &amp; x") != std::string::npos);
  CHECK(svg.find("nan") == std::string::npos);
  std::size_t lines = 0;
  for (std::size_t pos = 0; (pos = svg.find("<polyline", pos)) != std::string::npos; ++pos) ++lines;
  CHECK(lines == 2);
  CHECK(xml_escape("\"'") == "&quot;&apos;");
}
