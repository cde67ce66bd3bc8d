#include "doctest.h"
#include "sirdelay/config.hpp"

using namespace sirdelay;
using nlohmann::json;

namespace {

json minimal() {
  return json::parse(R"({
    "params": {"a": 10, "b": 1, "b1": 1, "c": 1, "d": 1, "d1": 1, "r": 1, "alpha": 1, "tau": 1, "delta": 1},
    "f": {"kind": "bilinear"}, "V": {"kind": "linear", "k": 1}, "P": {"kind": "linear", "k": 1},
    "history": {"kind": "constant", "value": [1, 1, 1]}
  })");
}

std::string field_of(const json& j) {
  try {
    parse_config(j);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "";
}

}  // namespace

TEST_CASE("minimal configuration takes defaults") {
  const ScenarioConfig cfg = parse_config(minimal());
  CHECK(cfg.horizon == 100.0);
  CHECK_FALSE(cfg.step.has_value());
  CHECK(cfg.focus == Focus::Endemic);
  CHECK(cfg.model.params().tau == 1.0);
}

TEST_CASE("errors name the offending field") {
  json j = minimal();
  j["params"]["b1"] = 2;
  CHECK(field_of(j) == "params.b1");
  j = minimal();
  j["params"]["d"] = -1;
  CHECK(field_of(j) == "params.d");
  j = minimal();
  j["params"].erase("alpha");
  CHECK(field_of(j) == "params.alpha");
  j = minimal();
  j["params"]["extra"] = 1;
  CHECK(field_of(j) == "params.extra");
  j = minimal();
  j["f"]["kind"] = "quadratic";
  CHECK(field_of(j) == "f.kind");
  j = minimal();
  j["V"] = {{"kind", "bilinear"}};
  CHECK(field_of(j).rfind("V", 0) == 0);
  j = minimal();
  j["history"]["value"] = {1, -1, 1};
  CHECK(field_of(j).rfind("history", 0) == 0);
  j = minimal();
  j["horizon"] = 0;
  CHECK(field_of(j) == "horizon");
  j = minimal();
  j["sweep"] = {{"points", {{0, 0}, {1}}}};
  CHECK(field_of(j).rfind("sweep.points[1]", 0) == 0);
  j = minimal();
  j["focus"] = "somewhere";
  CHECK(field_of(j) == "focus");
  CHECK_THROWS_AS(parse_config_text("{not json"), ConfigError);
  CHECK_THROWS_AS(load_config_file("/nonexistent/file.json"), ConfigError);
}

TEST_CASE("property: every bundled preset round-trips through JSON") {
  const auto names = preset_names();
  CHECK(names.size() == 8);
  for (const auto& name : names) {
    CAPTURE(name);
    const ScenarioConfig cfg = load_preset(name);
    CHECK(cfg.name == name);
    const ScenarioConfig again = parse_config(to_json(cfg));
    CHECK(again == cfg);
    CHECK(to_json(again) == to_json(cfg));
  }
}

TEST_CASE("every preset has its focus equilibrium") {
  for (const auto& name : preset_names()) {
    CAPTURE(name);
    CHECK(focus_equilibrium(load_preset(name)).has_value());
  }
}

TEST_CASE("unknown preset") {
  try {
    load_preset("nope");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "preset");
  }
  CHECK_FALSE(preset_text("nope").has_value());
}

TEST_CASE("delay ranges") {
  CHECK(parse_range("2.5", "tau") == std::vector<double>{2.5});
  const auto r = parse_range("0:1:0.25", "tau");
  REQUIRE(r.size() == 5);
  CHECK(r.back() == doctest::Approx(1.0));
  CHECK(parse_range("0:1:0.3", "tau").size() == 4);
  CHECK_THROWS_AS(parse_range("1:0:0.1", "tau"), ConfigError);
  CHECK_THROWS_AS(parse_range("0:1:0", "delta"), ConfigError);
  CHECK_THROWS_AS(parse_range("abc", "tau"), ConfigError);
  CHECK_THROWS_AS(parse_range("0:1", "tau"), ConfigError);
  CHECK_THROWS_AS(parse_range("-1", "tau"), ConfigError);
  try {
    parse_range("x", "delta");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "delta");
  }
}
