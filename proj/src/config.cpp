#include "sirdelay/config.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "preset_data.hpp"

namespace sirdelay {

namespace {

using nlohmann::json;

std::string join(const std::string& parent, const std::string& key) { return parent.empty() ? key : parent + "." + key; }

void allow_keys(const json& obj, const std::string& where, std::initializer_list<const char*> keys) {
  for (const auto& item : obj.items()) {
    const bool known = std::any_of(keys.begin(), keys.end(), [&](const char* k) { return item.key() == k; });
    if (!known) throw ConfigError(join(where, item.key()), "unknown field");
  }
}

const json& require_object(const json& j, const std::string& field) {
  if (!j.is_object()) throw ConfigError(field, "expected an object");
  return j;
}

const json& member(const json& obj, const std::string& where, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(join(where, key), "missing required field");
  return *it;
}

double number(const json& j, const std::string& field) {
  if (!j.is_number()) throw ConfigError(field, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(field, "must be finite");
  return v;
}

double nonneg(const json& j, const std::string& field) {
  const double v = number(j, field);
  if (v < 0.0) throw ConfigError(field, "must be nonnegative");
  return v;
}

double positive(const json& j, const std::string& field) {
  const double v = number(j, field);
  if (!(v > 0.0)) throw ConfigError(field, "must be positive");
  return v;
}

std::string string_of(const json& j, const std::string& field) {
  if (!j.is_string()) throw ConfigError(field, "expected a string");
  return j.get<std::string>();
}

State state_of(const json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 3) throw ConfigError(field, "expected [x, y, z]");
  return {number(j[0], field + "[0]"), number(j[1], field + "[1]"), number(j[2], field + "[2]")};
}

json state_json(const State& s) { return json::array({s.x, s.y, s.z}); }

Params parse_params(const json& j) {
  require_object(j, "params");
  allow_keys(j, "params", {"a", "b", "b1", "c", "d", "d1", "r", "alpha", "tau", "delta"});
  Params p;
  p.a = nonneg(member(j, "params", "a"), "params.a");
  p.b = nonneg(member(j, "params", "b"), "params.b");
  p.b1 = nonneg(member(j, "params", "b1"), "params.b1");
  p.c = nonneg(member(j, "params", "c"), "params.c");
  p.d = nonneg(member(j, "params", "d"), "params.d");
  p.d1 = nonneg(member(j, "params", "d1"), "params.d1");
  p.r = nonneg(member(j, "params", "r"), "params.r");
  p.alpha = nonneg(member(j, "params", "alpha"), "params.alpha");
  if (j.contains("tau")) p.tau = nonneg(j["tau"], "params.tau");
  if (j.contains("delta")) p.delta = nonneg(j["delta"], "params.delta");
  if (p.b1 > p.b) throw ConfigError("params.b1", "must not exceed params.b");
  return p;
}

ResponseFn parse_response(const json& j, const std::string& where) {
  require_object(j, where);
  const std::string kind = string_of(member(j, where, "kind"), join(where, "kind"));
  ResponseFn fn;
  if (kind == "zero") {
    allow_keys(j, where, {"kind"});
    fn = response::Zero{};
  } else if (kind == "linear") {
    allow_keys(j, where, {"kind", "k"});
    fn = response::Linear{j.contains("k") ? nonneg(j["k"], join(where, "k")) : 1.0};
  } else if (kind == "bilinear") {
    allow_keys(j, where, {"kind"});
    fn = response::Bilinear{};
  } else if (kind == "saturating_incidence") {
    allow_keys(j, where, {"kind", "k"});
    fn = response::SaturatingIncidence{j.contains("k") ? positive(j["k"], join(where, "k")) : 1.0};
  } else if (kind == "fractional_mix") {
    allow_keys(j, where, {"kind"});
    fn = response::FractionalMix{};
  } else if (kind == "saturating_unary") {
    allow_keys(j, where, {"kind", "k"});
    fn = response::SaturatingUnary{j.contains("k") ? positive(j["k"], join(where, "k")) : 1.0};
  } else if (kind == "power_sum") {
    allow_keys(j, where, {"kind", "p1", "p2"});
    fn = response::PowerSum{nonneg(member(j, where, "p1"), join(where, "p1")),
                            nonneg(member(j, where, "p2"), join(where, "p2"))};
  } else {
    throw ConfigError(join(where, "kind"), fmt::format("unknown response kind '{}'", kind));
  }
  return fn;
}

HistorySpec parse_history(const json& j, double max_delay) {
  require_object(j, "history");
  const std::string kind = string_of(member(j, "history", "kind"), "history.kind");
  HistorySpec h;
  if (kind == "constant") {
    allow_keys(j, "history", {"kind", "value"});
    h = ConstantHistory{state_of(member(j, "history", "value"), "history.value")};
  } else if (kind == "sampled") {
    allow_keys(j, "history", {"kind", "times", "states"});
    const json& times = member(j, "history", "times");
    const json& states = member(j, "history", "states");
    if (!times.is_array()) throw ConfigError("history.times", "expected an array");
    if (!states.is_array()) throw ConfigError("history.states", "expected an array");
    SampledHistory s;
    for (std::size_t i = 0; i < times.size(); ++i) s.times.push_back(number(times[i], fmt::format("history.times[{}]", i)));
    for (std::size_t i = 0; i < states.size(); ++i)
      s.states.push_back(state_of(states[i], fmt::format("history.states[{}]", i)));
    h = std::move(s);
  } else {
    throw ConfigError("history.kind", fmt::format("unknown history kind '{}'", kind));
  }
  try {
    validate_history(h, max_delay);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("history", e.what());
  }
  return h;
}

const std::set<std::string>& known_outputs() {
  static const std::set<std::string> k = {"report", "timeseries", "sweep-table", "plot"};
  return k;
}

}  // namespace

ScenarioConfig parse_config(const json& j) {
  require_object(j, "<root>");
  allow_keys(j, "", {"name", "description", "params", "f", "V", "P", "history", "horizon", "step", "focus", "sweep",
                     "outputs", "reference_values"});
  const Params params = parse_params(member(j, "", "params"));
  const ResponseFn f = parse_response(member(j, "", "f"), "f");
  const ResponseFn V = parse_response(member(j, "", "V"), "V");
  const ResponseFn P = parse_response(member(j, "", "P"), "P");
  if (arity(f) == Arity::Unary) throw ConfigError("f.kind", "incidence f must take two arguments");
  if (arity(V) == Arity::Binary) throw ConfigError("V.kind", "vaccination V must take one argument");
  if (arity(P) == Arity::Binary) throw ConfigError("P.kind", "recovery P must take one argument");
  if (eval(P, 0.0) != 0.0) throw ConfigError("P", "recovery function must vanish at 0");

  std::optional<ModelSpec> model;
  try {
    model.emplace(params, f, V, P);
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    throw ConfigError(msg.substr(0, msg.find(' ')), msg);
  }

  ScenarioConfig cfg{.model = *model,
                     .history = ConstantHistory{{1.0, 1.0, 1.0}}};
  if (j.contains("name")) cfg.name = string_of(j["name"], "name");
  if (j.contains("description")) cfg.description = string_of(j["description"], "description");
  const double max_delay = std::max(params.tau, params.delta);
  if (j.contains("history")) cfg.history = parse_history(j["history"], max_delay);
  if (j.contains("horizon")) cfg.horizon = positive(j["horizon"], "horizon");
  if (j.contains("step") && !j["step"].is_null()) cfg.step = positive(j["step"], "step");
  if (cfg.step) {
    double min_delay = 0.0;
    for (double d : {params.tau, params.delta})
      if (d > 0.0) min_delay = min_delay == 0.0 ? d : std::min(min_delay, d);
    if (min_delay > 0.0 && *cfg.step > min_delay)
      throw ConfigError("step", fmt::format("must not exceed the smallest positive delay {:g}", min_delay));
  }
  if (j.contains("focus")) {
    const std::string focus = string_of(j["focus"], "focus");
    if (focus == "endemic") cfg.focus = Focus::Endemic;
    else if (focus == "disease_free") cfg.focus = Focus::DiseaseFree;
    else throw ConfigError("focus", "expected 'endemic' or 'disease_free'");
  }
  if (j.contains("sweep") && !j["sweep"].is_null()) {
    const json& s = require_object(j["sweep"], "sweep");
    allow_keys(s, "sweep", {"points", "horizon"});
    SweepSpec spec;
    const json& pts = member(s, "sweep", "points");
    if (!pts.is_array() || pts.empty()) throw ConfigError("sweep.points", "expected a nonempty array of [tau, delta]");
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const std::string field = fmt::format("sweep.points[{}]", i);
      if (!pts[i].is_array() || pts[i].size() != 2) throw ConfigError(field, "expected [tau, delta]");
      spec.points.push_back({nonneg(pts[i][0], field + "[0]"), nonneg(pts[i][1], field + "[1]")});
    }
    if (s.contains("horizon")) spec.horizon = positive(s["horizon"], "sweep.horizon");
    cfg.sweep = std::move(spec);
  }
  if (j.contains("outputs")) {
    const json& outs = j["outputs"];
    if (!outs.is_array()) throw ConfigError("outputs", "expected an array of strings");
    for (std::size_t i = 0; i < outs.size(); ++i) {
      const std::string field = fmt::format("outputs[{}]", i);
      const std::string name = string_of(outs[i], field);
      if (!known_outputs().count(name)) throw ConfigError(field, fmt::format("unknown output '{}'", name));
      cfg.outputs.push_back(name);
    }
  }
  if (j.contains("reference_values")) cfg.reference_values = require_object(j["reference_values"], "reference_values");
  return cfg;
}

ScenarioConfig parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<root>", fmt::format("JSON parse error at byte {}: {}", e.byte, e.what()));
  }
  return parse_config(j);
}

ScenarioConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", fmt::format("cannot open '{}'", path));
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

json to_json(const ResponseFn& fn) {
  json j = {{"kind", std::string(kind_name(fn))}};
  if (const auto* v = std::get_if<response::Linear>(&fn)) j["k"] = v->k;
  if (const auto* v = std::get_if<response::SaturatingIncidence>(&fn)) j["k"] = v->k;
  if (const auto* v = std::get_if<response::SaturatingUnary>(&fn)) j["k"] = v->k;
  if (const auto* v = std::get_if<response::PowerSum>(&fn)) {
    j["p1"] = v->p1;
    j["p2"] = v->p2;
  }
  return j;
}

json to_json(const ScenarioConfig& cfg) {
  const Params& p = cfg.model.params();
  json j;
  j["name"] = cfg.name;
  j["description"] = cfg.description;
  j["params"] = {{"a", p.a}, {"b", p.b},   {"b1", p.b1},       {"c", p.c},     {"d", p.d},
                 {"d1", p.d1}, {"r", p.r}, {"alpha", p.alpha}, {"tau", p.tau}, {"delta", p.delta}};
  j["f"] = to_json(cfg.model.f());
  j["V"] = to_json(cfg.model.V());
  j["P"] = to_json(cfg.model.P());
  if (const auto* c = std::get_if<ConstantHistory>(&cfg.history)) {
    j["history"] = {{"kind", "constant"}, {"value", state_json(c->value)}};
  } else {
    const auto& s = std::get<SampledHistory>(cfg.history);
    json states = json::array();
    for (const State& st : s.states) states.push_back(state_json(st));
    j["history"] = {{"kind", "sampled"}, {"times", s.times}, {"states", states}};
  }
  j["horizon"] = cfg.horizon;
  j["step"] = cfg.step ? json(*cfg.step) : json(nullptr);
  j["focus"] = cfg.focus == Focus::Endemic ? "endemic" : "disease_free";
  if (cfg.sweep) {
    json pts = json::array();
    for (const DelayPoint& d : cfg.sweep->points) pts.push_back({d.tau, d.delta});
    j["sweep"] = {{"points", pts}, {"horizon", cfg.sweep->horizon}};
  } else {
    j["sweep"] = nullptr;
  }
  j["outputs"] = cfg.outputs;
  j["reference_values"] = cfg.reference_values;
  return j;
}

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& [name, text] : detail::bundled_presets()) names.emplace_back(name);
  std::sort(names.begin(), names.end());
  return names;
}

std::optional<std::string> preset_text(const std::string& name) {
  for (const auto& [n, text] : detail::bundled_presets())
    if (n == name) return std::string(text);
  return std::nullopt;
}

ScenarioConfig load_preset(const std::string& name) {
  const auto text = preset_text(name);
  if (!text) {
    std::string known;
    for (const auto& n : preset_names()) known += (known.empty() ? "" : ", ") + n;
    throw ConfigError("preset", fmt::format("unknown preset '{}' (known: {})", name, known));
  }
  return parse_config_text(*text);
}

std::optional<Equilibrium> focus_equilibrium(const ScenarioConfig& cfg) {
  const EquilibriumKind want = cfg.focus == Focus::Endemic ? EquilibriumKind::Endemic : EquilibriumKind::DiseaseFree;
  for (const Equilibrium& e : find_equilibria(cfg.model))
    if (e.kind == want) return e;
  return std::nullopt;
}

std::vector<double> parse_range(const std::string& text, const std::string& field) {
  auto to_double = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      throw ConfigError(field, fmt::format("'{}' is not a number", s));
    }
    if (used != s.size() || !std::isfinite(v)) throw ConfigError(field, fmt::format("'{}' is not a number", s));
    return v;
  };
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
  if (parts.size() == 1) {
    const double v = to_double(parts[0]);
    if (v < 0.0) throw ConfigError(field, "delays must be nonnegative");
    return {v};
  }
  if (parts.size() != 3) throw ConfigError(field, "expected A:B:STEP or a single number");
  const double a = to_double(parts[0]), b = to_double(parts[1]), step = to_double(parts[2]);
  if (a < 0.0 || b < a) throw ConfigError(field, "expected 0 <= A <= B");
  if (!(step > 0.0)) throw ConfigError(field, "STEP must be positive");
  const auto n = static_cast<std::size_t>(std::floor((b - a) / step + 1e-9));
  if (n > 100000) throw ConfigError(field, "range has too many points");
  std::vector<double> out;
  for (std::size_t i = 0; i <= n; ++i) out.push_back(a + static_cast<double>(i) * step);
  return out;
}

}  // namespace sirdelay
