#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "sirdelay/analytics.hpp"
#include "sirdelay/integrator.hpp"
#include "sirdelay/model.hpp"

namespace sirdelay {

/// Malformed or inconsistent configuration. `field()` is the JSON path of the
/// offending entry, e.g. "params.b1" or "f.kind".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

enum class Focus { Endemic, DiseaseFree };

struct SweepSpec {
  std::vector<DelayPoint> points;
  double horizon = 200.0;
  bool operator==(const SweepSpec&) const = default;
};

/// Everything needed to run one scenario.
struct ScenarioConfig {
  std::string name{};
  std::string description{};
  ModelSpec model;
  HistorySpec history;
  double horizon = 100.0;
  std::optional<double> step{};  // default_step(model) when unset
  Focus focus = Focus::Endemic;
  std::optional<SweepSpec> sweep{};
  std::vector<std::string> outputs{};  // report, timeseries, sweep-table, plot
  nlohmann::json reference_values = nlohmann::json::object();

  bool operator==(const ScenarioConfig&) const = default;
};

ScenarioConfig parse_config(const nlohmann::json& j);
ScenarioConfig parse_config_text(const std::string& text);
ScenarioConfig load_config_file(const std::string& path);

nlohmann::json to_json(const ScenarioConfig& cfg);
nlohmann::json to_json(const ResponseFn& fn);

std::vector<std::string> preset_names();

/// Bundled scenario by name. Throws ConfigError("preset", ...) for an unknown name.
ScenarioConfig load_preset(const std::string& name);

/// Raw JSON text of a bundled preset, or nullopt.
std::optional<std::string> preset_text(const std::string& name);

/// Equilibrium of the requested kind (first one found), if any.
std::optional<Equilibrium> focus_equilibrium(const ScenarioConfig& cfg);

/// Inclusive A:B:STEP range, or a single number. Throws ConfigError(field, ...).
std::vector<double> parse_range(const std::string& text, const std::string& field);

}  // namespace sirdelay
