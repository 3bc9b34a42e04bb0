#pragma once

// Flat key/value run configuration. Unknown keys are rejected; every field has
// a default.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include <yaml-cpp/yaml.h>

#include "belltel/device.hpp"
#include "belltel/protocol.hpp"
#include "belltel/relativity.hpp"

namespace belltel {

struct RunConfig {
  std::uint64_t seed = 1;
  DeviceConfig device;
  TransmissionPlan plan;
  ModelMode mode = ModelMode::unitary_qm;
  double alpha = 0.01;
  std::filesystem::path output_dir = "out";

  DetectorState detectors = DetectorState::off;  // simulate
  std::size_t symbols = 1000;                    // transmit
  std::size_t trials = 10000;                    // plan
  unsigned threads = 1;
  double tolerance = 1e-10;                      // nosignal-check
  std::string strategy = "StateDependent";       // paradox
  double velocity = 0.5;
  double separation = 1.0;
  std::string automaton = "negation";

  void validate() const {
    device.validate();
    plan.validate();
    if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must satisfy 0 < alpha < 1");
    if (symbols < 1) throw ConfigError("symbols must be >= 1");
    if (trials < 1) throw ConfigError("trials must be >= 1");
    if (threads < 1) throw ConfigError("threads must be >= 1");
    if (!(tolerance > 0.0)) throw ConfigError("tolerance must be > 0");
    if (strategy != "StateDependent" && strategy != "Privileged")
      throw ConfigError("strategy must be StateDependent or Privileged");
    if (!(std::abs(velocity) < 1.0)) throw ConfigError("velocity must satisfy |velocity| < 1");
    if (!(separation > 0.0)) throw ConfigError("separation must be > 0");
    if (automaton != "negation" && automaton != "identity" && automaton != "constant-m1" &&
        automaton != "constant-m2")
      throw ConfigError("automaton must be negation, identity, constant-m1 or constant-m2");
  }

  [[nodiscard]] FrameStrategy frame_strategy() const {
    if (strategy == "Privileged") return Privileged{FrameVelocity(velocity)};
    return StateDependent{FrameVelocity(velocity)};
  }

  [[nodiscard]] AutomatonRule automaton_rule() const {
    if (automaton == "identity") return AutomatonRule::identity();
    if (automaton == "constant-m1") return AutomatonRule::constant(Message::m1);
    if (automaton == "constant-m2") return AutomatonRule::constant(Message::m2);
    return AutomatonRule::negation();
  }
};

/// Config keys in the order they are reported.
inline const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "seed",      "kappa",   "w",       "x_max",   "B",         "relative_phase",
      "M",         "T",       "N",       "mode",    "alpha",     "output_dir",
      "detectors", "symbols", "trials",  "threads", "tolerance", "strategy",
      "velocity",  "separation", "automaton"};
  return keys;
}

namespace detail {

template <class T>
T scalar_as(const std::string& key, const YAML::Node& node) {
  if (!node.IsScalar()) throw ConfigError("config key '" + key + "' must be a scalar");
  if constexpr (std::is_unsigned_v<T>) {
    if (!node.Scalar().empty() && node.Scalar().front() == '-')
      throw ConfigError("config key '" + key + "' must be non-negative");
  }
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError("config key '" + key + "' has invalid value '" + node.Scalar() + "'");
  }
}

}  // namespace detail

/// Parses a flat `key: value` document, applies overrides (e.g. from the
/// command line, taking precedence), fills defaults and validates.
inline RunConfig parse_config(std::string_view text,
                              const std::map<std::string, std::string>& overrides = {}) {
  YAML::Node doc;
  try {
    doc = YAML::Load(std::string(text));
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  if (!doc.IsNull() && !doc.IsMap()) throw ConfigError("config must be a key: value mapping");

  const auto& known = config_keys();
  auto check_key = [&](const std::string& key) {
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw ConfigError("unknown config key '" + key + "'");
  };
  std::map<std::string, YAML::Node> values;
  if (doc.IsMap())
    for (const auto& kv : doc) {
      const auto key = kv.first.as<std::string>();
      check_key(key);
      values[key] = kv.second;
    }
  for (const auto& [key, value] : overrides) {
    check_key(key);
    values[key] = YAML::Node(value);
  }

  RunConfig c;
  using detail::scalar_as;
  for (const auto& [key, node] : values) {
    if (key == "seed") c.seed = scalar_as<std::uint64_t>(key, node);
    else if (key == "kappa") c.device.kappa = scalar_as<double>(key, node);
    else if (key == "w") c.device.envelope_width = scalar_as<double>(key, node);
    else if (key == "x_max") c.device.x_max = scalar_as<double>(key, node);
    else if (key == "B") c.device.bins = scalar_as<std::size_t>(key, node);
    else if (key == "relative_phase") c.device.relative_phase = scalar_as<double>(key, node);
    else if (key == "M") c.plan.pairs_per_symbol = scalar_as<std::size_t>(key, node);
    else if (key == "T") c.plan.period = scalar_as<double>(key, node);
    else if (key == "N") c.plan.telegraphs = scalar_as<std::size_t>(key, node);
    else if (key == "mode") c.mode = parse_mode(scalar_as<std::string>(key, node));
    else if (key == "alpha") c.alpha = scalar_as<double>(key, node);
    else if (key == "output_dir") c.output_dir = scalar_as<std::string>(key, node);
    else if (key == "detectors") c.detectors = parse_detectors(scalar_as<std::string>(key, node));
    else if (key == "symbols") c.symbols = scalar_as<std::size_t>(key, node);
    else if (key == "trials") c.trials = scalar_as<std::size_t>(key, node);
    else if (key == "threads") c.threads = scalar_as<unsigned>(key, node);
    else if (key == "tolerance") c.tolerance = scalar_as<double>(key, node);
    else if (key == "strategy") c.strategy = scalar_as<std::string>(key, node);
    else if (key == "velocity") c.velocity = scalar_as<double>(key, node);
    else if (key == "separation") c.separation = scalar_as<double>(key, node);
    else if (key == "automaton") c.automaton = scalar_as<std::string>(key, node);
  }
  c.validate();
  return c;
}

}  // namespace belltel
