#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "torus_holonomy/core_types.hpp"
#include "torus_holonomy/observables.hpp"
#include "torus_holonomy/parameter_curve.hpp"

namespace torus {

/// Schema or syntax problem in an experiment config. `where` is a JSON
/// pointer ("/model/N") or "line L, column C" for syntax errors.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string where, const std::string& message)
      : std::runtime_error(where + ": " + message), where_(std::move(where)) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

inline constexpr int kSchemaVersion = 1;
inline constexpr std::uint64_t kDefaultSeed = 20240917;

struct RunSettings {
  int steps = 1000;
  std::optional<ClassicalState> initial_state;
  /// Dynamic label n_j selecting the eigenspace for holonomy runs.
  std::vector<int> dynamic_index;
  std::uint64_t seed = kDefaultSeed;
  std::vector<std::string> outputs;
  /// "lambda" corrupts one representation in the verify battery.
  std::string fault_injection;
};

struct ExperimentConfig {
  TorusModel model;
  DynamicHamiltonian hamiltonian;
  ControlConnection connection;
  std::optional<ParameterCurve> curve;
  RunSettings run;
  nlohmann::json source;

  const ParameterCurve& require_curve() const;
};

/// Validates a parsed document. Fourier modes of the connection given for c
/// without -c are completed with the conjugate polynomial; when both are
/// given they must be conjugate within 1e-12.
ExperimentConfig parse_config(const nlohmann::json& document);
ExperimentConfig parse_config_text(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace torus
