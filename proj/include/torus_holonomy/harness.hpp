#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "torus_holonomy/config.hpp"

namespace torus {

/// Sorted Hamiltonian levels: [{"value", "multiplicity", "labels"}], labels
/// being the dynamic indices n_j that produce the level.
nlohmann::json run_spectrum(const ExperimentConfig& config);

/// CSV trajectory of the perturbed classical flow along the config curve.
std::string run_classical(const ExperimentConfig& config);

struct RunOutput {
  /// Operator in the matrix export format.
  nlohmann::json matrix;
  /// Flat diagnostics report.
  nlohmann::json diagnostics;
};

/// Factorized U_1 U_2 on the full lattice with the reference-route deviation
/// at run.steps and 2 * run.steps.
RunOutput run_evolve(const ExperimentConfig& config);

/// Holonomy of the (closed) config curve on the eigenspace run.dynamic_index.
/// Throws PreconditionError for open curves.
RunOutput run_holonomy(const ExperimentConfig& config);

struct VerifyCheck {
  std::string name;
  double measured = 0.0;
  double threshold = 0.0;
  bool passed = false;
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;
  bool all_passed() const;
  nlohmann::json to_json() const;
};

/// Built-in battery (m in {1,2}, N in {4,8}) plus config-specific checks when
/// a config is given. Checks run on up to `threads` workers; the report order
/// and values do not depend on the thread count.
VerifyReport run_verify(const ExperimentConfig* config, unsigned threads);

/// TORUS_HOLONOMY_THREADS when set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
unsigned worker_threads();

}  // namespace torus
