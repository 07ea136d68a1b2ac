// torus-holonomy: spectrum | classical | evolve | holonomy | verify
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "torus_holonomy/config.hpp"
#include "torus_holonomy/errors.hpp"
#include "torus_holonomy/harness.hpp"
#include "torus_holonomy/io.hpp"

namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kConfigError = 2, kPreconditionError = 3, kVerifyFailure = 4 };

struct Options {
  std::string config;
  std::string out = ".";
  std::optional<int> steps;
  bool quiet = false;
};

void emit(const Options& opts, const fs::path& path, const std::string& contents) {
  fs::create_directories(path.parent_path());
  torus::io::write_atomic(path, contents);
  if (!opts.quiet) std::cout << "wrote " << path.string() << "\n";
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantized torus evolution with controlled-angle holonomy"};
  app.require_subcommand(1);
  app.fallthrough();
  Options opts;
  app.add_option("--config", opts.config, "experiment config (JSON)");
  app.add_option("--out", opts.out, "output directory");
  app.add_option("--steps", opts.steps, "override run.steps")->check(CLI::PositiveNumber);
  app.add_flag("--quiet", opts.quiet, "suppress progress output");

  auto* spectrum = app.add_subcommand("spectrum", "Hamiltonian levels with multiplicities");
  auto* classical = app.add_subcommand("classical", "perturbed classical trajectory (CSV)");
  auto* evolve = app.add_subcommand("evolve", "factorized propagator with reference deviation");
  auto* holonomy = app.add_subcommand("holonomy", "holonomy of a closed loop on one eigenspace");
  auto* verify = app.add_subcommand("verify", "invariant battery");

  CLI11_PARSE(app, argc, argv);

  std::optional<torus::ExperimentConfig> config;
  if (!opts.config.empty()) {
    try {
      config = torus::load_config(opts.config);
      if (opts.steps) config->run.steps = *opts.steps;
    } catch (const std::exception& e) {
      std::cerr << "config error: " << e.what() << "\n";
      return kConfigError;
    }
  } else if (!verify->parsed()) {
    std::cerr << "config error: --config is required for this subcommand\n";
    return kConfigError;
  }

  const fs::path out(opts.out);
  try {
    if (spectrum->parsed()) {
      emit(opts, out / "spectrum.json", dump(torus::run_spectrum(*config)));
    } else if (classical->parsed()) {
      emit(opts, out / "trajectory.csv", torus::run_classical(*config));
    } else if (evolve->parsed()) {
      const auto result = torus::run_evolve(*config);
      emit(opts, out / "evolve.json", dump(result.matrix));
      emit(opts, out / "evolve_diagnostics.json", dump(result.diagnostics));
    } else if (holonomy->parsed()) {
      const auto result = torus::run_holonomy(*config);
      emit(opts, out / "holonomy.json", dump(result.matrix));
      emit(opts, out / "holonomy_diagnostics.json", dump(result.diagnostics));
    } else if (verify->parsed()) {
      const auto report =
          torus::run_verify(config ? &*config : nullptr, torus::worker_threads());
      emit(opts, out / "verify.json", dump(report.to_json()));
      if (!opts.quiet)
        for (const auto& c : report.checks)
          std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << " measured=" << c.measured
                    << " threshold=" << c.threshold << "\n";
      return report.all_passed() ? kOk : kVerifyFailure;
    }
  } catch (const torus::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const torus::PreconditionError& e) {
    std::cerr << "precondition error: " << e.what() << "\n";
    return kPreconditionError;
  } catch (const torus::SplitViolation& e) {
    std::cerr << "precondition error: " << e.what() << "\n";
    return kPreconditionError;
  } catch (const torus::BandwidthError& e) {
    std::cerr << "precondition error: " << e.what() << "\n";
    return kPreconditionError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kOk;
}
