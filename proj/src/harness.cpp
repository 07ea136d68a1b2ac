#include "torus_holonomy/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <random>
#include <thread>

#include "torus_holonomy/classical_dynamics.hpp"
#include "torus_holonomy/evolution.hpp"
#include "torus_holonomy/io.hpp"
#include "torus_holonomy/linalg.hpp"
#include "torus_holonomy/quantization.hpp"
#include "torus_holonomy/random_fields.hpp"

namespace torus {

namespace {

using nlohmann::json;

ClassicalState initial_state(const ExperimentConfig& config) {
  if (config.run.initial_state) return *config.run.initial_state;
  const auto m = static_cast<std::size_t>(config.model.dimension());
  return {std::vector<double>(m, 1.0), std::vector<double>(m, 0.0)};
}

RealPolynomial monomial(int variables, std::vector<int> exponent, double coefficient) {
  RealPolynomial p(variables);
  p.add_term(std::move(exponent), coefficient);
  return p;
}

// Angle-independent connection on axis 0, linear in sigma (d = 2):
//   Lambda^0_0 = 0.4 + 0.7 sigma_1,  Lambda^0_1 = 0.1 - 0.2 sigma_0.
ControlConnection abelian_test_connection(int m) {
  ControlConnection c(m, 2);
  c.add_constant(0, 0, monomial(2, {0, 0}, 0.4) );
  c.add_constant(0, 0, monomial(2, {0, 1}, 0.7));
  c.add_constant(0, 1, monomial(2, {0, 0}, 0.1));
  c.add_constant(0, 1, monomial(2, {1, 0}, -0.2));
  return c;
}
// Stokes: loop integral = (d_0 Lambda_1 - d_1 Lambda_0) * area.
constexpr double kAbelianCurl = -0.2 - 0.7;

// Angle- and sigma-dependent connection on axis 0 (d = 2).
ControlConnection nonabelian_test_connection(int m) {
  ControlConnection c(m, 2);
  Shift first(m, 0);
  first[0] = 1;
  c.add_constant(0, 0, monomial(2, {0, 0}, 0.5));
  c.add_cosine(0, 0, first, monomial(2, {0, 1}, 0.25));
  c.add_constant(0, 1, monomial(2, {1, 0}, 0.3));
  c.add_sine(0, 1, first, monomial(2, {0, 0}, 0.2));
  return c;
}

ParameterCurve test_loop(double duration = 1.0) {
  Eigen::VectorXd center(2);
  center << 0.3, -0.2;
  return ParameterCurve::circle(center, 0.9, 0, 1, duration);
}

TorusModel battery_model(int m, int n, bool with_control) {
  if (m == 1) return TorusModel(1, with_control ? std::vector<int>{0} : std::vector<int>{}, {0.25}, n);
  return TorusModel(2, {0}, {0.25, 0.5}, n);
}

// H = I_last^2 / 2 on the last (dynamic) axis.
DynamicHamiltonian battery_hamiltonian(int m) {
  std::vector<int> e(m, 0);
  e[m - 1] = 2;
  return DynamicHamiltonian(m).add_term(e, 0.5);
}

std::string tag(int m, int n) { return "[m=" + std::to_string(m) + ",N=" + std::to_string(n) + "]"; }

VerifyCheck make_check(std::string name, double measured, double threshold) {
  return {std::move(name), measured, threshold, measured <= threshold};
}

using CheckFn = std::function<VerifyCheck()>;

void add_model_checks(std::vector<CheckFn>& checks, int m, int n, std::uint64_t seed,
                      bool corrupt_lambda) {
  const std::string t = tag(m, n);

  checks.push_back([=] {
    const TorusModel model = battery_model(m, n, true);
    const auto modes = mode_iter(model);
    std::vector<WaveFunction> basis;
    for (const auto& mode : modes) basis.push_back(WaveFunction::basis(model, mode));
    double worst = 0.0;
    for (std::size_t i = 0; i < basis.size(); ++i)
      for (std::size_t j = 0; j < basis.size(); ++j)
        worst = std::max(worst, std::abs(inner_product(basis[i], basis[j]) - (i == j ? 1.0 : 0.0)));
    return make_check("orthonormality" + t, worst, 1e-15);
  });

  checks.push_back([=] {
    const TorusModel model = battery_model(m, n, true);
    double worst = 0.0;
    for (int k = 0; k < m; ++k) {
      const auto op = action_operator(model, k);
      for (const auto& mode : mode_iter(model)) {
        const auto psi = WaveFunction::basis(model, mode);
        const auto image = op.apply(psi);
        const Complex expected = mode[k] - model.lambda()[k];
        worst = std::max(worst, (image.coefficients() - expected * psi.coefficients()).cwiseAbs().maxCoeff());
      }
    }
    return make_check("action_eigenvectors" + t, worst, 0.0);
  });

  checks.push_back([=] {
    const TorusModel model = battery_model(m, n, m == 2);
    const auto h = battery_hamiltonian(m);
    const auto op = hamiltonian_operator(model, h);
    double worst = 0.0;
    const auto modes = mode_iter(model);
    for (std::size_t r = 0; r < modes.size(); ++r) {
      const double x = modes[r][m - 1] - model.lambda()[m - 1];
      const double expected = 0.5 * x * x;
      const auto i = static_cast<Eigen::Index>(r);
      double off = 0.0;
      for (Eigen::Index c = 0; c < op.matrix.cols(); ++c)
        if (c != i) off = std::max(off, std::abs(op.matrix(i, c)));
      worst = std::max({worst, off, std::abs(op.matrix(i, i) - expected) / std::max(1.0, expected)});
    }
    return make_check("spectral_exactness" + t, worst, 1e-14);
  });

  checks.push_back([=] {
    const TorusModel model = battery_model(m, n, m == 2);
    const auto levels = hamiltonian_spectrum(model, battery_hamiltonian(m));
    std::size_t per_label = 1;
    for (std::size_t a = 0; a < model.controlled().size(); ++a) per_label *= model.axis_size();
    double worst = 0.0;
    for (const auto& level : levels)
      worst = std::max(worst, std::abs(static_cast<double>(level.multiplicity) -
                                       static_cast<double>(per_label * level.labels.size())));
    return make_check("degeneracy_per_label" + t, worst, 0.0);
  });

  checks.push_back([=] {
    const TorusModel model = battery_model(m, n, true);
    std::mt19937_64 rng(seed + 11 * m + n);
    double worst = 0.0;
    for (int i = 0; i < 10; ++i)
      worst = std::max(worst, linalg::hermiticity_defect(
                                  quantize_affine(model, random_affine(m, 2, rng)).matrix));
    return make_check("hermiticity" + t, worst, 0.0);
  });

  checks.push_back([=] {
    const TorusModel model = battery_model(m, n, true);
    std::mt19937_64 rng(seed + 101 * m + n);
    const int bandwidth = n >= 8 ? 2 : 1;
    double worst = 0.0;
    for (int i = 0; i < 25; ++i) {
      const auto f = random_affine(m, bandwidth, rng);
      const auto g = random_affine(m, bandwidth, rng);
      worst = std::max(worst, dirac_residual(model, f, g));
    }
    return make_check("dirac_condition" + t, worst, 1e-10);
  });

  checks.push_back([=] {
    const TorusModel model = battery_model(m, n, m == 2);
    std::vector<int> e2(m, 0), e1(m, 0);
    e2[m - 1] = 2;
    e1[m - 1] = 1;
    DynamicHamiltonian h(m);
    h.add_term(e2, 0.5).add_term(e1, 0.3);
    std::vector<double> shift(m, 0.0);
    shift[m - 1] = corrupt_lambda ? 1.05 : 1.0;
    return make_check("lambda_shift_integer" + t,
                      lambda_shift_equivalence(model, h, shift).max_deviation, 1e-12);
  });

  checks.push_back([=] {
    const TorusModel model = battery_model(m, n, true);
    const std::vector<int> axes{0};
    return make_check("halfform_equivalence" + t,
                      halfform_equivalence(model, axes).max_deviation, 1e-12);
  });

  checks.push_back([=] {
    const TorusModel model = battery_model(m, n, true);
    const auto loop = test_loop();
    const auto u2 = evolve_control(model, abelian_test_connection(m), loop, 1000).op;
    const double area = std::numbers::pi * 0.9 * 0.9;
    double worst = 0.0;
    const auto modes = mode_iter(u2.model);
    for (std::size_t r = 0; r < modes.size(); ++r)
      for (std::size_t s = 0; s < modes.size(); ++s) {
        const Complex expected =
            r == s ? std::polar(1.0, -(modes[r][0] - model.lambda()[0]) * kAbelianCurl * area)
                   : Complex{};
        worst = std::max(worst, std::abs(u2.matrix(static_cast<Eigen::Index>(r),
                                                   static_cast<Eigen::Index>(s)) - expected));
      }
    return make_check("abelian_berry_phase" + t, worst, 1e-8);
  });

  checks.push_back([=] {
    const TorusModel model = battery_model(m, n, true);
    const auto report = evolve_control(model, nonabelian_test_connection(m), test_loop(), 1000);
    return make_check("unitarity" + t, report.unitarity_defect, 1e-10);
  });

  checks.push_back([=] {
    const TorusModel model = battery_model(m, n, true);
    const auto connection = nonabelian_test_connection(m);
    const auto loop = test_loop();
    const auto forward = evolve_control(model, connection, loop, 1000).op.matrix;
    const auto backward = evolve_control(model, connection, loop.reversed(), 1000).op.matrix;
    const auto id = Eigen::MatrixXcd::Identity(forward.rows(), forward.cols());
    return make_check("reversal" + t, linalg::max_abs(backward * forward - id), 1e-8);
  });

  if (m == 2) {
    checks.push_back([=] {
      const TorusModel model = battery_model(m, n, true);
      return make_check("commuting_perturbation" + t,
                        perturbation_commutator(model, battery_hamiltonian(m),
                                                nonabelian_test_connection(m), test_loop(), 10),
                        1e-12);
    });
    checks.push_back([=] {
      const TorusModel model = battery_model(m, n, true);
      const auto u2 = lift_controlled(
          model, evolve_control(model, nonabelian_test_connection(m), test_loop(), 200).op);
      return make_check("eigenspace_off_block_mass" + t,
                        off_block_mass(model, battery_hamiltonian(m), u2), 1e-12);
    });
  }
}

}  // namespace

json run_spectrum(const ExperimentConfig& config) {
  const auto levels = hamiltonian_spectrum(config.model, config.hamiltonian);
  json out_levels = json::array();
  for (const auto& level : levels)
    out_levels.push_back(
        {{"value", level.value}, {"multiplicity", level.multiplicity}, {"labels", level.labels}});
  return {{"model", io::model_to_json(config.model)},
          {"lattice_size", config.model.lattice_size()},
          {"dynamic_axes", config.model.dynamic()},
          {"levels", std::move(out_levels)}};
}

std::string run_classical(const ExperimentConfig& config) {
  const auto& curve = config.require_curve();
  return io::trajectory_csv(evolve_perturbed(config.hamiltonian, config.connection, curve,
                                             initial_state(config), config.run.steps));
}

RunOutput run_evolve(const ExperimentConfig& config) {
  const auto& curve = config.require_curve();
  const int steps = config.run.steps;
  const auto coarse = evolve_full(config.model, config.hamiltonian, config.connection, curve, steps);
  const auto fine =
      evolve_full(config.model, config.hamiltonian, config.connection, curve, 2 * steps);
  json diagnostics = {
      {"steps", steps},
      {"steps_fine", 2 * steps},
      {"method", to_string(coarse.factorized.method)},
      {"unitarity_defect_factorized", coarse.factorized.unitarity_defect},
      {"unitarity_defect_reference", coarse.reference.unitarity_defect},
      {"factorization_deviation", coarse.deviation},
      {"factorization_deviation_fine", fine.deviation},
      {"commutator_max", perturbation_commutator(config.model, config.hamiltonian,
                                                 config.connection, curve, 10)},
      {"off_block_mass", off_block_mass(config.model, config.hamiltonian, coarse.factorized.op)},
  };
  return {io::operator_to_json(coarse.factorized.op), std::move(diagnostics)};
}

RunOutput run_holonomy(const ExperimentConfig& config) {
  const auto& loop = config.require_curve();
  const int steps = config.run.steps;
  const auto& label = config.run.dynamic_index;
  const auto coarse = holonomy(config.model, config.connection, loop, label, steps);
  const auto fine = holonomy(config.model, config.connection, loop, label, 2 * steps);
  json diagnostics = {
      {"steps", steps},
      {"steps_fine", 2 * steps},
      {"method", to_string(coarse.method)},
      {"dynamic_index", label},
      {"unitarity_defect", coarse.unitarity_defect},
      {"refinement_deviation", linalg::max_abs(coarse.op.matrix - fine.op.matrix)},
      {"abelian", config.connection.angle_independent()},
  };
  if (config.connection.angle_independent()) {
    const Eigen::VectorXcd phases = abelian_phases(config.model, config.connection, loop);
    const Eigen::MatrixXcd expected = phases.asDiagonal();
    diagnostics["abelian_phase_deviation"] = linalg::max_abs(coarse.op.matrix - expected);
  }
  return {io::operator_to_json(coarse.op), std::move(diagnostics)};
}

bool VerifyReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

json VerifyReport::to_json() const {
  json list = json::array();
  for (const auto& c : checks)
    list.push_back({{"name", c.name},
                    {"measured", c.measured},
                    {"threshold", c.threshold},
                    {"passed", c.passed}});
  return {{"passed", all_passed()}, {"checks", std::move(list)}};
}

VerifyReport run_verify(const ExperimentConfig* config, unsigned threads) {
  const std::uint64_t seed = config ? config->run.seed : kDefaultSeed;
  const bool corrupt = config && config->run.fault_injection == "lambda";

  std::vector<CheckFn> checks;
  for (int m : {1, 2})
    for (int n : {4, 8}) add_model_checks(checks, m, n, seed, corrupt);

  checks.push_back([] {
    const TorusModel model(1, {0}, {0.25}, 12);
    Eigen::VectorXd start(2), velocity(2);
    start << 0.0, 0.0;
    velocity << 1.0, 0.5;
    const auto curve = ParameterCurve::linear(start, velocity, 1.0);
    const std::vector<double> phi0{0.3};
    const auto transport =
        classical_mode_transport(model, nonabelian_test_connection(1), curve, phi0, 10000, 8);
    return make_check("classical_mode_transport[m=1,N=12]", transport.discrepancy, 1e-6);
  });

  if (config) {
    const ExperimentConfig* cfg = config;
    checks.push_back([cfg] {
      return make_check("config.split_residual",
                        static_cast<double>(split_residual(cfg->hamiltonian, cfg->connection, cfg->model)),
                        0.0);
    });
    if (cfg->curve && !cfg->model.controlled().empty()) {
      checks.push_back([cfg] {
        return make_check("config.commuting_perturbation",
                          perturbation_commutator(cfg->model, cfg->hamiltonian, cfg->connection,
                                                  *cfg->curve, 10),
                          1e-12);
      });
      checks.push_back([cfg] {
        return make_check(
            "config.unitarity",
            evolve_control(cfg->model, cfg->connection, *cfg->curve, cfg->run.steps).unitarity_defect,
            1e-10);
      });
      checks.push_back([cfg] {
        const auto f = evolve_control(cfg->model, cfg->connection, *cfg->curve, cfg->run.steps).op.matrix;
        const auto b =
            evolve_control(cfg->model, cfg->connection, cfg->curve->reversed(), cfg->run.steps).op.matrix;
        return make_check("config.reversal",
                          linalg::max_abs(b * f - Eigen::MatrixXcd::Identity(f.rows(), f.cols())),
                          1e-8);
      });
    }
  }

  VerifyReport report;
  report.checks.resize(checks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < checks.size(); i = next++) {
      try {
        report.checks[i] = checks[i]();
      } catch (const std::exception& e) {
        report.checks[i] = {"error: " + std::string(e.what()), INFINITY, 0.0, false};
      }
    }
  };
  const unsigned count = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(checks.size())));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < count; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return report;
}

unsigned worker_threads() {
  if (const char* env = std::getenv("TORUS_HOLONOMY_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace torus
