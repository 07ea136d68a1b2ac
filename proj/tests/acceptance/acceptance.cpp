// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "torus_holonomy/classical_dynamics.hpp"
#include "torus_holonomy/config.hpp"
#include "torus_holonomy/evolution.hpp"
#include "torus_holonomy/linalg.hpp"
#include "torus_holonomy/quantization.hpp"
#include "torus_holonomy/random_fields.hpp"

using namespace torus;
using fixtures::max_abs;
using fixtures::mono;
using fixtures::vec;

namespace {

struct Outcome {
  bool passed;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buffer[512];
  std::snprintf(buffer, sizeof buffer, format, args...);
  return buffer;
}

DynamicHamiltonian half_square_on_axis1() {
  DynamicHamiltonian h(2);
  h.add_term({0, 2}, 0.5);
  return h;
}

const TorusModel kModel(2, {0}, {0.25, 0.5}, 8);

Eigen::MatrixXcd identity(Eigen::Index n) { return Eigen::MatrixXcd::Identity(n, n); }

Outcome spectral_exactness() {
  const auto h = half_square_on_axis1();
  const auto op = hamiltonian_operator(kModel, h);
  double worst = 0.0;
  std::map<int, std::size_t> per_label;
  std::map<int, double> label_value;
  bool consistent = true;
  for (const auto& n : mode_iter(kModel)) {
    const double x = n[1] - 0.5;
    const double expected = 0.5 * x * x;
    const auto psi = WaveFunction::basis(kModel, n);
    const Eigen::VectorXcd residual = op.apply(psi).coefficients() - expected * psi.coefficients();
    worst = std::max(worst, residual.cwiseAbs().maxCoeff() / std::abs(expected));
    const auto i = static_cast<Eigen::Index>(kModel.linear_index(n));
    if (per_label.count(n[1]) && op.matrix(i, i).real() != label_value[n[1]]) consistent = false;
    label_value[n[1]] = op.matrix(i, i).real();
    ++per_label[n[1]];
  }
  bool all17 = per_label.size() == 17;
  for (const auto& [label, count] : per_label) all17 = all17 && count == 17;

  // Informational: H(n - 1/2) is symmetric under n -> 1 - n, so most levels
  // carry two dynamic labels.
  std::size_t two_label_levels = 0;
  for (const auto& level : hamiltonian_spectrum(kModel, h))
    if (level.labels.size() == 2) ++two_label_levels;

  return {worst <= 1e-14 && all17 && consistent,
          fmt("max rel. error %.3e (tol 1e-14); %zu dynamic labels x 17 controlled modes each; "
              "%zu levels merge labels n and 1-n",
              worst, per_label.size(), two_label_levels)};
}

Outcome dirac_condition() {
  std::mt19937_64 rng(kDefaultSeed);
  double worst = 0.0;
  const int pairs = 120;
  int max_bw = 0;
  for (int i = 0; i < pairs; ++i) {
    const auto f = random_affine(2, 2, rng);
    const auto g = random_affine(2, 2, rng);
    max_bw = std::max({max_bw, f.bandwidth(), g.bandwidth()});
    worst = std::max(worst, dirac_residual(kModel, f, g));
  }
  return {worst <= 1e-10 && max_bw <= 2,
          fmt("%d seeded pairs, bandwidth <= %d, max interior residual %.3e (tol 1e-10)", pairs,
              max_bw, worst)};
}

ControlConnection random_controlled_connection(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  ControlConnection c(2, 2);
  for (int p = 0; p < 2; ++p) {
    c.add_constant(0, p, mono(2, {0, 0}, u(rng)));
    c.add_constant(0, p, mono(2, {1, 0}, u(rng)));
    for (int harmonic = 1; harmonic <= 2; ++harmonic) {
      c.add_cosine(0, p, {harmonic, 0}, mono(2, {0, 1}, u(rng)));
      c.add_sine(0, p, {harmonic, 0}, mono(2, {0, 0}, u(rng)));
    }
  }
  return c;
}

Outcome commuting_perturbation() {
  double worst = 0.0;
  int cases = 0;
  for (auto entry : std::filesystem::directory_iterator(TORUS_CONFIG_DIR)) {
    const auto config = load_config(entry.path());
    if (!config.curve || config.model.controlled().empty()) continue;
    if (split_residual(config.hamiltonian, config.connection, config.model) != 0) continue;
    worst = std::max(worst, perturbation_commutator(config.model, config.hamiltonian,
                                                    config.connection, *config.curve, 10));
    ++cases;
  }
  std::mt19937_64 rng(kDefaultSeed + 3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 10; ++i) {
    DynamicHamiltonian h(2);
    h.add_term({0, 1}, u(rng)).add_term({0, 2}, u(rng)).add_term({0, 3}, 0.1 * u(rng));
    worst = std::max(worst, perturbation_commutator(kModel, h, random_controlled_connection(rng),
                                                    fixtures::circle(), 10));
    ++cases;
  }
  return {worst <= 1e-12, fmt("%d split-compliant cases x 10 times, max |[Delta, H]| %.3e (tol 1e-12)",
                              cases, worst)};
}

Outcome abelian_berry() {
  const fixtures::LinearAbelian conn;
  const auto c = conn.build(2);
  const auto u = evolve_control(kModel, c, fixtures::circle(1.0), 1000).op.matrix;
  const auto slow = evolve_control(kModel, c, fixtures::circle(2.0), 1000).op.matrix;
  double oracle = 0.0;
  for (int n = -8; n <= 8; ++n)
    oracle = std::max(oracle, std::abs(u(n + 8, n + 8) - fixtures::abelian_phase(conn, n - 0.25)));
  const double off = max_abs(u - Eigen::MatrixXcd(u.diagonal().asDiagonal()));
  const double speed = max_abs(u - slow);
  return {oracle <= 1e-8 && off <= 1e-8 && speed <= 1e-8,
          fmt("phase error %.3e, off-diagonal %.3e, half-speed change %.3e (tol 1e-8)", oracle,
              off, speed)};
}

Outcome reparameterization_invariance() {
  const auto c = fixtures::nonabelian(2);
  const auto loop = fixtures::circle();
  const auto slowed = loop.reparameterized(Reparameterization::quadratic(1.0, 1.0));
  auto deviation = [&](int steps) {
    return max_abs(evolve_control(kModel, c, loop, steps).op.matrix -
                   evolve_control(kModel, c, slowed, steps).op.matrix);
  };
  const double d_quarter = deviation(2500), d_half = deviation(5000), d_full = deviation(10000);
  const double order_a = std::log2(d_quarter / d_half), order_b = std::log2(d_half / d_full);
  return {d_full <= 1e-6 && order_a >= 2.0 && order_b >= 2.0,
          fmt("deviation %.3e at 1e4 steps (tol 1e-6); observed orders %.8f, %.8f (need >= 2)",
              d_full, order_a, order_b)};
}

Outcome group_laws() {
  const auto c = fixtures::nonabelian(2);
  const auto loop = fixtures::circle();
  const auto forward = evolve_control(kModel, c, loop, 1000).op.matrix;
  const auto backward = evolve_control(kModel, c, loop.reversed(), 1000).op.matrix;
  const double reversal = max_abs(backward * forward - identity(17));

  const auto second = ParameterCurve::waypoints(
      {loop.end(), vec({1.5, 0.4}), vec({0.2, 1.0})}, 0.5);
  const auto joined = loop.followed_by(second);
  const auto u1 = evolve_control(kModel, c, loop, 2000).op.matrix;
  const auto u2 = evolve_control(kModel, c, second, 1000).op.matrix;
  const auto u12 = evolve_control(kModel, c, joined, 3000).op.matrix;
  const double concatenation = max_abs(u12 - u2 * u1);
  return {reversal <= 1e-8 && concatenation <= 1e-8,
          fmt("reversal %.3e, concatenation %.3e (tol 1e-8)", reversal, concatenation)};
}

Outcome factorization() {
  const TorusModel model(2, {0}, {0.25, 0.5}, 4);
  DynamicHamiltonian h(2);
  h.add_term({0, 2}, 0.5).add_term({0, 1}, 0.3);
  const auto c = fixtures::nonabelian(2);
  const auto coarse = evolve_full(model, h, c, fixtures::circle(), 1000);
  const auto fine = evolve_full(model, h, c, fixtures::circle(), 2000);
  return {coarse.deviation <= 1e-6 && fine.deviation < coarse.deviation,
          fmt("N=4: deviation %.3e at 1e3 steps (tol 1e-6), %.3e at 2e3 steps, observed order %.3f",
              coarse.deviation, fine.deviation, std::log2(coarse.deviation / fine.deviation))};
}

Outcome unitarity_and_blocks() {
  const auto h = half_square_on_axis1();
  const auto c = fixtures::nonabelian(2);
  const auto loop = fixtures::circle();
  double worst = linalg::unitarity_defect(dynamic_propagator(kModel, h, 1.7).matrix);
  const auto u2 = evolve_control(kModel, c, loop, 1000);
  worst = std::max(worst, u2.unitarity_defect);
  const std::vector<int> label{2};
  worst = std::max(worst, holonomy(kModel, c, loop, label, 1000).unitarity_defect);
  const TorusModel small(2, {0}, {0.25, 0.5}, 4);
  const auto full = evolve_full(small, h, c, loop, 1000);
  worst = std::max({worst, full.factorized.unitarity_defect, full.reference.unitarity_defect});
  const double mass = off_block_mass(kModel, h, lift_controlled(kModel, u2.op));
  return {worst <= 1e-10 && mass <= 1e-12,
          fmt("max unitarity defect %.3e (tol 1e-10); off-block mass %.3e (tol 1e-12)", worst, mass)};
}

Outcome classical_consistency() {
  const TorusModel model(1, {0}, {0.25}, 12);
  const auto c = fixtures::nonabelian(1);
  const auto line = ParameterCurve::linear(vec({0.0, 0.0}), vec({1.0, 0.5}), 1.0);
  const std::vector<double> phi0{0.3};
  const double transport = classical_mode_transport(model, c, line, phi0, 10000, 8).discrepancy;

  DynamicHamiltonian h(2);
  h.add_term({0, 2}, 0.5);
  const auto c2 = fixtures::nonabelian(2);
  const auto loop = fixtures::circle();
  const ClassicalState s0{{0.8, 1.1}, {0.3, -0.2}};
  const auto a = evolve_perturbed(h, c2, loop, s0, 10000).back().state;
  const auto b = evolve_perturbed(h, c2, loop.reparameterized(Reparameterization::quadratic(1.0, 1.0)),
                                  s0, 10000).back().state;
  double invariance = 0.0;
  for (int k = 0; k < 2; ++k)
    invariance = std::max({invariance, std::abs(a.actions[k] - b.actions[k]),
                           angle_distance(a.angles[k], b.angles[k])});

  auto final_at = [&](int steps) { return evolve_perturbed(h, c2, loop, s0, steps).back().state; };
  const auto reference = final_at(1280);
  auto error = [&](int steps) {
    const auto s = final_at(steps);
    return std::max(std::abs(s.actions[0] - reference.actions[0]),
                    std::abs(s.angles[0] - reference.angles[0]));
  };
  const double order = std::log2(error(20) / error(40));
  return {transport <= 1e-6 && invariance <= 1e-6 && order >= 3.5,
          fmt("route discrepancy %.3e, reparameterized final state %.3e (tol 1e-6); RK4 order %.3f "
              "(need >= 3.5)",
              transport, invariance, order)};
}

Outcome gauge_equivalences() {
  DynamicHamiltonian h(2);
  h.add_term({0, 2}, 0.5).add_term({0, 1}, 0.3);
  double shift = 0.0;
  for (const auto& z : std::vector<std::vector<double>>{{0.0, 1.0}, {0.0, -2.0}, {1.0, 1.0}, {3.0, 0.0}})
    shift = std::max(shift, lambda_shift_equivalence(kModel, h, z).max_deviation);
  double half = 0.0;
  for (const auto& axes : std::vector<std::vector<int>>{{0}, {1}, {0, 1}})
    half = std::max(half, halfform_equivalence(kModel, axes).max_deviation);
  return {shift <= 1e-12 && half <= 1e-12,
          fmt("integer shift %.3e, half-form %.3e (tol 1e-12)", shift, half)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"spectral exactness", spectral_exactness},
      {"Dirac condition", dirac_condition},
      {"commuting perturbation", commuting_perturbation},
      {"Abelian Berry oracle", abelian_berry},
      {"reparameterization invariance", reparameterization_invariance},
      {"group laws", group_laws},
      {"factorization", factorization},
      {"unitarity and eigenspace preservation", unitarity_and_blocks},
      {"classical consistency", classical_consistency},
      {"gauge and half-form equivalences", gauge_equivalences},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome{false, ""};
    try {
      outcome = criteria[i].second();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!outcome.passed) ++failures;
    std::printf("%s criterion %zu (%s): %s [%.1f s]\n", outcome.passed ? "PASS" : "FAIL", i + 1,
                criteria[i].first.c_str(), outcome.detail.c_str(), seconds);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
