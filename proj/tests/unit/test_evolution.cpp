#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fixtures.hpp"
#include "torus_holonomy/errors.hpp"
#include "torus_holonomy/evolution.hpp"
#include "torus_holonomy/linalg.hpp"

using namespace torus;
using fixtures::max_abs;
using fixtures::mono;
using fixtures::vec;

namespace {

DynamicHamiltonian dynamic_square(int m) {
  std::vector<int> e(m, 0);
  e[m - 1] = 2;
  DynamicHamiltonian h(m);
  h.add_term(e, 0.5);
  return h;
}

Eigen::MatrixXcd identity(Eigen::Index n) { return Eigen::MatrixXcd::Identity(n, n); }

}  // namespace

TEST_CASE("delta generator elements") {
  const TorusModel model(1, {0}, {0.0}, 4);
  const std::vector<double> sigma{0.0}, still{0.0}, unit{1.0}, v{2.5};
  ControlConnection kappa(1, 1);
  kappa.add_constant(0, 0, mono(1, {0}, 0.8));
  CHECK(max_abs(delta_generator(model, kappa, sigma, still).matrix) == 0.0);

  const auto diag = delta_generator(TorusModel(1, {0}, {0.3}, 4), kappa, sigma, v).matrix;
  for (int n = -4; n <= 4; ++n)
    CHECK(diag(n + 4, n + 4).real() == doctest::Approx((n - 0.3) * 0.8 * 2.5));

  ControlConnection wave(1, 1);
  wave.add_cosine(0, 0, {1}, mono(1, {0}, 1.0));
  const auto op = delta_generator(model, wave, sigma, unit).matrix;
  for (int n = -4; n < 4; ++n) {
    CHECK(std::abs(op(n + 5, n + 4) - 0.5 * (n + 0.5)) < 1e-15);
    CHECK(std::abs(op(n + 4, n + 5) - 0.5 * (n + 1 - 0.5)) < 1e-15);
  }
}

TEST_CASE("dynamic evolution is pure phase") {
  const TorusModel model(2, {0}, {0.0, 0.0}, 3);
  const auto h = dynamic_square(2);
  const std::vector<int> n{2, 1};
  const auto psi = WaveFunction::basis(model, n);
  const auto same = evolve_dynamic(model, h, psi, 0.0);
  CHECK((same.coefficients() - psi.coefficients()).norm() == 0.0);
  const auto moved = evolve_dynamic(model, h, psi, std::numbers::pi);
  const Complex c = moved.coefficient(n);
  CHECK(c.real() == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(c.imag() == doctest::Approx(-1.0));
  CHECK(moved.norm_squared() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(linalg::unitarity_defect(dynamic_propagator(model, h, 1.3).matrix) < 1e-15);
}

TEST_CASE("control propagator basics") {
  const TorusModel model(2, {0}, {0.25, 0.5}, 4);
  const auto zero = evolve_control(model, ControlConnection(2, 2), fixtures::circle(), 10);
  CHECK(max_abs(zero.op.matrix - identity(9)) == 0.0);
  CHECK(zero.op.model == model.controlled_submodel());

  const auto still = evolve_control(model, fixtures::nonabelian(2),
                                    ParameterCurve::constant(vec({0.2, 0.1}), 1.0), 20);
  CHECK(max_abs(still.op.matrix - identity(9)) == 0.0);

  const auto report = evolve_control(model, fixtures::nonabelian(2), fixtures::circle(), 500);
  CHECK(report.unitarity_defect <= 1e-10);
  CHECK(report.steps == 500);
  CHECK(to_string(report.method) == "ordered-product");
}

TEST_CASE("abelian connection gives the Stokes phases") {
  const fixtures::LinearAbelian conn;
  const TorusModel model(2, {0}, {0.25, 0.5}, 4);
  const auto u = evolve_control(model, conn.build(2), fixtures::circle(), 1000).op.matrix;
  for (int n = -4; n <= 4; ++n) {
    const Complex expected = fixtures::abelian_phase(conn, n - 0.25);
    CHECK(std::abs(u(n + 4, n + 4) - expected) <= 1e-8);
  }
  CHECK(max_abs(u - Eigen::MatrixXcd(u.diagonal().asDiagonal())) == 0.0);

  const auto phases = abelian_phases(model, conn.build(2), fixtures::circle());
  CHECK(max_abs(phases - u.diagonal()) <= 1e-8);
  const auto integral = connection_line_integral(conn.build(2), fixtures::circle());
  CHECK(integral[0] == doctest::Approx(conn.curl() * std::numbers::pi * 0.81).epsilon(1e-12));
  CHECK_THROWS_AS(abelian_phases(model, fixtures::nonabelian(2), fixtures::circle()), PreconditionError);
}

TEST_CASE("control propagator converges at second order") {
  const TorusModel model(1, {0}, {0.25}, 4);
  const auto c = fixtures::nonabelian(1);
  const auto loop = fixtures::circle();
  auto at = [&](int steps) { return evolve_control(model, c, loop, steps).op.matrix; };
  const auto u1 = at(50), u2 = at(100), u4 = at(200);
  const double d1 = max_abs(u1 - u2), d2 = max_abs(u2 - u4);
  CHECK(d1 > 0.0);
  // the estimate sits just below 2 at these step counts (higher-order terms)
  CHECK(std::log2(d1 / d2) >= 2.0 - 0.05);
}

TEST_CASE("lifting and eigenspace blocks") {
  const TorusModel model(2, {0}, {0.25, 0.5}, 3);
  const auto u2 = evolve_control(model, fixtures::nonabelian(2), fixtures::circle(), 200).op;
  const auto lifted = lift_controlled(model, u2);
  CHECK(lifted.matrix.rows() == 49);
  CHECK(off_block_mass(model, dynamic_square(2), lifted) == 0.0);
  for (int nj = -3; nj <= 3; ++nj) {
    const std::vector<int> label{nj};
    CHECK(max_abs(eigenspace_block(model, lifted, label).matrix - u2.matrix) == 0.0);
  }
  CHECK(perturbation_commutator(model, dynamic_square(2), fixtures::nonabelian(2), fixtures::circle(), 10) <= 1e-12);
}

TEST_CASE("holonomy") {
  const TorusModel model(2, {0}, {0.25, 0.5}, 3);
  const std::vector<int> label{1};
  const auto line = ParameterCurve::linear(vec({0.0, 0.0}), vec({1.0, 0.0}), 1.0);
  CHECK_THROWS_AS(holonomy(model, fixtures::nonabelian(2), line, label, 10), PreconditionError);
  const std::vector<int> outside{7};
  CHECK_THROWS_AS(holonomy(model, fixtures::nonabelian(2), fixtures::circle(), outside, 10), PreconditionError);

  const auto still = holonomy(model, fixtures::nonabelian(2),
                              ParameterCurve::constant(vec({0.1, 0.1}), 1.0), label, 10);
  CHECK(max_abs(still.op.matrix - identity(7)) == 0.0);

  const auto loop = fixtures::circle();
  const auto there_and_back = loop.followed_by(loop.reversed());
  const auto h = holonomy(model, fixtures::nonabelian(2), there_and_back, label, 2000);
  CHECK(max_abs(h.op.matrix - identity(7)) <= 1e-8);
}

TEST_CASE("full evolution factorizes") {
  const TorusModel model(2, {0}, {0.25, 0.5}, 3);
  const auto h = dynamic_square(2);

  const auto plain = evolve_full(model, h, ControlConnection(2, 2), fixtures::circle(), 50);
  const auto u1 = dynamic_propagator(model, h, 1.0).matrix;
  CHECK(max_abs(plain.factorized.op.matrix - u1) <= 1e-14);
  CHECK(max_abs(plain.reference.op.matrix - u1) <= 1e-12);

  const auto coarse = evolve_full(model, h, fixtures::nonabelian(2), fixtures::circle(), 200);
  const auto fine = evolve_full(model, h, fixtures::nonabelian(2), fixtures::circle(), 400);
  CHECK(coarse.deviation <= 1e-4);
  CHECK(fine.deviation < coarse.deviation);
  CHECK(coarse.reference.unitarity_defect <= 1e-10);
  CHECK(to_string(coarse.reference.method) == "reference");
}

TEST_CASE("path invariance") {
  const TorusModel model(1, {0}, {0.25}, 3);
  const auto c = fixtures::nonabelian(1);
  const auto loop = fixtures::circle();
  const std::vector<Reparameterization> same{Reparameterization::identity(1.0)};
  CHECK(path_invariance_report(model, c, loop, same, 100) == 0.0);

  const std::vector<Reparameterization> taus{Reparameterization::identity(1.0),
                                             Reparameterization::quadratic(1.0, 1.0)};
  CHECK(path_invariance_report(model, c, loop, taus, 2000) <= 1e-5);

  const fixtures::LinearAbelian conn;
  const std::vector<Reparameterization> three{Reparameterization::quadratic(1.0, 1.0),
                                              Reparameterization::smoothstep(1.0, 2.0),
                                              Reparameterization::wobble(1.0, 0.5, 0.1)};
  // non-periodic speed profiles leave the O(h^2) midpoint error, hence the step count
  for (const auto& tau : three) {
    const auto u = evolve_control(model, conn.build(1), loop.reparameterized(tau), 40000).op.matrix;
    for (int n = -3; n <= 3; ++n)
      CHECK(std::abs(u(n + 3, n + 3) - fixtures::abelian_phase(conn, n - 0.25)) <= 1e-8);
  }
}
