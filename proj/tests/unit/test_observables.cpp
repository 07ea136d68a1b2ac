#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "torus_holonomy/errors.hpp"
#include "torus_holonomy/observables.hpp"
#include "torus_holonomy/random_fields.hpp"

using namespace torus;
using fixtures::mono;

TEST_CASE("polynomial algebra") {
  RealPolynomial p(2);
  p.add_term({2, 0}, 0.5).add_term({0, 1}, 3.0).add_term({0, 1}, -3.0);
  CHECK(p.terms().size() == 1);
  CHECK(p.depends_on(0));
  CHECK_FALSE(p.depends_on(1));
  CHECK(p.degree() == 2);
  const std::vector<double> x{3.0, 7.0};
  CHECK(p.evaluate(x) == doctest::Approx(4.5));
  CHECK(p.derivative(0).evaluate(x) == doctest::Approx(3.0));
  CHECK(p.derivative(1).is_zero());
  CHECK_THROWS(p.add_term({-1, 0}, 1.0));
}

TEST_CASE("field evaluation") {
  const std::vector<double> any{0.7};
  CHECK(TorusFourierField::constant(1, 1.0).evaluate(any) == Complex(1.0));

  const auto c = TorusFourierField::cosine(1, 0, 1.0);
  CHECK(c.coefficient({1}) == Complex(0.5));
  CHECK(c.coefficient({-1}) == Complex(0.5));
  const std::vector<double> zero{0.0}, third{std::numbers::pi / 3};
  CHECK(c.evaluate(zero).real() == doctest::Approx(1.0));
  CHECK(c.evaluate(third).real() == doctest::Approx(0.5));

  const auto s = TorusFourierField::sine(1, 0, 2.0);
  CHECK(s.evaluate(third).real() == doctest::Approx(2.0 * std::sin(std::numbers::pi / 3)));
  CHECK(s.derivative(0).evaluate(third).real() ==
        doctest::Approx(2.0 * std::cos(std::numbers::pi / 3)));
}

TEST_CASE("real fields require conjugate symmetry") {
  std::map<Shift, Complex> bad{{{1}, Complex(1.0, 0.0)}, {{-1}, Complex(0.0, 1.0)}};
  CHECK_THROWS_AS(TorusFourierField(1, bad), std::invalid_argument);
  std::map<Shift, Complex> good{{{1}, Complex(0.3, 0.2)}, {{-1}, Complex(0.3, -0.2)}};
  const TorusFourierField f(1, good);
  CHECK(f.bandwidth() == 1);
  CHECK(std::abs(f.evaluate(std::vector<double>{1.1}).imag()) < 1e-16);
}

TEST_CASE("field product matches pointwise product") {
  std::mt19937_64 rng(7);
  const auto f = random_real_field(2, 2, rng);
  const auto g = random_real_field(2, 1, rng);
  const auto fg = f * g;
  CHECK(fg.bandwidth() <= 3);
  const std::vector<double> phi{0.4, -1.3};
  CHECK(std::abs(fg.evaluate(phi) - f.evaluate(phi) * g.evaluate(phi)) < 1e-12);
}

TEST_CASE("poisson bracket examples") {
  const auto i1 = AffineObservable::action(2, 0);
  const auto i2 = AffineObservable::action(2, 1);
  const auto zero = poisson_bracket(i1, i2);
  CHECK(zero.bandwidth() == 0);
  CHECK(zero.b().is_zero());
  for (const auto& a : zero.a()) CHECK(a.is_zero());

  const auto cos1 = AffineObservable::function(TorusFourierField::cosine(2, 0, 1.0));
  const auto b = poisson_bracket(i1, cos1);
  for (const auto& a : b.a()) CHECK(a.is_zero());
  for (double phi : {0.0, 0.5, 2.0}) {
    const std::vector<double> angles{phi, 0.3};
    CHECK(b.b().evaluate(angles).real() == doctest::Approx(-std::sin(phi)));
  }
}

TEST_CASE("poisson bracket golden: {cos(phi) I, sin(phi) I} = I") {
  // d_I f d_phi g - d_phi f d_I g = cos^2 I + sin^2 I, worked by hand.
  AffineObservable f({TorusFourierField::cosine(1, 0, 1.0)}, TorusFourierField(1));
  AffineObservable g({TorusFourierField::sine(1, 0, 1.0)}, TorusFourierField(1));
  const auto h = poisson_bracket(f, g);
  CHECK(h.a()[0].bandwidth() == 0);
  CHECK(std::abs(h.a()[0].coefficient({0}) - Complex(1.0)) < 1e-15);
  CHECK(h.b().is_zero());
}

TEST_CASE("poisson bracket against finite differences") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int m = 1 + trial % 2;
    const auto f = random_affine(m, 2, rng);
    const auto g = random_affine(m, 2, rng);
    const auto h = poisson_bracket(f, g);
    CHECK(h.bandwidth() <= 4);
    for (int p = 0; p < 3; ++p) {
      std::vector<double> actions(m), angles(m);
      for (int k = 0; k < m; ++k) {
        actions[k] = u(rng);
        angles[k] = u(rng);
      }
      CHECK(std::abs(h.evaluate(actions, angles) - oracles::bracket_fd(f, g, actions, angles)) < 1e-8);
    }
  }
}

TEST_CASE("poisson bracket bandwidth cap") {
  // {cos(2 phi) I, cos(2 phi)} = -sin(4 phi)
  AffineObservable f({TorusFourierField::cosine(1, 0, 1.0, 2)}, TorusFourierField(1));
  const auto g = AffineObservable::function(TorusFourierField::cosine(1, 0, 1.0, 2));
  CHECK(poisson_bracket(f, g).bandwidth() == 4);
  CHECK_THROWS_AS(poisson_bracket(f, g, 3), BandwidthError);
  CHECK_NOTHROW(poisson_bracket(f, g, 4));
  CHECK_THROWS_AS(poisson_bracket(f, AffineObservable(2)), DimensionError);
}

TEST_CASE("connection as observable") {
  ControlConnection kappa(1, 1);
  kappa.add_constant(0, 0, mono(1, {0}, 0.8));
  const std::vector<double> sigma{0.0}, still{0.0}, v{1.5};

  const auto zero = connection_as_observable(kappa, sigma, still);
  CHECK(zero.a()[0].is_zero());

  const auto drift = connection_as_observable(kappa, sigma, v);
  CHECK(drift.a()[0].bandwidth() == 0);
  CHECK(std::abs(drift.a()[0].coefficient({0}) - Complex(1.2)) < 1e-15);
  CHECK(drift.b().is_zero());

  // Lambda^0_0 = cos(phi^1) on a 2-torus
  ControlConnection wave(2, 1);
  wave.add_cosine(0, 0, {0, 1}, mono(1, {0}, 1.0));
  const auto a = connection_as_observable(wave, sigma, v).a()[0];
  CHECK(std::abs(a.coefficient({0, 1}) - Complex(0.75)) < 1e-15);
  CHECK(std::abs(a.coefficient({0, -1}) - Complex(0.75)) < 1e-15);
  const std::vector<double> phi{0.2, 0.9};
  CHECK(a.evaluate(phi).real() == doctest::Approx(1.5 * std::cos(0.9)));
}

TEST_CASE("connection sampling and restriction") {
  const auto c = fixtures::nonabelian(2);
  const std::vector<double> sigma{0.4, -0.3}, v{0.7, 1.1}, phi{0.9, 2.0};
  const auto s = c.sample(sigma, v, phi);
  const double expected = (0.5 + 0.25 * sigma[1] * std::cos(phi[0])) * v[0] +
                          (0.3 * sigma[0] + 0.2 * std::sin(phi[0])) * v[1];
  CHECK(s.drift[0] == doctest::Approx(expected));
  CHECK(s.drift[1] == doctest::Approx(0.0));
  const double slope = -0.25 * sigma[1] * std::sin(phi[0]) * v[0] + 0.2 * std::cos(phi[0]) * v[1];
  CHECK(s.gradient[0][0] == doctest::Approx(slope));
  CHECK(s.gradient[0][1] == doctest::Approx(0.0));
  CHECK_FALSE(c.angle_independent());
  CHECK(fixtures::LinearAbelian{}.build(2).angle_independent());

  const TorusModel model(2, {0}, {0.25, 0.5}, 3);
  const auto sub = c.restricted_to_controlled(model);
  CHECK(sub.dimension() == 1);
  const std::vector<double> phi_sub{0.9};
  CHECK(sub.sample(sigma, v, phi_sub).drift[0] == doctest::Approx(expected));

  ControlConnection leaky(2, 2);
  leaky.add_cosine(0, 0, {0, 1}, mono(2, {0, 0}, 1.0));
  CHECK_THROWS_AS(leaky.restricted_to_controlled(model), SplitViolation);
}

TEST_CASE("Hamiltonian gradient") {
  DynamicHamiltonian h(2);
  h.add_term({0, 2}, 0.5).add_term({1, 1}, 2.0);
  const std::vector<double> actions{3.0, -1.0};
  const auto g = h.gradient(actions);
  CHECK(g[0] == doctest::Approx(-2.0));
  CHECK(g[1] == doctest::Approx(-1.0 + 6.0));
  CHECK(h.value(actions) == doctest::Approx(0.5 - 6.0));
}
