#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "torus_holonomy/core_types.hpp"
#include "torus_holonomy/observables.hpp"
#include "torus_holonomy/parameter_curve.hpp"

namespace fixtures {

using torus::Complex;
using torus::ControlConnection;
using torus::RealPolynomial;
using torus::Shift;

inline RealPolynomial mono(int variables, std::vector<int> exponent, double coefficient) {
  RealPolynomial p(variables);
  p.add_term(std::move(exponent), coefficient);
  return p;
}

inline Shift unit_shift(int m, int axis, int value = 1) {
  Shift c(m, 0);
  c[axis] = value;
  return c;
}

inline Eigen::VectorXd vec(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

// Lambda^0_0 = g0 + g01 sigma_1, Lambda^0_1 = g1 + g10 sigma_0 on a d = 2
// parameter plane; curl = g10 - g01.
struct LinearAbelian {
  double g0 = 0.4, g01 = 0.7, g1 = 0.1, g10 = -0.2;
  double curl() const { return g10 - g01; }
  ControlConnection build(int m) const {
    ControlConnection c(m, 2);
    c.add_constant(0, 0, mono(2, {0, 0}, g0));
    c.add_constant(0, 0, mono(2, {0, 1}, g01));
    c.add_constant(0, 1, mono(2, {0, 0}, g1));
    c.add_constant(0, 1, mono(2, {1, 0}, g10));
    return c;
  }
};

// Smooth connection on axis 0 with angle and sigma dependence; successive
// Delta(t) do not commute.
inline ControlConnection nonabelian(int m) {
  ControlConnection c(m, 2);
  const Shift e0 = unit_shift(m, 0);
  c.add_constant(0, 0, mono(2, {0, 0}, 0.5));
  c.add_cosine(0, 0, e0, mono(2, {0, 1}, 0.25));
  c.add_constant(0, 1, mono(2, {1, 0}, 0.3));
  c.add_sine(0, 1, e0, mono(2, {0, 0}, 0.2));
  return c;
}

inline torus::ParameterCurve circle(double duration = 1.0, double radius = 0.9) {
  return torus::ParameterCurve::circle(vec({0.3, -0.2}), radius, 0, 1, duration);
}

// Holonomy phases predicted by Stokes for LinearAbelian on `circle`.
inline Complex abelian_phase(const LinearAbelian& conn, double n_minus_lambda, double radius = 0.9) {
  const double loop = conn.curl() * std::numbers::pi * radius * radius;
  return std::polar(1.0, -n_minus_lambda * loop);
}

inline double max_abs(const Eigen::MatrixXcd& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

}  // namespace fixtures
