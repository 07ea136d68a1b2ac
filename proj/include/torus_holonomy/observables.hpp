#pragma once

#include <complex>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "torus_holonomy/core_types.hpp"

namespace torus {

/// Integer shift vector c labelling the Fourier term exp(i c.phi).
using Shift = std::vector<int>;

/// Sparse multivariate polynomial sum_e coef_e x^e.
template <class T>
class Polynomial {
 public:
  using Exponent = std::vector<int>;

  Polynomial() = default;
  explicit Polynomial(int variables) : variables_(variables) {}

  static Polynomial constant(int variables, T value) {
    Polynomial p(variables);
    p.add_term(Exponent(variables, 0), value);
    return p;
  }

  /// Accumulates into an existing term; negative exponents are rejected.
  Polynomial& add_term(Exponent exponent, T coefficient);

  int variables() const { return variables_; }
  const std::map<Exponent, T>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool depends_on(int variable) const;
  int degree() const;

  T evaluate(std::span<const double> x) const;
  Polynomial derivative(int variable) const;

 private:
  int variables_ = 0;
  std::map<Exponent, T> terms_;
};

using RealPolynomial = Polynomial<double>;
using ComplexPolynomial = Polynomial<Complex>;

/// Finite Fourier series sum_c F_c exp(i c.phi) on the m-torus. Fields flagged
/// real keep F_{-c} == conj(F_c) bit-exactly.
class TorusFourierField {
 public:
  enum class Kind { real, complex };

  explicit TorusFourierField(int dimension, Kind kind = Kind::real);
  /// Real fields are checked for conjugate symmetry (relative 1e-12) and then
  /// symmetrized; throws std::invalid_argument when the check fails.
  TorusFourierField(int dimension, std::map<Shift, Complex> coefficients,
                    Kind kind = Kind::real);

  static TorusFourierField constant(int dimension, double value);
  /// amplitude * cos(harmonic * phi^axis)
  static TorusFourierField cosine(int dimension, int axis, double amplitude, int harmonic = 1);
  /// amplitude * sin(harmonic * phi^axis)
  static TorusFourierField sine(int dimension, int axis, double amplitude, int harmonic = 1);

  int dimension() const { return dimension_; }
  bool is_real() const { return kind_ == Kind::real; }
  Kind kind() const { return kind_; }
  /// max_c max_k |c_k| over the support; 0 for constant or zero fields.
  int bandwidth() const;
  bool is_zero() const { return coefficients_.empty(); }
  bool depends_on_axis(int axis) const;

  const std::map<Shift, Complex>& coefficients() const { return coefficients_; }
  Complex coefficient(const Shift& c) const;

  Complex evaluate(std::span<const double> phi) const;
  TorusFourierField derivative(int axis) const;
  TorusFourierField scaled(double factor) const;

  TorusFourierField operator+(const TorusFourierField& other) const;
  TorusFourierField operator-(const TorusFourierField& other) const;
  TorusFourierField operator*(const TorusFourierField& other) const;

 private:
  void symmetrize();
  void prune();

  int dimension_;
  Kind kind_;
  std::map<Shift, Complex> coefficients_;
};

/// f = a^k(phi) I_k + b(phi) with real Fourier coefficient fields.
class AffineObservable {
 public:
  explicit AffineObservable(int dimension);
  AffineObservable(std::vector<TorusFourierField> action_coefficients, TorusFourierField offset);

  /// f = I_k
  static AffineObservable action(int dimension, int axis);
  /// f = b(phi)
  static AffineObservable function(TorusFourierField offset);

  int dimension() const { return static_cast<int>(a_.size()); }
  int bandwidth() const;
  const std::vector<TorusFourierField>& a() const { return a_; }
  const TorusFourierField& b() const { return b_; }

  double evaluate(std::span<const double> actions, std::span<const double> angles) const;

  AffineObservable operator+(const AffineObservable& other) const;
  AffineObservable scaled(double factor) const;

 private:
  std::vector<TorusFourierField> a_;
  TorusFourierField b_;
};

/// {f,g} = d^k f d_k g - d_k f d^k g, with d^k = d/dI_k and d_k = d/dphi^k.
/// Throws DimensionError on mismatched dimensions and BandwidthError when the
/// result is wider than max_bandwidth.
AffineObservable poisson_bracket(const AffineObservable& f, const AffineObservable& g,
                                 std::optional<int> max_bandwidth = std::nullopt);

/// Connection coefficients Lambda^k_beta(sigma, phi) as Fourier series in the
/// angles with polynomial-in-sigma coefficients.
class ControlConnection {
 public:
  struct Key {
    int axis;
    int parameter;
    friend auto operator<=>(const Key&, const Key&) = default;
  };
  using Modes = std::map<Shift, ComplexPolynomial>;

  ControlConnection(int dimension, int parameter_dimension);

  int dimension() const { return dimension_; }
  int parameter_dimension() const { return parameter_dimension_; }
  const std::map<Key, Modes>& components() const { return components_; }

  /// Adds poly(sigma) exp(i c.phi) plus its complex conjugate, so the
  /// component stays real. For c == 0 the polynomial must be real.
  ControlConnection& add_real_mode(int axis, int parameter, Shift c, ComplexPolynomial poly);
  /// Adds p(sigma) * cos(c.phi).
  ControlConnection& add_cosine(int axis, int parameter, Shift c, const RealPolynomial& p);
  /// Adds p(sigma) * sin(c.phi).
  ControlConnection& add_sine(int axis, int parameter, Shift c, const RealPolynomial& p);
  /// Adds p(sigma), angle independent.
  ControlConnection& add_constant(int axis, int parameter, const RealPolynomial& p);
  /// Raw insert, no conjugate completion. Used by the config loader once it
  /// has completed the data itself.
  ControlConnection& add_mode(int axis, int parameter, Shift c, ComplexPolynomial poly);

  int bandwidth() const;
  bool angle_independent() const;
  bool is_zero() const { return components_.empty(); }

  /// Lambda^axis_parameter at sigma as a real Fourier field.
  TorusFourierField component(int axis, int parameter, std::span<const double> sigma) const;
  /// sum_beta Lambda^k_beta(sigma, .) velocity^beta, one field per axis k.
  std::vector<TorusFourierField> contracted(std::span<const double> sigma,
                                            std::span<const double> velocity) const;

  /// Pointwise drift D^k = sum_beta Lambda^k_beta velocity^beta and its angle
  /// gradient dD^k/dphi^j, used by the classical integrators.
  struct PointSample {
    std::vector<double> drift;
    std::vector<std::vector<double>> gradient;  // gradient[k][j]
  };
  PointSample sample(std::span<const double> sigma, std::span<const double> velocity,
                     std::span<const double> phi) const;

  /// Connection over the controlled axes of the model only (shifts and axes
  /// re-indexed to the controlled submodel). Throws SplitViolation if the
  /// connection has dynamic support.
  ControlConnection restricted_to_controlled(const TorusModel& model) const;

 private:
  void check_key(int axis, int parameter, const Shift& c) const;

  int dimension_;
  int parameter_dimension_;
  std::map<Key, Modes> components_;
};

/// Perturbation term Delta = I_a Lambda^a_beta(sigma, phi) velocity^beta as an
/// affine observable (b = 0).
AffineObservable connection_as_observable(const ControlConnection& connection,
                                          std::span<const double> sigma,
                                          std::span<const double> velocity);

/// Polynomial H(I) in the action variables. Exponents span all m axes so
/// that controlled-action dependence can be detected rather than hidden.
class DynamicHamiltonian {
 public:
  explicit DynamicHamiltonian(int dimension) : poly_(dimension) {}
  explicit DynamicHamiltonian(RealPolynomial poly) : poly_(std::move(poly)) {}

  DynamicHamiltonian& add_term(std::vector<int> exponent, double coefficient) {
    poly_.add_term(std::move(exponent), coefficient);
    return *this;
  }

  int dimension() const { return poly_.variables(); }
  const RealPolynomial& polynomial() const { return poly_; }
  bool depends_on(int axis) const { return poly_.depends_on(axis); }

  double value(std::span<const double> actions) const { return poly_.evaluate(actions); }
  /// dH/dI_k for every k.
  std::vector<double> gradient(std::span<const double> actions) const;

 private:
  RealPolynomial poly_;
};

}  // namespace torus
