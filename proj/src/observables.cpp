#include "torus_holonomy/observables.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "torus_holonomy/errors.hpp"

namespace torus {

namespace {

Shift negated(const Shift& c) {
  Shift out(c.size());
  std::transform(c.begin(), c.end(), out.begin(), [](int v) { return -v; });
  return out;
}

bool is_zero_shift(const Shift& c) {
  return std::all_of(c.begin(), c.end(), [](int v) { return v == 0; });
}

Complex phase(const Shift& c, std::span<const double> phi) {
  double arg = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k) arg += c[k] * phi[k];
  return {std::cos(arg), std::sin(arg)};
}

ComplexPolynomial conjugated(const ComplexPolynomial& p) {
  ComplexPolynomial out(p.variables());
  for (const auto& [e, v] : p.terms()) out.add_term(e, std::conj(v));
  return out;
}

ComplexPolynomial promoted(const RealPolynomial& p, Complex scale) {
  ComplexPolynomial out(p.variables());
  for (const auto& [e, v] : p.terms()) out.add_term(e, scale * v);
  return out;
}

}  // namespace

// ---------------------------------------------------------------- Polynomial

template <class T>
Polynomial<T>& Polynomial<T>::add_term(Exponent exponent, T coefficient) {
  if (static_cast<int>(exponent.size()) != variables_)
    throw DimensionError("polynomial exponent has the wrong length");
  if (std::any_of(exponent.begin(), exponent.end(), [](int e) { return e < 0; }))
    throw std::invalid_argument("polynomial exponents must be non-negative");
  auto [it, inserted] = terms_.try_emplace(std::move(exponent), coefficient);
  if (!inserted) {
    it->second += coefficient;
  }
  if (it->second == T{}) terms_.erase(it);
  return *this;
}

template <class T>
bool Polynomial<T>::depends_on(int variable) const {
  return std::any_of(terms_.begin(), terms_.end(),
                     [&](const auto& t) { return t.first[variable] != 0; });
}

template <class T>
int Polynomial<T>::degree() const {
  int d = 0;
  for (const auto& [e, v] : terms_) {
    int s = 0;
    for (int x : e) s += x;
    d = std::max(d, s);
  }
  return d;
}

template <class T>
T Polynomial<T>::evaluate(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != variables_)
    throw DimensionError("polynomial evaluated at a point of the wrong dimension");
  T sum{};
  for (const auto& [e, coefficient] : terms_) {
    double monomial = 1.0;
    for (int i = 0; i < variables_; ++i)
      for (int p = 0; p < e[i]; ++p) monomial *= x[i];
    sum += coefficient * monomial;
  }
  return sum;
}

template <class T>
Polynomial<T> Polynomial<T>::derivative(int variable) const {
  Polynomial out(variables_);
  for (const auto& [e, coefficient] : terms_) {
    if (e[variable] == 0) continue;
    Exponent lowered = e;
    lowered[variable] -= 1;
    out.add_term(std::move(lowered), coefficient * static_cast<double>(e[variable]));
  }
  return out;
}

template class Polynomial<double>;
template class Polynomial<Complex>;

// --------------------------------------------------------- TorusFourierField

TorusFourierField::TorusFourierField(int dimension, Kind kind)
    : dimension_(dimension), kind_(kind) {}

TorusFourierField::TorusFourierField(int dimension, std::map<Shift, Complex> coefficients,
                                     Kind kind)
    : dimension_(dimension), kind_(kind), coefficients_(std::move(coefficients)) {
  for (const auto& [c, v] : coefficients_)
    if (static_cast<int>(c.size()) != dimension_)
      throw DimensionError("Fourier shift has the wrong length");
  if (kind_ == Kind::real) {
    for (const auto& [c, v] : coefficients_) {
      const Complex partner = coefficient(negated(c));
      const double scale = std::max({1.0, std::abs(v), std::abs(partner)});
      if (std::abs(v - std::conj(partner)) > 1e-12 * scale)
        throw std::invalid_argument("Fourier coefficients are not conjugate symmetric");
    }
    symmetrize();
  }
  prune();
}

TorusFourierField TorusFourierField::constant(int dimension, double value) {
  return TorusFourierField(dimension, {{Shift(dimension, 0), value}});
}

TorusFourierField TorusFourierField::cosine(int dimension, int axis, double amplitude,
                                            int harmonic) {
  Shift c(dimension, 0);
  c[axis] = harmonic;
  return TorusFourierField(dimension, {{c, 0.5 * amplitude}, {negated(c), 0.5 * amplitude}});
}

TorusFourierField TorusFourierField::sine(int dimension, int axis, double amplitude,
                                          int harmonic) {
  Shift c(dimension, 0);
  c[axis] = harmonic;
  return TorusFourierField(dimension,
                           {{c, Complex(0.0, -0.5 * amplitude)},
                            {negated(c), Complex(0.0, 0.5 * amplitude)}});
}

int TorusFourierField::bandwidth() const {
  int width = 0;
  for (const auto& [c, v] : coefficients_)
    for (int x : c) width = std::max(width, std::abs(x));
  return width;
}

bool TorusFourierField::depends_on_axis(int axis) const {
  return std::any_of(coefficients_.begin(), coefficients_.end(),
                     [&](const auto& t) { return t.first[axis] != 0; });
}

Complex TorusFourierField::coefficient(const Shift& c) const {
  auto it = coefficients_.find(c);
  return it == coefficients_.end() ? Complex{} : it->second;
}

Complex TorusFourierField::evaluate(std::span<const double> phi) const {
  if (static_cast<int>(phi.size()) != dimension_)
    throw DimensionError("field evaluated at an angle vector of the wrong length");
  Complex sum{};
  for (const auto& [c, v] : coefficients_) sum += v * phase(c, phi);
  return sum;
}

TorusFourierField TorusFourierField::derivative(int axis) const {
  TorusFourierField out(dimension_, kind_);
  for (const auto& [c, v] : coefficients_)
    if (c[axis] != 0) out.coefficients_[c] = Complex(0.0, c[axis]) * v;
  if (kind_ == Kind::real) out.symmetrize();
  out.prune();
  return out;
}

TorusFourierField TorusFourierField::scaled(double factor) const {
  TorusFourierField out(*this);
  for (auto& [c, v] : out.coefficients_) v *= factor;
  out.prune();
  return out;
}

TorusFourierField TorusFourierField::operator+(const TorusFourierField& other) const {
  if (other.dimension_ != dimension_) throw DimensionError("adding fields of different dimension");
  TorusFourierField out(dimension_, is_real() && other.is_real() ? Kind::real : Kind::complex);
  out.coefficients_ = coefficients_;
  for (const auto& [c, v] : other.coefficients_) out.coefficients_[c] += v;
  if (out.is_real()) out.symmetrize();
  out.prune();
  return out;
}

TorusFourierField TorusFourierField::operator-(const TorusFourierField& other) const {
  return *this + other.scaled(-1.0);
}

TorusFourierField TorusFourierField::operator*(const TorusFourierField& other) const {
  if (other.dimension_ != dimension_)
    throw DimensionError("multiplying fields of different dimension");
  TorusFourierField out(dimension_, is_real() && other.is_real() ? Kind::real : Kind::complex);
  for (const auto& [c1, v1] : coefficients_)
    for (const auto& [c2, v2] : other.coefficients_) {
      Shift c(dimension_);
      for (int k = 0; k < dimension_; ++k) c[k] = c1[k] + c2[k];
      out.coefficients_[c] += v1 * v2;
    }
  if (out.is_real()) out.symmetrize();
  out.prune();
  return out;
}

void TorusFourierField::symmetrize() {
  std::map<Shift, Complex> sym;
  for (const auto& [c, v] : coefficients_) {
    const Shift minus = negated(c);
    const Complex partner = coefficient(minus);
    const Complex avg = 0.5 * (v + std::conj(partner));
    sym[c] = avg;
    sym[minus] = std::conj(avg);
  }
  coefficients_ = std::move(sym);
}

void TorusFourierField::prune() {
  std::erase_if(coefficients_, [](const auto& t) { return t.second == Complex{}; });
}

// ---------------------------------------------------------- AffineObservable

AffineObservable::AffineObservable(int dimension)
    : a_(dimension, TorusFourierField(dimension)), b_(dimension) {}

AffineObservable::AffineObservable(std::vector<TorusFourierField> action_coefficients,
                                   TorusFourierField offset)
    : a_(std::move(action_coefficients)), b_(std::move(offset)) {
  const int m = b_.dimension();
  if (static_cast<int>(a_.size()) != m)
    throw DimensionError("affine observable needs one coefficient field per action");
  for (const auto& f : a_) {
    if (f.dimension() != m) throw DimensionError("coefficient field of the wrong dimension");
    if (!f.is_real()) throw std::invalid_argument("affine observables must be real");
  }
  if (!b_.is_real()) throw std::invalid_argument("affine observables must be real");
}

AffineObservable AffineObservable::action(int dimension, int axis) {
  AffineObservable f(dimension);
  f.a_.at(axis) = TorusFourierField::constant(dimension, 1.0);
  return f;
}

AffineObservable AffineObservable::function(TorusFourierField offset) {
  const int m = offset.dimension();
  return AffineObservable(std::vector<TorusFourierField>(m, TorusFourierField(m)),
                          std::move(offset));
}

int AffineObservable::bandwidth() const {
  int width = b_.bandwidth();
  for (const auto& f : a_) width = std::max(width, f.bandwidth());
  return width;
}

double AffineObservable::evaluate(std::span<const double> actions,
                                  std::span<const double> angles) const {
  if (static_cast<int>(actions.size()) != dimension())
    throw DimensionError("action vector of the wrong length");
  Complex sum = b_.evaluate(angles);
  for (int k = 0; k < dimension(); ++k) sum += a_[k].evaluate(angles) * actions[k];
  return sum.real();
}

AffineObservable AffineObservable::operator+(const AffineObservable& other) const {
  if (other.dimension() != dimension()) throw DimensionError("adding observables of different m");
  std::vector<TorusFourierField> a;
  for (int k = 0; k < dimension(); ++k) a.push_back(a_[k] + other.a_[k]);
  return AffineObservable(std::move(a), b_ + other.b_);
}

AffineObservable AffineObservable::scaled(double factor) const {
  std::vector<TorusFourierField> a;
  for (const auto& f : a_) a.push_back(f.scaled(factor));
  return AffineObservable(std::move(a), b_.scaled(factor));
}

AffineObservable poisson_bracket(const AffineObservable& f, const AffineObservable& g,
                                 std::optional<int> max_bandwidth) {
  const int m = f.dimension();
  if (g.dimension() != m) throw DimensionError("Poisson bracket of observables of different m");

  std::vector<TorusFourierField> a(m, TorusFourierField(m));
  TorusFourierField b(m);
  for (int k = 0; k < m; ++k) {
    for (int j = 0; j < m; ++j)
      a[j] = a[j] + f.a()[k] * g.a()[j].derivative(k) - g.a()[k] * f.a()[j].derivative(k);
    b = b + f.a()[k] * g.b().derivative(k) - g.a()[k] * f.b().derivative(k);
  }
  AffineObservable out(std::move(a), std::move(b));
  if (max_bandwidth && out.bandwidth() > *max_bandwidth)
    throw BandwidthError("Poisson bracket has bandwidth " + std::to_string(out.bandwidth()) +
                         " above the declared " + std::to_string(*max_bandwidth));
  return out;
}

// --------------------------------------------------------- ControlConnection

ControlConnection::ControlConnection(int dimension, int parameter_dimension)
    : dimension_(dimension), parameter_dimension_(parameter_dimension) {
  if (dimension < 1 || parameter_dimension < 1)
    throw DimensionError("connection needs positive torus and parameter dimensions");
}

void ControlConnection::check_key(int axis, int parameter, const Shift& c) const {
  if (axis < 0 || axis >= dimension_) throw DimensionError("connection axis out of range");
  if (parameter < 0 || parameter >= parameter_dimension_)
    throw DimensionError("connection parameter index out of range");
  if (static_cast<int>(c.size()) != dimension_)
    throw DimensionError("connection shift has the wrong length");
}

ControlConnection& ControlConnection::add_mode(int axis, int parameter, Shift c,
                                               ComplexPolynomial poly) {
  check_key(axis, parameter, c);
  if (poly.variables() != parameter_dimension_)
    throw DimensionError("connection polynomial must be in the parameter variables");
  auto& modes = components_[Key{axis, parameter}];
  auto [it, inserted] = modes.try_emplace(std::move(c), poly);
  if (!inserted) {
    for (const auto& [e, v] : poly.terms()) it->second.add_term(e, v);
  }
  if (it->second.is_zero()) modes.erase(it);
  if (modes.empty()) components_.erase(Key{axis, parameter});
  return *this;
}

ControlConnection& ControlConnection::add_real_mode(int axis, int parameter, Shift c,
                                                    ComplexPolynomial poly) {
  check_key(axis, parameter, c);
  if (is_zero_shift(c)) {
    for (const auto& [e, v] : poly.terms())
      if (v.imag() != 0.0)
        throw std::invalid_argument("angle-independent connection term must be real");
    return add_mode(axis, parameter, std::move(c), std::move(poly));
  }
  Shift minus = negated(c);
  ComplexPolynomial conj_poly = conjugated(poly);
  add_mode(axis, parameter, std::move(c), std::move(poly));
  return add_mode(axis, parameter, std::move(minus), std::move(conj_poly));
}

ControlConnection& ControlConnection::add_cosine(int axis, int parameter, Shift c,
                                                 const RealPolynomial& p) {
  return add_real_mode(axis, parameter, std::move(c), promoted(p, 0.5));
}

ControlConnection& ControlConnection::add_sine(int axis, int parameter, Shift c,
                                               const RealPolynomial& p) {
  return add_real_mode(axis, parameter, std::move(c), promoted(p, Complex(0.0, -0.5)));
}

ControlConnection& ControlConnection::add_constant(int axis, int parameter,
                                                   const RealPolynomial& p) {
  return add_mode(axis, parameter, Shift(dimension_, 0), promoted(p, 1.0));
}

int ControlConnection::bandwidth() const {
  int width = 0;
  for (const auto& [key, modes] : components_)
    for (const auto& [c, p] : modes)
      for (int x : c) width = std::max(width, std::abs(x));
  return width;
}

bool ControlConnection::angle_independent() const { return bandwidth() == 0; }

TorusFourierField ControlConnection::component(int axis, int parameter,
                                               std::span<const double> sigma) const {
  auto it = components_.find(Key{axis, parameter});
  if (it == components_.end()) return TorusFourierField(dimension_);
  std::map<Shift, Complex> coefficients;
  for (const auto& [c, p] : it->second) coefficients[c] = p.evaluate(sigma);
  return TorusFourierField(dimension_, std::move(coefficients));
}

std::vector<TorusFourierField> ControlConnection::contracted(
    std::span<const double> sigma, std::span<const double> velocity) const {
  if (static_cast<int>(velocity.size()) != parameter_dimension_ ||
      static_cast<int>(sigma.size()) != parameter_dimension_)
    throw DimensionError("parameter point or velocity of the wrong dimension");
  std::vector<TorusFourierField> out(dimension_, TorusFourierField(dimension_));
  for (const auto& [key, modes] : components_) {
    if (velocity[key.parameter] == 0.0) continue;
    out[key.axis] =
        out[key.axis] + component(key.axis, key.parameter, sigma).scaled(velocity[key.parameter]);
  }
  return out;
}

ControlConnection::PointSample ControlConnection::sample(std::span<const double> sigma,
                                                         std::span<const double> velocity,
                                                         std::span<const double> phi) const {
  PointSample s{std::vector<double>(dimension_, 0.0),
                std::vector<std::vector<double>>(dimension_, std::vector<double>(dimension_, 0.0))};
  for (const auto& [key, modes] : components_) {
    const double v = velocity[key.parameter];
    if (v == 0.0) continue;
    for (const auto& [c, p] : modes) {
      const Complex term = p.evaluate(sigma) * phase(c, phi) * v;
      s.drift[key.axis] += term.real();
      for (int j = 0; j < dimension_; ++j)
        if (c[j] != 0) s.gradient[key.axis][j] += (Complex(0.0, c[j]) * term).real();
    }
  }
  return s;
}

ControlConnection ControlConnection::restricted_to_controlled(const TorusModel& model) const {
  if (model.dimension() != dimension_) throw DimensionError("connection and model differ in m");
  const auto& controlled = model.controlled();
  ControlConnection out(static_cast<int>(controlled.size()), parameter_dimension_);
  for (const auto& [key, modes] : components_) {
    auto pos = std::find(controlled.begin(), controlled.end(), key.axis);
    if (pos == controlled.end())
      throw SplitViolation("connection has a component along dynamic axis " +
                           std::to_string(key.axis));
    const int sub_axis = static_cast<int>(pos - controlled.begin());
    for (const auto& [c, p] : modes) {
      for (int j : model.dynamic())
        if (c[j] != 0)
          throw SplitViolation("connection depends on dynamic angle " + std::to_string(j));
      Shift sub(controlled.size());
      for (std::size_t i = 0; i < controlled.size(); ++i) sub[i] = c[controlled[i]];
      out.add_mode(sub_axis, key.parameter, std::move(sub), p);
    }
  }
  return out;
}

AffineObservable connection_as_observable(const ControlConnection& connection,
                                          std::span<const double> sigma,
                                          std::span<const double> velocity) {
  const int m = connection.dimension();
  return AffineObservable(connection.contracted(sigma, velocity), TorusFourierField(m));
}

std::vector<double> DynamicHamiltonian::gradient(std::span<const double> actions) const {
  std::vector<double> g(dimension());
  for (int k = 0; k < dimension(); ++k) g[k] = poly_.derivative(k).evaluate(actions);
  return g;
}

}  // namespace torus
