#include "torus_holonomy/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "torus_holonomy/classical_dynamics.hpp"
#include "torus_holonomy/errors.hpp"
#include "torus_holonomy/linalg.hpp"

namespace torus {

namespace {

std::span<const double> as_span(const Eigen::VectorXd& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

void check_steps(int steps) {
  if (steps < 1) throw std::invalid_argument("step count must be at least 1");
}

void check_curve(const ControlConnection& connection, const ParameterCurve& curve) {
  if (curve.dimension() != connection.parameter_dimension())
    throw DimensionError("curve lives in a parameter space of the wrong dimension");
}

Eigen::MatrixXcd identity(std::size_t n) {
  const auto size = static_cast<Eigen::Index>(n);
  return Eigen::MatrixXcd::Identity(size, size);
}

// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration.
void gauss_legendre(int order, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(order, 0.0);
  weights.assign(order, 0.0);
  for (int i = 0; i < order; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    nodes[i] = x;
    weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
}

}  // namespace

std::string_view to_string(PropagatorMethod method) {
  switch (method) {
    case PropagatorMethod::ordered_product: return "ordered-product";
    case PropagatorMethod::diagonal_exact: return "diagonal-exact";
    case PropagatorMethod::reference: return "reference";
  }
  return "unknown";
}

OperatorMatrix delta_generator(const TorusModel& model, const ControlConnection& connection,
                               std::span<const double> sigma, std::span<const double> velocity) {
  require_split(connection, model);
  return quantize_affine(model, connection_as_observable(connection, sigma, velocity));
}

OperatorMatrix controlled_delta_generator(const TorusModel& model,
                                          const ControlConnection& connection,
                                          std::span<const double> sigma,
                                          std::span<const double> velocity) {
  const ControlConnection sub = connection.restricted_to_controlled(model);
  return quantize_affine(model.controlled_submodel(),
                         connection_as_observable(sub, sigma, velocity));
}

OperatorMatrix dynamic_propagator(const TorusModel& model, const DynamicHamiltonian& hamiltonian,
                                  double t) {
  OperatorMatrix u = hamiltonian_operator(model, hamiltonian);
  for (Eigen::Index r = 0; r < u.matrix.rows(); ++r)
    u.matrix(r, r) = std::polar(1.0, -u.matrix(r, r).real() * t);
  return u;
}

WaveFunction evolve_dynamic(const TorusModel& model, const DynamicHamiltonian& hamiltonian,
                            const WaveFunction& initial, double t) {
  if (!(initial.model() == model)) throw DimensionError("wavefunction lives on another model");
  const auto u = dynamic_propagator(model, hamiltonian, t);
  return WaveFunction(model, u.matrix.diagonal().cwiseProduct(initial.coefficients()));
}

PropagatorReport evolve_control(const TorusModel& model, const ControlConnection& connection,
                                const ParameterCurve& curve, int steps) {
  check_steps(steps);
  check_curve(connection, curve);
  require_split(connection, model);
  const TorusModel sub_model = model.controlled_submodel();
  const ControlConnection sub = connection.restricted_to_controlled(model);

  const double h = curve.duration() / steps;
  Eigen::MatrixXcd u = identity(sub_model.lattice_size());
  for (int i = 0; i < steps; ++i) {
    const double t = (i + 0.5) * h;
    const Eigen::VectorXd sigma = curve.position(t);
    const Eigen::VectorXd velocity = curve.velocity(t);
    const auto generator =
        quantize_affine(sub_model, connection_as_observable(sub, as_span(sigma), as_span(velocity)));
    u = linalg::unitary_step(generator.matrix, h) * u;
  }
  const double defect = linalg::unitarity_defect(u);
  return {OperatorMatrix{sub_model, sub.bandwidth(), std::move(u)}, steps, defect,
          PropagatorMethod::ordered_product};
}

OperatorMatrix lift_controlled(const TorusModel& model, const OperatorMatrix& controlled) {
  const TorusModel sub_model = model.controlled_submodel();
  if (!(controlled.model == sub_model))
    throw DimensionError("operator does not live on the controlled submodel");
  const auto modes = mode_iter(model);
  std::vector<Eigen::Index> sub_index;
  std::vector<ModeIndex> dyn;
  for (const auto& n : modes) {
    sub_index.push_back(static_cast<Eigen::Index>(sub_model.linear_index(controlled_label(model, n))));
    dyn.push_back(dynamic_label(model, n));
  }
  const auto size = static_cast<Eigen::Index>(modes.size());
  OperatorMatrix out{model, controlled.bandwidth, Eigen::MatrixXcd::Zero(size, size)};
  for (Eigen::Index r = 0; r < size; ++r)
    for (Eigen::Index s = 0; s < size; ++s)
      if (dyn[r] == dyn[s]) out.matrix(r, s) = controlled.matrix(sub_index[r], sub_index[s]);
  return out;
}

OperatorMatrix eigenspace_block(const TorusModel& model, const OperatorMatrix& full,
                                std::span<const int> dynamic_index) {
  if (!(full.model == model)) throw DimensionError("operator lives on another model");
  if (dynamic_index.size() != model.dynamic().size())
    throw DimensionError("dynamic label has the wrong length");
  const TorusModel sub_model = model.controlled_submodel();
  std::vector<Eigen::Index> rows;
  ModeIndex n(model.dimension());
  for (std::size_t j = 0; j < dynamic_index.size(); ++j) n[model.dynamic()[j]] = dynamic_index[j];
  for (const auto& na : mode_iter(sub_model)) {
    for (std::size_t a = 0; a < na.size(); ++a) n[model.controlled()[a]] = na[a];
    rows.push_back(static_cast<Eigen::Index>(model.linear_index(n)));
  }
  return {sub_model, full.bandwidth, full.matrix(rows, rows)};
}

FullEvolution evolve_full(const TorusModel& model, const DynamicHamiltonian& hamiltonian,
                          const ControlConnection& connection, const ParameterCurve& curve,
                          int steps) {
  check_steps(steps);
  check_curve(connection, curve);
  require_split(hamiltonian, connection, model);
  const double T = curve.duration();

  const OperatorMatrix u1 = dynamic_propagator(model, hamiltonian, T);
  OperatorMatrix u2 = model.controlled().empty()
                          ? OperatorMatrix{model, 0, identity(model.lattice_size())}
                          : lift_controlled(model, evolve_control(model, connection, curve, steps).op);
  OperatorMatrix product{model, u2.bandwidth, u1.matrix * u2.matrix};
  const double product_defect = linalg::unitarity_defect(product.matrix);

  // Commutator-free fourth-order exponential product (two exponentials per
  // step at the Gauss points).
  const Eigen::MatrixXcd h_matrix = hamiltonian_operator(model, hamiltonian).matrix;
  const double root3 = std::sqrt(3.0);
  const double c1 = 0.5 - root3 / 6.0, c2 = 0.5 + root3 / 6.0;
  const double w1 = (3.0 - 2.0 * root3) / 12.0, w2 = (3.0 + 2.0 * root3) / 12.0;
  auto generator = [&](double t) {
    const Eigen::VectorXd sigma = curve.position(t);
    const Eigen::VectorXd velocity = curve.velocity(t);
    return (h_matrix +
            delta_generator(model, connection, as_span(sigma), as_span(velocity)).matrix)
        .eval();
  };
  const double h = T / steps;
  Eigen::MatrixXcd u = identity(model.lattice_size());
  for (int i = 0; i < steps; ++i) {
    const Eigen::MatrixXcd g1 = generator((i + c1) * h);
    const Eigen::MatrixXcd g2 = generator((i + c2) * h);
    u = linalg::unitary_step(w1 * g1 + w2 * g2, h) * linalg::unitary_step(w2 * g1 + w1 * g2, h) * u;
  }
  const double reference_defect = linalg::unitarity_defect(u);
  OperatorMatrix reference{model, connection.bandwidth(), std::move(u)};

  FullEvolution out{{product, steps, product_defect, PropagatorMethod::ordered_product},
                    {reference, steps, reference_defect, PropagatorMethod::reference},
                    linalg::max_abs(product.matrix - reference.matrix)};
  return out;
}

PropagatorReport holonomy(const TorusModel& model, const ControlConnection& connection,
                          const ParameterCurve& loop, std::span<const int> dynamic_index,
                          int steps) {
  if (!loop.closed()) throw PreconditionError("parameter curve is not a loop");
  if (dynamic_index.size() != model.dynamic().size())
    throw DimensionError("dynamic label has the wrong length");
  for (int v : dynamic_index)
    if (std::abs(v) > model.truncation())
      throw PreconditionError("dynamic label outside the truncation box");
  // U_2 tensor-factorizes, so its block on E_0 does not depend on n_j.
  return evolve_control(model, connection, loop, steps);
}

double path_invariance_report(const TorusModel& model, const ControlConnection& connection,
                              const ParameterCurve& curve,
                              std::span<const Reparameterization> reparameterizations, int steps) {
  std::vector<Eigen::MatrixXcd> results;
  for (const auto& tau : reparameterizations)
    results.push_back(evolve_control(model, connection, curve.reparameterized(tau), steps).op.matrix);
  double worst = 0.0;
  for (std::size_t i = 0; i < results.size(); ++i)
    for (std::size_t j = i + 1; j < results.size(); ++j)
      worst = std::max(worst, linalg::max_abs(results[i] - results[j]));
  return worst;
}

double perturbation_commutator(const TorusModel& model, const DynamicHamiltonian& hamiltonian,
                               const ControlConnection& connection, const ParameterCurve& curve,
                               int samples) {
  check_steps(samples);
  check_curve(connection, curve);
  const Eigen::MatrixXcd h_matrix = hamiltonian_operator(model, hamiltonian).matrix;
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double t = curve.duration() * (i + 0.5) / samples;
    const Eigen::VectorXd sigma = curve.position(t);
    const Eigen::VectorXd velocity = curve.velocity(t);
    const auto delta = delta_generator(model, connection, as_span(sigma), as_span(velocity));
    worst = std::max(worst, linalg::max_abs(linalg::commutator(delta.matrix, h_matrix)));
  }
  return worst;
}

double off_block_mass(const TorusModel& model, const DynamicHamiltonian& hamiltonian,
                      const OperatorMatrix& full) {
  if (!(full.model == model)) throw DimensionError("operator lives on another model");
  const auto diagonal = hamiltonian_operator(model, hamiltonian).matrix.diagonal().real().eval();
  double mass = 0.0;
  for (Eigen::Index r = 0; r < full.matrix.rows(); ++r)
    for (Eigen::Index s = 0; s < full.matrix.cols(); ++s) {
      const double gap = std::abs(diagonal(r) - diagonal(s));
      if (gap > 1e-12 * std::max({1.0, std::abs(diagonal(r)), std::abs(diagonal(s))}))
        mass += std::norm(full.matrix(r, s));
    }
  return std::sqrt(mass);
}

std::vector<double> connection_line_integral(const ControlConnection& connection,
                                             const ParameterCurve& curve, int panels) {
  check_curve(connection, curve);
  check_steps(panels);
  std::vector<double> nodes, weights;
  gauss_legendre(12, nodes, weights);
  const Shift zero(connection.dimension(), 0);
  std::vector<double> total(connection.dimension(), 0.0);
  const double width = curve.duration() / panels;
  for (int p = 0; p < panels; ++p) {
    for (std::size_t q = 0; q < nodes.size(); ++q) {
      const double t = width * (p + 0.5 * (nodes[q] + 1.0));
      const Eigen::VectorXd sigma = curve.position(t);
      const Eigen::VectorXd velocity = curve.velocity(t);
      for (const auto& [key, modes] : connection.components()) {
        auto it = modes.find(zero);
        if (it == modes.end()) continue;
        total[key.axis] += 0.5 * width * weights[q] *
                           it->second.evaluate(as_span(sigma)).real() * velocity(key.parameter);
      }
    }
  }
  return total;
}

Eigen::VectorXcd abelian_phases(const TorusModel& model, const ControlConnection& connection,
                                const ParameterCurve& curve) {
  if (!connection.angle_independent())
    throw PreconditionError("closed-form phases need an angle-independent connection");
  require_split(connection, model);
  const auto integral = connection_line_integral(connection, curve);
  const TorusModel sub_model = model.controlled_submodel();
  const auto modes = mode_iter(sub_model);
  Eigen::VectorXcd phases(static_cast<Eigen::Index>(modes.size()));
  for (std::size_t r = 0; r < modes.size(); ++r) {
    double angle = 0.0;
    for (std::size_t a = 0; a < modes[r].size(); ++a)
      angle += (modes[r][a] - sub_model.lambda()[a]) * integral[model.controlled()[a]];
    phases(static_cast<Eigen::Index>(r)) = std::polar(1.0, -angle);
  }
  return phases;
}

}  // namespace torus
