#include "torus_holonomy/classical_dynamics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "torus_holonomy/errors.hpp"
#include "torus_holonomy/linalg.hpp"

namespace torus {

namespace {

std::span<const double> as_span(const Eigen::VectorXd& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

// Classical RK4 on a uniform grid; the callback sees every accepted state.
template <class Rhs, class Observer>
void rk4(const Rhs& rhs, Eigen::VectorXd y, double duration, int steps, const Observer& observe) {
  const double h = duration / steps;
  observe(0, 0.0, y);
  for (int i = 0; i < steps; ++i) {
    const double t = i * h;
    const Eigen::VectorXd k1 = rhs(t, y);
    const Eigen::VectorXd k2 = rhs(t + 0.5 * h, y + 0.5 * h * k1);
    const Eigen::VectorXd k3 = rhs(t + 0.5 * h, y + 0.5 * h * k2);
    const Eigen::VectorXd k4 = rhs(t + h, y + h * k3);
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    observe(i + 1, (i + 1) * h, y);
  }
}

void check_steps(int steps) {
  if (steps < 1) throw std::invalid_argument("step count must be at least 1");
}

}  // namespace

ClassicalState evolve_free(const DynamicHamiltonian& hamiltonian, const ClassicalState& initial,
                           double t) {
  if (initial.actions.size() != initial.angles.size() ||
      static_cast<int>(initial.actions.size()) != hamiltonian.dimension())
    throw DimensionError("state and Hamiltonian differ in dimension");
  ClassicalState out = initial;
  const auto frequency = hamiltonian.gradient(initial.actions);
  for (std::size_t k = 0; k < out.angles.size(); ++k) out.angles[k] += frequency[k] * t;
  return out;
}

Trajectory evolve_perturbed(const DynamicHamiltonian& hamiltonian,
                            const ControlConnection& connection, const ParameterCurve& curve,
                            const ClassicalState& initial, int steps) {
  check_steps(steps);
  const int m = hamiltonian.dimension();
  if (connection.dimension() != m || static_cast<int>(initial.actions.size()) != m ||
      static_cast<int>(initial.angles.size()) != m)
    throw DimensionError("Hamiltonian, connection and state differ in dimension");
  if (curve.dimension() != connection.parameter_dimension())
    throw DimensionError("curve lives in a parameter space of the wrong dimension");

  auto rhs = [&](double t, const Eigen::VectorXd& y) {
    const Eigen::VectorXd sigma = curve.position(t);
    const Eigen::VectorXd velocity = curve.velocity(t);
    const Eigen::VectorXd actions = y.head(m);
    const auto s = connection.sample(as_span(sigma), as_span(velocity), as_span(y.tail(m).eval()));
    const auto frequency = hamiltonian.gradient(as_span(actions));
    Eigen::VectorXd dy(2 * m);
    for (int k = 0; k < m; ++k) {
      double rate = 0.0;
      for (int j = 0; j < m; ++j) rate -= s.gradient[j][k] * actions(j);
      dy(k) = rate;
      dy(m + k) = frequency[k] + s.drift[k];
    }
    return dy;
  };

  Eigen::VectorXd y0(2 * m);
  for (int k = 0; k < m; ++k) {
    y0(k) = initial.actions[k];
    y0(m + k) = initial.angles[k];
  }
  Trajectory trajectory;
  trajectory.reserve(static_cast<std::size_t>(steps) + 1);
  rk4(rhs, y0, curve.duration(), steps, [&](int, double t, const Eigen::VectorXd& y) {
    ClassicalState s{std::vector<double>(y.data(), y.data() + m),
                     std::vector<double>(y.data() + m, y.data() + 2 * m)};
    trajectory.push_back({t, std::move(s)});
  });
  return trajectory;
}

std::size_t hamiltonian_split_violations(const DynamicHamiltonian& hamiltonian,
                                         const TorusModel& model) {
  if (hamiltonian.dimension() != model.dimension())
    throw DimensionError("Hamiltonian and model differ in dimension");
  std::size_t count = 0;
  for (const auto& [e, c] : hamiltonian.polynomial().terms())
    for (int a : model.controlled())
      if (e[a] != 0) {
        ++count;
        break;
      }
  return count;
}

std::size_t connection_split_violations(const ControlConnection& connection,
                                        const TorusModel& model) {
  if (connection.dimension() != model.dimension())
    throw DimensionError("connection and model differ in dimension");
  std::size_t count = 0;
  for (const auto& [key, modes] : connection.components()) {
    if (!model.is_controlled(key.axis)) {
      count += modes.size();
      continue;
    }
    for (const auto& [c, p] : modes)
      for (int j : model.dynamic())
        if (c[j] != 0) {
          ++count;
          break;
        }
  }
  return count;
}

std::size_t split_residual(const DynamicHamiltonian& hamiltonian,
                           const ControlConnection& connection, const TorusModel& model) {
  return hamiltonian_split_violations(hamiltonian, model) +
         connection_split_violations(connection, model);
}

void require_split(const ControlConnection& connection, const TorusModel& model) {
  if (const auto n = connection_split_violations(connection, model); n != 0)
    throw SplitViolation("connection violates the controlled/dynamic split (" +
                         std::to_string(n) + " terms)");
}

void require_split(const DynamicHamiltonian& hamiltonian, const ControlConnection& connection,
                   const TorusModel& model) {
  if (const auto n = hamiltonian_split_violations(hamiltonian, model); n != 0)
    throw SplitViolation("Hamiltonian depends on controlled actions (" + std::to_string(n) +
                         " terms)");
  require_split(connection, model);
}

AngleHistory controlled_angle_history(const TorusModel& model, const ControlConnection& connection,
                                      const ParameterCurve& curve,
                                      std::span<const double> initial_angles, int intervals) {
  check_steps(intervals);
  const ControlConnection sub = connection.restricted_to_controlled(model);
  const int l = sub.dimension();
  if (static_cast<int>(initial_angles.size()) != l)
    throw DimensionError("need one initial angle per controlled axis");
  if (curve.dimension() != connection.parameter_dimension())
    throw DimensionError("curve lives in a parameter space of the wrong dimension");

  auto rhs = [&](double t, const Eigen::VectorXd& phi) {
    const Eigen::VectorXd sigma = curve.position(t);
    const Eigen::VectorXd velocity = curve.velocity(t);
    const auto s = sub.sample(as_span(sigma), as_span(velocity), as_span(phi));
    return Eigen::Map<const Eigen::VectorXd>(s.drift.data(), l).eval();
  };
  AngleHistory history;
  Eigen::VectorXd y0 = Eigen::Map<const Eigen::VectorXd>(initial_angles.data(), l);
  rk4(rhs, y0, curve.duration(), intervals, [&](int, double t, const Eigen::VectorXd& y) {
    history.times.push_back(t);
    history.angles.emplace_back(y.data(), y.data() + l);
  });
  return history;
}

ModeTransport classical_mode_transport(const TorusModel& model, const ControlConnection& connection,
                                       const ParameterCurve& curve,
                                       std::span<const double> initial_angles, int steps,
                                       int guard) {
  check_steps(steps);
  require_split(connection, model);
  const TorusModel lattice = model.controlled_submodel();
  const ControlConnection sub = connection.restricted_to_controlled(model);
  const int l = lattice.dimension();
  const auto modes = mode_iter(lattice);
  const auto size = static_cast<Eigen::Index>(modes.size());

  AngleHistory history = controlled_angle_history(model, connection, curve, initial_angles,
                                                  2 * steps);

  auto plane_waves = [&](std::span<const double> phi) {
    Eigen::VectorXcd v(size);
    for (Eigen::Index r = 0; r < size; ++r) {
      double arg = 0.0;
      for (int a = 0; a < l; ++a) arg += modes[r][a] * phi[a];
      v(r) = std::polar(1.0, arg);
    }
    return v;
  };

  // Generator of the linear system: row n couples to n + c with weight
  // i n_a A^a_c, A^a the velocity-contracted connection coefficients.
  auto generator = [&](double t) {
    const Eigen::VectorXd sigma = curve.position(t);
    const Eigen::VectorXd velocity = curve.velocity(t);
    const auto fields = sub.contracted(as_span(sigma), as_span(velocity));
    Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(size, size);
    for (Eigen::Index r = 0; r < size; ++r) {
      const auto& n = modes[r];
      for (int a = 0; a < l; ++a) {
        if (n[a] == 0) continue;
        for (const auto& [c, value] : fields[a].coefficients()) {
          ModeIndex target(l);
          for (int b = 0; b < l; ++b) target[b] = n[b] + c[b];
          if (!lattice.in_box(target)) continue;
          g(r, static_cast<Eigen::Index>(lattice.linear_index(target))) +=
              Complex(0.0, n[a]) * value;
        }
      }
    }
    return g;
  };

  const double h = curve.duration() / steps;
  Eigen::VectorXcd psi = plane_waves(initial_angles);
  for (int i = 0; i < steps; ++i) psi = linalg::expm((generator((i + 0.5) * h) * h).eval()) * psi;

  ModeTransport out{lattice, plane_waves(history.angles.back()), psi, 0.0, guard,
                    std::move(history)};
  for (auto idx : interior_indices(lattice, guard))
    out.discrepancy = std::max(out.discrepancy, std::abs(out.direct(idx) - out.ordered(idx)));
  return out;
}

std::vector<double> classical_action_transport(const TorusModel& model,
                                               const ControlConnection& connection,
                                               const ParameterCurve& curve,
                                               std::span<const double> initial_actions,
                                               const AngleHistory& history, int steps) {
  check_steps(steps);
  require_split(connection, model);
  const ControlConnection sub = connection.restricted_to_controlled(model);
  const int l = sub.dimension();
  if (static_cast<int>(initial_actions.size()) != l)
    throw DimensionError("need one initial action per controlled axis");
  if (history.angles.size() != 2 * static_cast<std::size_t>(steps) + 1)
    throw std::invalid_argument("angle history must hold 2 * steps + 1 samples");

  const double h = curve.duration() / steps;
  Eigen::VectorXd actions = Eigen::Map<const Eigen::VectorXd>(initial_actions.data(), l);
  for (int i = 0; i < steps; ++i) {
    const double t = (i + 0.5) * h;
    const Eigen::VectorXd sigma = curve.position(t);
    const Eigen::VectorXd velocity = curve.velocity(t);
    const auto& phi = history.angles[2 * static_cast<std::size_t>(i) + 1];
    const auto s = sub.sample(as_span(sigma), as_span(velocity), phi);
    // K_ab = -d_a(Lambda^b_beta) dxi^beta/dt
    Eigen::MatrixXd k(l, l);
    for (int a = 0; a < l; ++a)
      for (int b = 0; b < l; ++b) k(a, b) = -s.gradient[b][a];
    actions = linalg::expm((k * h).eval()) * actions;
  }
  return {actions.data(), actions.data() + l};
}

}  // namespace torus
