#include "torus_holonomy/quantization.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>

#include "torus_holonomy/classical_dynamics.hpp"
#include "torus_holonomy/errors.hpp"

namespace torus {

namespace {

Eigen::Index position(const TorusModel& model, std::span<const int> n) {
  return static_cast<Eigen::Index>(model.linear_index(n));
}

OperatorMatrix diagonal_operator(const TorusModel& model,
                                 const std::function<double(const ModeIndex&)>& entry) {
  const auto size = static_cast<Eigen::Index>(model.lattice_size());
  OperatorMatrix op{model, 0, Eigen::MatrixXcd::Zero(size, size)};
  const auto modes = mode_iter(model);
  for (Eigen::Index r = 0; r < size; ++r) op.matrix(r, r) = entry(modes[r]);
  return op;
}

std::vector<double> shifted_actions(const TorusModel& model, const ModeIndex& n) {
  std::vector<double> x(n.size());
  for (std::size_t k = 0; k < n.size(); ++k) x[k] = n[k] - model.lambda()[k];
  return x;
}

}  // namespace

WaveFunction OperatorMatrix::apply(const WaveFunction& psi) const {
  if (!(psi.model() == model)) throw DimensionError("operator and wavefunction models differ");
  return WaveFunction(model, matrix * psi.coefficients());
}

ModeIndex dynamic_label(const TorusModel& model, std::span<const int> n) {
  ModeIndex out;
  for (int j : model.dynamic()) out.push_back(n[j]);
  return out;
}

ModeIndex controlled_label(const TorusModel& model, std::span<const int> n) {
  ModeIndex out;
  for (int a : model.controlled()) out.push_back(n[a]);
  return out;
}

OperatorMatrix action_operator(const TorusModel& model, int axis) {
  if (axis < 0 || axis >= model.dimension()) throw DimensionError("action axis out of range");
  const double lambda = model.lambda()[axis];
  return diagonal_operator(model, [&](const ModeIndex& n) { return n[axis] - lambda; });
}

OperatorMatrix hamiltonian_operator(const TorusModel& model,
                                    const DynamicHamiltonian& hamiltonian) {
  if (hamiltonian_split_violations(hamiltonian, model) != 0)
    throw SplitViolation("Hamiltonian depends on a controlled action");
  return diagonal_operator(model, [&](const ModeIndex& n) {
    return hamiltonian.value(shifted_actions(model, n));
  });
}

OperatorMatrix hamiltonian_operator(const TorusModel& model, const DynamicSpectralFunction& value) {
  return diagonal_operator(model, [&](const ModeIndex& n) {
    std::vector<double> x;
    for (int j : model.dynamic()) x.push_back(n[j] - model.lambda()[j]);
    return value(x);
  });
}

OperatorMatrix quantize_affine(const TorusModel& model, const AffineObservable& f) {
  const int m = model.dimension();
  if (f.dimension() != m) throw DimensionError("observable and model differ in dimension");
  if (f.bandwidth() > model.truncation())
    throw BandwidthError("observable bandwidth " + std::to_string(f.bandwidth()) +
                         " exceeds truncation N=" + std::to_string(model.truncation()));

  std::set<Shift> support;
  for (const auto& field : f.a())
    for (const auto& [c, v] : field.coefficients()) support.insert(c);
  for (const auto& [c, v] : f.b().coefficients()) support.insert(c);

  const auto size = static_cast<Eigen::Index>(model.lattice_size());
  OperatorMatrix op{model, f.bandwidth(), Eigen::MatrixXcd::Zero(size, size)};
  const auto modes = mode_iter(model);
  ModeIndex target(m);
  for (Eigen::Index col = 0; col < size; ++col) {
    const auto& n = modes[col];
    for (const auto& c : support) {
      for (int k = 0; k < m; ++k) target[k] = n[k] + c[k];
      if (!model.in_box(target)) continue;
      // Same summation order for (n+c, n) and (n, n+c); the midpoint
      // n_k + c_k/2 is exact, so conjugate entries agree bit for bit.
      Complex value{};
      for (int k = 0; k < m; ++k) {
        const Complex coefficient = f.a()[k].coefficient(c);
        if (coefficient == Complex{}) continue;
        const double midpoint = (target[k] - 0.5 * c[k]) - model.lambda()[k];
        value += coefficient * midpoint;
      }
      value += f.b().coefficient(c);
      op.matrix(position(model, target), col) = value;
    }
  }
  return op;
}

OperatorMatrix multiplication_operator(const TorusModel& model, const Shift& c) {
  const int m = model.dimension();
  if (static_cast<int>(c.size()) != m) throw DimensionError("shift has the wrong length");
  int width = 0;
  for (int x : c) width = std::max(width, std::abs(x));
  if (width > 2 * model.truncation()) throw BandwidthError("shift wider than 2N");

  const auto size = static_cast<Eigen::Index>(model.lattice_size());
  OperatorMatrix op{model, width, Eigen::MatrixXcd::Zero(size, size)};
  const auto modes = mode_iter(model);
  ModeIndex target(m);
  for (Eigen::Index col = 0; col < size; ++col) {
    for (int k = 0; k < m; ++k) target[k] = modes[col][k] + c[k];
    if (model.in_box(target)) op.matrix(position(model, target), col) = 1.0;
  }
  return op;
}

double dirac_residual(const TorusModel& model, const AffineObservable& f,
                      const AffineObservable& g) {
  const auto interior = interior_indices(model, f.bandwidth() + g.bandwidth());
  const Eigen::MatrixXcd F = quantize_affine(model, f).matrix;
  const Eigen::MatrixXcd G = quantize_affine(model, g).matrix;
  const Eigen::MatrixXcd B = quantize_affine(model, poisson_bracket(f, g)).matrix;

  const Eigen::MatrixXcd commutator =
      F(interior, Eigen::all) * G(Eigen::all, interior) - G(interior, Eigen::all) * F(Eigen::all, interior);
  const Eigen::MatrixXcd residual = commutator + Complex(0.0, 1.0) * B(interior, interior);
  return residual.size() == 0 ? 0.0 : residual.cwiseAbs().maxCoeff();
}

SpectralComparison lambda_shift_equivalence(const TorusModel& model,
                                            const DynamicHamiltonian& hamiltonian,
                                            std::span<const double> shift) {
  const int m = model.dimension();
  if (static_cast<int>(shift.size()) != m || hamiltonian.dimension() != m)
    throw DimensionError("shift and Hamiltonian must match the model dimension");
  std::vector<double> shifted_lambda(m);
  ModeIndex reindex(m);
  for (int k = 0; k < m; ++k) {
    shifted_lambda[k] = model.lambda()[k] + shift[k];
    reindex[k] = static_cast<int>(std::lround(shift[k]));
  }
  const TorusModel shifted = model.with_lambda(shifted_lambda);

  std::vector<double> original, moved;
  ModeIndex source(m);
  for (const auto& n : mode_iter(model)) {
    for (int k = 0; k < m; ++k) source[k] = n[k] - reindex[k];
    if (!model.in_box(source)) continue;
    moved.push_back(hamiltonian.value(shifted_actions(shifted, n)));
    original.push_back(hamiltonian.value(shifted_actions(model, source)));
  }
  std::sort(original.begin(), original.end());
  std::sort(moved.begin(), moved.end());

  SpectralComparison report{0.0, original.size()};
  for (std::size_t i = 0; i < original.size(); ++i)
    report.max_deviation = std::max(report.max_deviation, std::abs(original[i] - moved[i]));
  return report;
}

SpectralComparison halfform_equivalence(const TorusModel& model,
                                        std::span<const int> antiperiodic_axes) {
  const int m = model.dimension();
  std::vector<double> offset(m, 0.0);
  for (int j : antiperiodic_axes) {
    if (j < 0 || j >= m) throw DimensionError("antiperiodic axis out of range");
    offset[j] = 0.5;
  }
  std::vector<double> lowered = model.lambda();
  for (int k = 0; k < m; ++k) lowered[k] -= offset[k];
  const TorusModel periodic = model.with_lambda(lowered);

  SpectralComparison report;
  const auto modes = mode_iter(model);
  for (int k = 0; k < m; ++k) {
    const Eigen::VectorXcd diagonal = action_operator(periodic, k).matrix.diagonal();
    for (std::size_t r = 0; r < modes.size(); ++r) {
      // -i d_k exp(i (n_k + offset_k) phi^k) = (n_k + offset_k) exp(...)
      const double antiperiodic = (modes[r][k] + offset[k]) - model.lambda()[k];
      const double deviation =
          std::abs(antiperiodic - diagonal(static_cast<Eigen::Index>(r)).real());
      report.max_deviation = std::max(report.max_deviation, deviation);
      ++report.compared;
    }
  }
  return report;
}

std::vector<SpectrumLevel> hamiltonian_spectrum(const TorusModel& model,
                                                const DynamicHamiltonian& hamiltonian,
                                                double tolerance) {
  const auto op = hamiltonian_operator(model, hamiltonian);
  const auto modes = mode_iter(model);
  std::vector<std::size_t> order(modes.size());
  std::iota(order.begin(), order.end(), 0);
  auto value = [&](std::size_t i) { return op.matrix(static_cast<Eigen::Index>(i),
                                                     static_cast<Eigen::Index>(i)).real(); };
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return value(a) < value(b); });

  std::vector<SpectrumLevel> levels;
  std::vector<std::set<ModeIndex>> labels;
  for (std::size_t i : order) {
    const double v = value(i);
    if (levels.empty() ||
        std::abs(v - levels.back().value) > tolerance * std::max(1.0, std::abs(v))) {
      levels.push_back({v, 0, {}});
      labels.emplace_back();
    }
    ++levels.back().multiplicity;
    labels.back().insert(dynamic_label(model, modes[i]));
  }
  for (std::size_t i = 0; i < levels.size(); ++i)
    levels[i].labels.assign(labels[i].begin(), labels[i].end());
  return levels;
}

}  // namespace torus
