#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace torus {

using Complex = std::complex<double>;

/// Integer Fourier label n = (n_1..n_m) of the basis function exp(i n.phi).
using ModeIndex = std::vector<int>;

/// Torus dimension, controlled/dynamic axis split, lambda offsets and the
/// symmetric truncation box |n_k| <= N. Axes are 0-based.
class TorusModel {
 public:
  TorusModel(int dimension, std::vector<int> controlled, std::vector<double> lambda,
             int truncation);

  int dimension() const { return dimension_; }
  int truncation() const { return truncation_; }
  int axis_size() const { return 2 * truncation_ + 1; }
  std::size_t lattice_size() const { return lattice_size_; }

  const std::vector<int>& controlled() const { return controlled_; }
  const std::vector<int>& dynamic() const { return dynamic_; }
  const std::vector<double>& lambda() const { return lambda_; }
  bool is_controlled(int axis) const;

  /// lambda reduced to [0,1); integer shifts of lambda give gauge-equivalent
  /// representations.
  std::vector<double> canonical_lambda() const;

  bool in_box(std::span<const int> n) const;
  /// Position of n in the lexicographic layout; throws std::out_of_range
  /// outside the box.
  std::size_t linear_index(std::span<const int> n) const;
  ModeIndex mode_at(std::size_t index) const;

  TorusModel with_lambda(std::vector<double> lambda) const;
  TorusModel with_truncation(int truncation) const;
  /// Model over the controlled axes only (all of them controlled), carrying
  /// their lambda offsets. Throws PreconditionError if nothing is controlled.
  TorusModel controlled_submodel() const;

  friend bool operator==(const TorusModel&, const TorusModel&) = default;

 private:
  int dimension_;
  std::vector<int> controlled_;
  std::vector<int> dynamic_;
  std::vector<double> lambda_;
  int truncation_;
  std::size_t lattice_size_;
};

/// All box modes in lexicographic order (axis 0 most significant). This order
/// is the row/column layout of every operator matrix.
std::vector<ModeIndex> mode_iter(const TorusModel& model);

/// Modes with |n_k| <= N - bandwidth. Throws PreconditionError when
/// bandwidth > N or bandwidth < 0.
std::vector<ModeIndex> interior_modes(const TorusModel& model, int bandwidth);
std::vector<Eigen::Index> interior_indices(const TorusModel& model, int bandwidth);

/// Dense coefficient vector over the truncation box in mode_iter layout;
/// amplitudes outside the box are zero.
class WaveFunction {
 public:
  explicit WaveFunction(TorusModel model);
  WaveFunction(TorusModel model, Eigen::VectorXcd coefficients);

  static WaveFunction basis(const TorusModel& model, std::span<const int> n);

  const TorusModel& model() const { return model_; }
  const Eigen::VectorXcd& coefficients() const { return coefficients_; }
  Complex coefficient(std::span<const int> n) const;
  double norm_squared() const { return coefficients_.squaredNorm(); }

  WaveFunction operator+(const WaveFunction& other) const;
  friend WaveFunction operator*(Complex scale, const WaveFunction& psi);

 private:
  TorusModel model_;
  Eigen::VectorXcd coefficients_;
};

/// <s|s'> = sum_n conj(c_n) c'_n: conjugate-linear in the first argument.
/// Throws DimensionError for wavefunctions on different models.
Complex inner_product(const WaveFunction& s, const WaveFunction& s_prime);

struct ClassicalState {
  std::vector<double> actions;
  /// Unwrapped angles; compare modulo 2 pi.
  std::vector<double> angles;
};

/// Distance between two angles on the circle, in [0, pi].
double angle_distance(double a, double b);

}  // namespace torus
