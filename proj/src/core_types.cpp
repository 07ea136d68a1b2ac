#include "torus_holonomy/core_types.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "torus_holonomy/errors.hpp"

namespace torus {

TorusModel::TorusModel(int dimension, std::vector<int> controlled, std::vector<double> lambda,
                       int truncation)
    : dimension_(dimension),
      controlled_(std::move(controlled)),
      lambda_(std::move(lambda)),
      truncation_(truncation) {
  if (dimension_ < 1) throw DimensionError("torus dimension must be positive");
  if (truncation_ < 1) throw std::invalid_argument("truncation N must be at least 1");
  if (static_cast<int>(lambda_.size()) != dimension_)
    throw DimensionError("lambda must have one entry per torus axis");
  for (double l : lambda_)
    if (!std::isfinite(l)) throw std::invalid_argument("lambda offsets must be finite");

  std::sort(controlled_.begin(), controlled_.end());
  if (std::adjacent_find(controlled_.begin(), controlled_.end()) != controlled_.end())
    throw std::invalid_argument("controlled axes must be distinct");
  for (int a : controlled_)
    if (a < 0 || a >= dimension_)
      throw DimensionError("controlled axis " + std::to_string(a) + " out of range");
  for (int k = 0; k < dimension_; ++k)
    if (!std::binary_search(controlled_.begin(), controlled_.end(), k)) dynamic_.push_back(k);

  lattice_size_ = 1;
  for (int k = 0; k < dimension_; ++k) lattice_size_ *= static_cast<std::size_t>(axis_size());
}

bool TorusModel::is_controlled(int axis) const {
  return std::binary_search(controlled_.begin(), controlled_.end(), axis);
}

std::vector<double> TorusModel::canonical_lambda() const {
  std::vector<double> out(lambda_.size());
  std::transform(lambda_.begin(), lambda_.end(), out.begin(),
                 [](double l) { return l - std::floor(l); });
  return out;
}

bool TorusModel::in_box(std::span<const int> n) const {
  if (static_cast<int>(n.size()) != dimension_) return false;
  return std::all_of(n.begin(), n.end(), [&](int v) { return std::abs(v) <= truncation_; });
}

std::size_t TorusModel::linear_index(std::span<const int> n) const {
  if (static_cast<int>(n.size()) != dimension_)
    throw DimensionError("mode index has the wrong length");
  std::size_t index = 0;
  for (int v : n) {
    if (std::abs(v) > truncation_) throw std::out_of_range("mode outside truncation box");
    index = index * static_cast<std::size_t>(axis_size()) +
            static_cast<std::size_t>(v + truncation_);
  }
  return index;
}

ModeIndex TorusModel::mode_at(std::size_t index) const {
  if (index >= lattice_size_) throw std::out_of_range("mode position outside lattice");
  ModeIndex n(dimension_);
  const auto side = static_cast<std::size_t>(axis_size());
  for (int k = dimension_ - 1; k >= 0; --k) {
    n[k] = static_cast<int>(index % side) - truncation_;
    index /= side;
  }
  return n;
}

TorusModel TorusModel::with_lambda(std::vector<double> lambda) const {
  return TorusModel(dimension_, controlled_, std::move(lambda), truncation_);
}

TorusModel TorusModel::with_truncation(int truncation) const {
  return TorusModel(dimension_, controlled_, lambda_, truncation);
}

TorusModel TorusModel::controlled_submodel() const {
  if (controlled_.empty()) throw PreconditionError("model has no controlled axes");
  std::vector<int> axes(controlled_.size());
  std::vector<double> lambda;
  for (std::size_t i = 0; i < controlled_.size(); ++i) {
    axes[i] = static_cast<int>(i);
    lambda.push_back(lambda_[controlled_[i]]);
  }
  return TorusModel(static_cast<int>(controlled_.size()), axes, lambda, truncation_);
}

std::vector<ModeIndex> mode_iter(const TorusModel& model) {
  std::vector<ModeIndex> modes;
  modes.reserve(model.lattice_size());
  for (std::size_t i = 0; i < model.lattice_size(); ++i) modes.push_back(model.mode_at(i));
  return modes;
}

std::vector<ModeIndex> interior_modes(const TorusModel& model, int bandwidth) {
  if (bandwidth < 0 || bandwidth > model.truncation())
    throw PreconditionError("guard band " + std::to_string(bandwidth) +
                            " leaves no interior modes for N=" +
                            std::to_string(model.truncation()));
  const int radius = model.truncation() - bandwidth;
  std::vector<ModeIndex> out;
  for (auto& n : mode_iter(model))
    if (std::all_of(n.begin(), n.end(), [&](int v) { return std::abs(v) <= radius; }))
      out.push_back(std::move(n));
  return out;
}

std::vector<Eigen::Index> interior_indices(const TorusModel& model, int bandwidth) {
  std::vector<Eigen::Index> out;
  for (const auto& n : interior_modes(model, bandwidth))
    out.push_back(static_cast<Eigen::Index>(model.linear_index(n)));
  return out;
}

WaveFunction::WaveFunction(TorusModel model)
    : model_(std::move(model)),
      coefficients_(Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(model_.lattice_size()))) {}

WaveFunction::WaveFunction(TorusModel model, Eigen::VectorXcd coefficients)
    : model_(std::move(model)), coefficients_(std::move(coefficients)) {
  if (static_cast<std::size_t>(coefficients_.size()) != model_.lattice_size())
    throw DimensionError("coefficient vector does not match the lattice size");
}

WaveFunction WaveFunction::basis(const TorusModel& model, std::span<const int> n) {
  WaveFunction psi(model);
  psi.coefficients_(static_cast<Eigen::Index>(model.linear_index(n))) = 1.0;
  return psi;
}

Complex WaveFunction::coefficient(std::span<const int> n) const {
  if (!model_.in_box(n)) return 0.0;
  return coefficients_(static_cast<Eigen::Index>(model_.linear_index(n)));
}

WaveFunction WaveFunction::operator+(const WaveFunction& other) const {
  if (!(model_ == other.model_)) throw DimensionError("wavefunctions on different models");
  return WaveFunction(model_, coefficients_ + other.coefficients_);
}

WaveFunction operator*(Complex scale, const WaveFunction& psi) {
  return WaveFunction(psi.model_, scale * psi.coefficients_);
}

Complex inner_product(const WaveFunction& s, const WaveFunction& s_prime) {
  if (!(s.model() == s_prime.model())) throw DimensionError("wavefunctions on different models");
  return s.coefficients().dot(s_prime.coefficients());
}

double angle_distance(double a, double b) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double d = std::fmod(std::abs(a - b), two_pi);
  return std::min(d, two_pi - d);
}

}  // namespace torus
