#pragma once

#include <stdexcept>
#include <string>

namespace torus {

/// Operands built for different models, or vectors of the wrong length.
class DimensionError : public std::invalid_argument {
 public:
  explicit DimensionError(const std::string& what) : std::invalid_argument(what) {}
};

/// The Hamiltonian depends on a controlled action, or the connection on a
/// dynamic angle (or has a component along a dynamic axis).
class SplitViolation : public std::domain_error {
 public:
  explicit SplitViolation(const std::string& what) : std::domain_error(what) {}
};

/// A Fourier field is wider than the truncation box allows.
class BandwidthError : public std::out_of_range {
 public:
  explicit BandwidthError(const std::string& what) : std::out_of_range(what) {}
};

/// Violated operation precondition: open curve passed as a loop, non-monotone
/// reparameterization, empty guard band and similar.
class PreconditionError : public std::domain_error {
 public:
  explicit PreconditionError(const std::string& what) : std::domain_error(what) {}
};

}  // namespace torus
