#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "torus_holonomy/core_types.hpp"
#include "torus_holonomy/observables.hpp"

namespace torus {

/// Dense operator on the truncation box in mode_iter layout, tagged with the
/// bandwidth of the field it was built from.
struct OperatorMatrix {
  TorusModel model;
  int bandwidth = 0;
  Eigen::MatrixXcd matrix;

  WaveFunction apply(const WaveFunction& psi) const;
};

/// I_k = -i d_k - lambda_k: diagonal n_k - lambda_k.
OperatorMatrix action_operator(const TorusModel& model, int axis);

/// H(I_j) on the diagonal, H evaluated at n - lambda. Throws SplitViolation if
/// H depends on a controlled action.
OperatorMatrix hamiltonian_operator(const TorusModel& model, const DynamicHamiltonian& hamiltonian);

/// Diagonal quantization of an arbitrary scalar function of the dynamic
/// actions; `value` receives (n_j - lambda_j) over model.dynamic() in order.
using DynamicSpectralFunction = std::function<double(std::span<const double>)>;
OperatorMatrix hamiltonian_operator(const TorusModel& model, const DynamicSpectralFunction& value);

/// Quantization of f = a^k I_k + b in the angle polarization,
///   f^ = -i a^k d_k - (i/2) d_k a^k - a^k lambda_k + b,
/// with matrix elements <n+c| f^ |n> = sum_k A^k_c (n_k + c_k/2 - lambda_k) + B_c.
/// Shifts leaving the box are dropped. Real observables give bit-exactly
/// Hermitian matrices. Throws BandwidthError when bandwidth(f) > N.
OperatorMatrix quantize_affine(const TorusModel& model, const AffineObservable& f);

/// Multiplication by exp(i c.phi): 0/1 matrix mapping n to n + c inside the
/// box. Throws BandwidthError when some |c_k| > 2N.
OperatorMatrix multiplication_operator(const TorusModel& model, const Shift& c);

/// max |[f^, g^] + i quantize({f, g})| over rows and columns in
/// interior_modes(bandwidth(f) + bandwidth(g)).
double dirac_residual(const TorusModel& model, const AffineObservable& f,
                      const AffineObservable& g);

struct SpectralComparison {
  double max_deviation = 0.0;
  std::size_t compared = 0;
};

/// Compares the spectrum of H with offsets lambda + shift against the
/// spectrum with lambda, re-indexing n -> n - round(shift) and restricting to
/// modes for which both labels are in the box. Integer shifts must deviate
/// only by roundoff; non-integer shifts show the inequivalence.
SpectralComparison lambda_shift_equivalence(const TorusModel& model,
                                            const DynamicHamiltonian& hamiltonian,
                                            std::span<const double> shift);

/// Action spectra in the representation whose states are antiperiodic along
/// `antiperiodic_axes` (basis exp(i (n_j + 1/2) phi^j)) against the periodic
/// representation with lambda_j -> lambda_j - 1/2, over every axis and mode.
SpectralComparison halfform_equivalence(const TorusModel& model,
                                        std::span<const int> antiperiodic_axes);

struct SpectrumLevel {
  double value;
  std::size_t multiplicity;
  /// Distinct dynamic labels (n_j over model.dynamic()) carrying this value.
  std::vector<ModeIndex> labels;
};

/// Distinct diagonal values of H in ascending order with multiplicities.
/// Values closer than `tolerance` (relative to max(1, |value|)) are merged.
std::vector<SpectrumLevel> hamiltonian_spectrum(const TorusModel& model,
                                                const DynamicHamiltonian& hamiltonian,
                                                double tolerance = 1e-12);

/// Dynamic part (n_j over model.dynamic()) of a full mode label.
ModeIndex dynamic_label(const TorusModel& model, std::span<const int> n);
/// Controlled part (n_a over model.controlled()) of a full mode label.
ModeIndex controlled_label(const TorusModel& model, std::span<const int> n);

}  // namespace torus
