#pragma once

#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "torus_holonomy/core_types.hpp"
#include "torus_holonomy/observables.hpp"
#include "torus_holonomy/parameter_curve.hpp"
#include "torus_holonomy/quantization.hpp"

namespace torus {

enum class PropagatorMethod { ordered_product, diagonal_exact, reference };
std::string_view to_string(PropagatorMethod method);

struct PropagatorReport {
  OperatorMatrix op;
  int steps = 0;
  /// max |(U^dagger U - I)_{rs}|, as computed; never repaired.
  double unitarity_defect = 0.0;
  PropagatorMethod method = PropagatorMethod::ordered_product;
};

/// Quantized perturbation term on the full lattice,
///   Delta^ = quantize_affine(I_a Lambda^a_beta(sigma, phi) velocity^beta).
/// Throws SplitViolation if the connection leaves the controlled block.
OperatorMatrix delta_generator(const TorusModel& model, const ControlConnection& connection,
                               std::span<const double> sigma, std::span<const double> velocity);

/// Same generator built natively on the controlled submodel.
OperatorMatrix controlled_delta_generator(const TorusModel& model,
                                          const ControlConnection& connection,
                                          std::span<const double> sigma,
                                          std::span<const double> velocity);

/// U_1(t) = exp(-i H t), exact diagonal phases.
OperatorMatrix dynamic_propagator(const TorusModel& model, const DynamicHamiltonian& hamiltonian,
                                  double t);
/// U_1(t) psi_0.
WaveFunction evolve_dynamic(const TorusModel& model, const DynamicHamiltonian& hamiltonian,
                            const WaveFunction& initial, double t);

/// Control propagator U_2 = T exp(-i int Delta^ dt) on the controlled
/// submodel: ordered product over a uniform partition, each factor
/// exp(-i Delta^(t_mid) dt). Throws SplitViolation or PreconditionError (no
/// controlled axes).
PropagatorReport evolve_control(const TorusModel& model, const ControlConnection& connection,
                                const ParameterCurve& curve, int steps);

/// Tensor lift of a controlled-submodel operator to the full lattice
/// (identity on the dynamic indices).
OperatorMatrix lift_controlled(const TorusModel& model, const OperatorMatrix& controlled);

/// Restriction of a full-lattice operator to the eigenspace block with fixed
/// dynamic label, laid out over the controlled submodel.
OperatorMatrix eigenspace_block(const TorusModel& model, const OperatorMatrix& full,
                                std::span<const int> dynamic_index);

struct FullEvolution {
  /// U_1(T) U_2(T), U_2 lifted from the controlled submodel.
  PropagatorReport factorized;
  /// Ordered product of the full generator H^ + Delta^(t) on the full lattice
  /// with two exponentials per step (fourth-order commutator-free scheme).
  PropagatorReport reference;
  double deviation = 0.0;
};

FullEvolution evolve_full(const TorusModel& model, const DynamicHamiltonian& hamiltonian,
                          const ControlConnection& connection, const ParameterCurve& curve,
                          int steps);

/// Holonomy (Berry factor) of a closed parameter loop on the eigenspace with
/// the given dynamic label: a (2N+1)^l unitary. Throws PreconditionError for
/// open curves or labels outside the box.
PropagatorReport holonomy(const TorusModel& model, const ControlConnection& connection,
                          const ParameterCurve& loop, std::span<const int> dynamic_index,
                          int steps);

/// Max pairwise max-abs deviation between U_2 along curve o tau for each tau.
/// Throws PreconditionError for non-monotone or endpoint-moving tau.
double path_invariance_report(const TorusModel& model, const ControlConnection& connection,
                              const ParameterCurve& curve,
                              std::span<const Reparameterization> reparameterizations, int steps);

/// max over `samples` uniformly spaced times of max |[Delta^(t), H^]|.
double perturbation_commutator(const TorusModel& model, const DynamicHamiltonian& hamiltonian,
                               const ControlConnection& connection, const ParameterCurve& curve,
                               int samples);

/// Frobenius norm of the entries of a full-lattice operator that connect
/// modes with different H^ eigenvalues.
double off_block_mass(const TorusModel& model, const DynamicHamiltonian& hamiltonian,
                      const OperatorMatrix& full);

/// int_xi Lambda^k_beta dsigma^beta of the angle-independent part of the
/// connection, one entry per torus axis (composite Gauss-Legendre).
std::vector<double> connection_line_integral(const ControlConnection& connection,
                                             const ParameterCurve& curve, int panels = 256);

/// Predicted diagonal of U_2 on the controlled submodel for an
/// angle-independent connection: exp(-i (n_a - lambda_a) int Lambda^a).
Eigen::VectorXcd abelian_phases(const TorusModel& model, const ControlConnection& connection,
                                const ParameterCurve& curve);

}  // namespace torus
