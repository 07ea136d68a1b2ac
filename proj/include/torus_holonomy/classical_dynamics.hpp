#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "torus_holonomy/core_types.hpp"
#include "torus_holonomy/observables.hpp"
#include "torus_holonomy/parameter_curve.hpp"

namespace torus {

struct TrajectorySample {
  double time;
  ClassicalState state;
};

/// Samples at strictly increasing times.
using Trajectory = std::vector<TrajectorySample>;

/// Free flow: actions fixed, phi^k(t) = phi^k(0) + dH/dI_k * t, closed form.
ClassicalState evolve_free(const DynamicHamiltonian& hamiltonian, const ClassicalState& initial,
                           double t);

/// Fixed-step RK4 of the perturbed Hamilton equations
///   dI_k/dt   = - d_k(Lambda^j_beta) I_j dxi^beta/dt
///   dphi^k/dt = dH/dI_k + Lambda^k_beta dxi^beta/dt
/// over [0, T]; returns steps + 1 samples.
Trajectory evolve_perturbed(const DynamicHamiltonian& hamiltonian,
                            const ControlConnection& connection, const ParameterCurve& curve,
                            const ClassicalState& initial, int steps);

std::size_t hamiltonian_split_violations(const DynamicHamiltonian& hamiltonian,
                                         const TorusModel& model);
std::size_t connection_split_violations(const ControlConnection& connection,
                                        const TorusModel& model);
/// Number of structural violations of the controlled/dynamic split: terms of
/// H carrying a controlled action, connection components on dynamic axes and
/// connection modes with dynamic-angle dependence. Zero when the split holds.
std::size_t split_residual(const DynamicHamiltonian& hamiltonian,
                           const ControlConnection& connection, const TorusModel& model);
/// Throws SplitViolation unless split_residual is zero.
void require_split(const DynamicHamiltonian& hamiltonian, const ControlConnection& connection,
                   const TorusModel& model);
void require_split(const ControlConnection& connection, const TorusModel& model);

/// Controlled angles sampled on a uniform grid over [0, T].
struct AngleHistory {
  std::vector<double> times;
  std::vector<std::vector<double>> angles;
};

/// RK4 of dphi^a/dt = Lambda^a_beta dxi^beta/dt for the controlled angles,
/// `intervals` uniform steps.
AngleHistory controlled_angle_history(const TorusModel& model, const ControlConnection& connection,
                                      const ParameterCurve& curve,
                                      std::span<const double> initial_angles, int intervals);

struct ModeTransport {
  /// Controlled sublattice over which the mode values are laid out.
  TorusModel lattice;
  /// exp(i n.phi(T)) with phi(T) from the integrated angle equation.
  Eigen::VectorXcd direct;
  /// Ordered-product solution of dpsi_n/dt = i psi_n n_a Lambda^a_beta dxi^beta/dt
  /// on the truncated sublattice, started from exp(i n.phi(0)).
  Eigen::VectorXcd ordered;
  /// max |direct - ordered| over modes with |n_a| <= N - guard.
  double discrepancy;
  int guard;
  /// Controlled angles on the half-step grid (2 * steps + 1 samples).
  AngleHistory history;
};

/// Both routes for the classical mode functions psi_(n_a)(t) = exp(i n_a phi^a(t)).
/// The truncation is the model's N; `guard` keeps the comparison away from
/// the box boundary. Throws SplitViolation.
ModeTransport classical_mode_transport(const TorusModel& model, const ControlConnection& connection,
                                       const ParameterCurve& curve,
                                       std::span<const double> initial_angles, int steps,
                                       int guard);

/// Ordered-product solution of dI_a/dt = -d_a(Lambda^b_beta) I_b dxi^beta/dt,
/// using the midpoint angles of `history` (which must hold 2 * steps + 1
/// samples, e.g. ModeTransport::history).
std::vector<double> classical_action_transport(const TorusModel& model,
                                               const ControlConnection& connection,
                                               const ParameterCurve& curve,
                                               std::span<const double> initial_actions,
                                               const AngleHistory& history, int steps);

}  // namespace torus
