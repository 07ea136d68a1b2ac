#pragma once

#include <Eigen/Dense>

namespace torus::linalg {

/// exp(-i H dt) for Hermitian H through its eigendecomposition; the result is
/// unitary to roundoff.
Eigen::MatrixXcd unitary_step(const Eigen::MatrixXcd& hermitian, double dt);

/// exp(A) for a general square matrix (scaling and squaring, Pade).
Eigen::MatrixXcd expm(const Eigen::MatrixXcd& a);
Eigen::MatrixXd expm(const Eigen::MatrixXd& a);

double max_abs(const Eigen::MatrixXcd& a);
/// max |(U^dagger U - I)_{rs}|
double unitarity_defect(const Eigen::MatrixXcd& u);
/// max |(A^dagger - A)_{rs}|, zero means exactly Hermitian.
double hermiticity_defect(const Eigen::MatrixXcd& a);
Eigen::MatrixXcd commutator(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

}  // namespace torus::linalg
