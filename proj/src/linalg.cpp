#include "torus_holonomy/linalg.hpp"

#include <cmath>
#include <complex>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

namespace torus::linalg {

Eigen::MatrixXcd unitary_step(const Eigen::MatrixXcd& hermitian, double dt) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(hermitian);
  const auto& v = solver.eigenvectors();
  const auto& w = solver.eigenvalues();
  Eigen::VectorXcd phases(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) phases(i) = std::polar(1.0, -w(i) * dt);
  return v * phases.asDiagonal() * v.adjoint();
}

Eigen::MatrixXcd expm(const Eigen::MatrixXcd& a) { return a.exp(); }
Eigen::MatrixXd expm(const Eigen::MatrixXd& a) { return a.exp(); }

double max_abs(const Eigen::MatrixXcd& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

double unitarity_defect(const Eigen::MatrixXcd& u) {
  return max_abs(u.adjoint() * u - Eigen::MatrixXcd::Identity(u.rows(), u.cols()));
}

double hermiticity_defect(const Eigen::MatrixXcd& a) { return max_abs(a.adjoint() - a); }

Eigen::MatrixXcd commutator(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return a * b - b * a;
}

}  // namespace torus::linalg
