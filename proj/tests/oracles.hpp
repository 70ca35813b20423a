#pragma once

// Independent references: Golub–Welsch eigenvalues of the three-term
// recurrence (Jacobi) matrices of classical orthogonal polynomials.

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>

namespace oracle {

/// Zeros of the physicists' Hermite polynomial H_n, ascending.
inline std::vector<double> hermite_zeros(int n) {
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) j(k, k - 1) = j(k - 1, k) = std::sqrt(k / 2.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
  const Eigen::VectorXd v = es.eigenvalues();
  return {v.data(), v.data() + n};
}

/// Zeros of the generalized Laguerre polynomial L_n^{(a)}, a > −1, ascending.
inline std::vector<double> laguerre_zeros(int n, double a) {
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) j(k, k) = 2.0 * k + a + 1.0;
  for (int k = 1; k < n; ++k) j(k, k - 1) = j(k - 1, k) = -std::sqrt(k * (k + a));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
  const Eigen::VectorXd v = es.eigenvalues();
  return {v.data(), v.data() + n};
}

}  // namespace oracle
