#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "specred/mat.hpp"

namespace specred {

inline Eigen::MatrixXcd to_eigen(const Mat<Cx>& m) {
  Eigen::MatrixXcd e(m.rows, m.cols);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) e(i, j) = m(i, j);
  return e;
}

inline Mat<Cx> from_eigen(const Eigen::MatrixXcd& e) {
  Mat<Cx> m(int(e.rows()), int(e.cols()));
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) m(i, j) = e(i, j);
  return m;
}

// Hermitian eigendecomposition; input is symmetrized first so tiny asymmetry
// from upstream arithmetic cannot leak into complex eigenvalues.
inline void herm_eig(const Mat<Cx>& m, Eigen::VectorXd& vals, Eigen::MatrixXcd& vecs) {
  Eigen::MatrixXcd e = to_eigen(m);
  e = (e + e.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(e);
  vals = es.eigenvalues();
  vecs = es.eigenvectors();
}

// Extends an isometry (orthonormal columns) to a full unitary [sigma | perp];
// returns the n x (n - s) complement block.  The trailing columns of the
// Householder Q are orthogonal to col(sigma) because the leading ones span it.
inline Mat<Cx> unitary_completion(const Mat<Cx>& sigma) {
  const int n = sigma.rows, s = sigma.cols;
  if (s >= n) return Mat<Cx>(n, 0);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(to_eigen(sigma));
  Eigen::MatrixXcd q = qr.householderQ();
  Mat<Cx> perp(n, n - s);
  for (int i = 0; i < n; ++i)
    for (int j = s; j < n; ++j) perp(i, j - s) = q(i, j);
  return perp;
}

}  // namespace specred
