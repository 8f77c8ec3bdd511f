// Copyright 2026 The OE-VQE Authors
// SPDX-License-Identifier: Apache-2.0

#include "oevqe/common.hpp"

#include <cmath>

namespace oevqe {

SymmetricEigen symmetric_eigen(const Matrix& m) {
  if (m.rows() != m.cols()) throw InputError("symmetric_eigen: matrix is not square");
  SymmetricEigen out;
  if (m.rows() == 0) {
    out.values = Vector(0);
    out.vectors = Matrix(0, 0);
    return out;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.transpose()));
  if (es.info() != Eigen::Success) throw NumericalError("symmetric eigensolver failed");
  out.values = es.eigenvalues();
  out.vectors = es.eigenvectors();
  for (Eigen::Index j = 0; j < out.vectors.cols(); ++j) {
    Eigen::Index best = 0;
    double best_abs = -1.0;
    for (Eigen::Index i = 0; i < out.vectors.rows(); ++i) {
      const double a = std::abs(out.vectors(i, j));
      if (a > best_abs + 1e-12) {
        best_abs = a;
        best = i;
      }
    }
    if (out.vectors(best, j) < 0.0) out.vectors.col(j) *= -1.0;
  }
  return out;
}

double asymmetry(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return (m - m.transpose()).cwiseAbs().maxCoeff();
}

double orthonormality_error(const Matrix& c) {
  if (c.size() == 0) return 0.0;
  const Matrix g = c.transpose() * c;
  return (g - Matrix::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
}

}  // namespace oevqe
