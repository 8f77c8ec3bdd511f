// Copyright 2026 The OE-VQE Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace oevqe {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Bad user input: malformed files, inconsistent arguments, violated
/// preconditions. Maps to exit code 1 at the command line.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical procedure failed to deliver (non-convergence, degenerate
/// denominators, line-search collapse). Maps to exit code 2.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Symmetric eigendecomposition with ascending eigenvalues and a fixed
/// column sign: the entry of largest magnitude in each eigenvector is made
/// positive (ties resolved toward the lowest row index).
struct SymmetricEigen {
  Vector values;
  Matrix vectors;
};

SymmetricEigen symmetric_eigen(const Matrix& m);

/// max |a_ij - a_ji|
double asymmetry(const Matrix& m);

/// max |c^T c - I|
double orthonormality_error(const Matrix& c);

}  // namespace oevqe
