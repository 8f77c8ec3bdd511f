// Copyright 2026 The OE-VQE Authors
// SPDX-License-Identifier: Apache-2.0

/// Fragment/bath/core/virtual partition of a mean-field density.
///
/// The environment block of the density is diagonalized; eigenvectors with
/// fractional occupation become bath orbitals, the rest are core (occupation
/// 2) or virtual (occupation 0). Fragment and bath together form the impurity.

#pragma once

#include "oevqe/common.hpp"
#include "oevqe/integrals.hpp"
#include "oevqe/projection.hpp"

#include <vector>

namespace oevqe {

struct FragmentSpec {
  std::vector<int> indices;

  /// Throws InputError on duplicates, out-of-range or empty index lists.
  void validate(int norb) const;
};

struct DensityPartition {
  Matrix fragment;      ///< L_A x L_A
  Matrix inter;         ///< L_A x (L - L_A)
  Matrix environment;   ///< (L - L_A) x (L - L_A)
  std::vector<int> env_index_map;  ///< original orbital of each environment position
};

DensityPartition partition_density(const Matrix& density, const FragmentSpec& frag);

struct EmbeddingBasis {
  Matrix u_frag;  ///< L x L_A, unit columns on the fragment rows
  Matrix u_bath;  ///< L x L_B
  Matrix u_core;  ///< L x L_core
  Matrix u_vir;   ///< L x L_vir
  Vector occ_env;  ///< environment eigenvalues, bath then core then virtual
  Vector occ_bath;
  Vector occ_core;
  Vector occ_vir;
  double delta = 1e-6;
  Matrix density;  ///< the mean-field density the partition was built from
  FragmentSpec fragment;

  int n_frag() const { return static_cast<int>(u_frag.cols()); }
  int n_bath() const { return static_cast<int>(u_bath.cols()); }
  int n_core() const { return static_cast<int>(u_core.cols()); }
  int n_vir() const { return static_cast<int>(u_vir.cols()); }
  int n_imp() const { return n_frag() + n_bath(); }
  int norb() const { return static_cast<int>(u_frag.rows()); }

  /// [u_frag | u_bath]
  Matrix impurity() const;
  /// [u_frag | u_bath | u_core | u_vir]
  Matrix full() const;
};

/// Classifies environment eigenpairs of `density` against `delta`: bath for
/// delta < lambda < 2 - delta, core for lambda >= 2 - delta, virtual otherwise.
/// Within each class columns are ordered by descending occupation; exact ties
/// fall back to descending coupling |D_inter v| and then to the lowest
/// dominant orbital index.
EmbeddingBasis build_bath(const Matrix& density, const FragmentSpec& frag, double delta = 1e-6);

/// Electrons carried by the impurity, trace(C_imp^T D C_imp); throws
/// NumericalError if it is not an even integer to 1e-6.
int impurity_electrons(const EmbeddingBasis& basis);

/// The initial active space: projection onto [u_frag | u_bath] with every core
/// orbital frozen.
SubspaceHamiltonian impurity_hamiltonian(const IntegralSet& ints, const EmbeddingBasis& basis);

}  // namespace oevqe
