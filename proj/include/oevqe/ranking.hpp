// Copyright 2026 The OE-VQE Authors
// SPDX-License-Identifier: Apache-2.0

/// Ordering of the unentangled environment by MP2 particle exchange with the
/// impurity.
///
/// The impurity is split into occupied/unoccupied orbitals by diagonalizing
/// the mean-field Fock matrix inside it. Closed-shell MP2 is then run on
/// (impurity occupied + environment virtual) and on (environment core +
/// impurity unoccupied). The environment-virtual block of the first density
/// and the environment-core block of the second are diagonalized; their
/// eigenvectors are the ranked environment orbitals, scored by the virtual
/// occupation gained (lambda) or the core occupation lost (2 - lambda).

#pragma once

#include "oevqe/common.hpp"
#include "oevqe/embedding.hpp"
#include "oevqe/integrals.hpp"
#include "oevqe/projection.hpp"

#include <vector>

namespace oevqe {

struct ImpuritySplit {
  Matrix occ;      ///< L x L_occ, impurity orbitals with the lowest Fock energies
  Matrix unocc;    ///< L x (L_imp - L_occ)
  Vector energies; ///< impurity Fock eigenvalues, ascending
  int n_elec = 0;  ///< electrons in the impurity
  Matrix fock;     ///< full-space Fock matrix of the mean-field density
};

/// Diagonalizes C_imp^T F C_imp with F built from the full mean-field density;
/// the lowest n_elec/2 eigenvectors are occupied. Ties in the Fock energies
/// are broken by the original column order of the eigensolver, which is
/// deterministic for a given input.
ImpuritySplit impurity_fock_split(const IntegralSet& ints, const EmbeddingBasis& basis);

struct Mp2BlockDensity {
  Matrix occ;  ///< n_o x n_o, 2 I + correction, in the basis of the input columns
  Matrix vir;  ///< n_v x n_v, in the basis of the input columns
  double correlation_energy = 0.0;
};

/// Unrelaxed closed-shell MP2 one-body density over the span of `occ_cols`
/// (doubly occupied) and `vir_cols` (empty). Each block is canonicalized with
/// `fock` before the amplitudes t_ij^ab = (ia|jb) / (e_i + e_j - e_a - e_b) are
/// formed. Throws NumericalError if a denominator vanishes (|.| < 1e-10).
Mp2BlockDensity mp2_block_rdm(const IntegralSet& ints, const Matrix& fock, const Matrix& occ_cols,
                              const Matrix& vir_cols);

struct RankedBasis {
  Matrix u_full;  ///< [impurity (occupied first) | environment ranked]
  Vector delta_lambda;
  std::vector<EnvClass> env_class;
  Vector env_energy;  ///< <c|F|c> of each ranked environment column
  int n_frag = 0;
  int n_bath = 0;
  int n_imp_occ = 0;
  int n_elec = 0;  ///< total electrons
  Vector imp_energies;

  int norb() const { return static_cast<int>(u_full.rows()); }
  int n_imp() const { return n_frag + n_bath; }
  int n_env() const { return static_cast<int>(env_class.size()); }
};

/// Scores are sorted descending; ties go to virtual before core, then to the
/// orbital closer to the Fermi level.
RankedBasis rank_environment(const IntegralSet& ints, const EmbeddingBasis& basis);

struct StageProjector {
  Matrix c;                 ///< L x (L_imp + n_s)
  Matrix core_remainder;    ///< core-tagged environment columns not yet included
  std::vector<EnvClass> appended;  ///< classes of the n_s included environment columns
  int n_elec = 0;           ///< electrons inside the span of c
};

StageProjector stage_projector(const RankedBasis& ranked, int n_s);

/// build_subspace_hamiltonian on the stage projector, with the reference
/// occupation filled in.
SubspaceHamiltonian stage_hamiltonian(const IntegralSet& ints, const RankedBasis& ranked, int n_s);

}  // namespace oevqe
