// Copyright 2026 The OE-VQE Authors
// SPDX-License-Identifier: Apache-2.0

/// Active-space Hamiltonians obtained by projecting the full Hamiltonian onto
/// an orthonormal set of k orbitals C (an L x k column isometry):
///
///   h_sub   = C^T (h + V_eff) C
///   eri_sub = (C C | C C)          four successive one-index transforms
///   V_eff   = J[D_core] - K[D_core] / 2,   D_core = 2 R R^T
///
/// where R holds the doubly occupied orbitals left outside the subspace. The
/// frozen-core energy and nuclear repulsion are carried alongside so that
/// E = E_sub + E_core + E_nuc.

#pragma once

#include "oevqe/common.hpp"
#include "oevqe/integrals.hpp"

#include <string>
#include <vector>

namespace oevqe {

enum class EnvClass { Core, Virtual };

const char* to_string(EnvClass c);

struct SubspaceHamiltonian {
  int norb = 0;  ///< k spatial orbitals
  Matrix h1;     ///< includes V_eff
  EriTensor eri;
  double e_core = 0.0;
  double e_nuc = 0.0;
  int n_elec = 0;
  /// Reference occupation of the leading impurity orbitals (doubly occupied).
  int n_imp_occ = 0;
  /// Tags of environment orbitals appended after the impurity block, in order.
  std::vector<EnvClass> occ_pattern;

  int n_impurity() const { return norb - static_cast<int>(occ_pattern.size()); }

  /// Throws InputError if the invariants do not hold.
  void validate() const;

  /// Integral set with h1/eri of the subspace; e_nuc absorbs e_core so that
  /// exported FCIDUMP files reproduce total energies.
  IntegralSet to_integral_set(const std::string& label = {}) const;
};

/// The whole orbital space as a subspace: identity projection, no core, the
/// lowest n_elec/2 orbitals form the reference.
SubspaceHamiltonian full_space(const IntegralSet& ints);

/// D_core = 2 R R^T
Matrix core_density(const Matrix& core_remainder);

/// Frozen-core energy 1/2 sum_ij (h_ij + F[D_core]_ij) D_core_ij.
double core_energy(const IntegralSet& ints, const Matrix& d_core);

/// (pq|rs) -> sum C_pi C_qj C_rk C_sl (pq|rs)
EriTensor transform_eri(const EriTensor& eri, const Matrix& c);

/// Projected Hamiltonian; `n_elec` is the electron count inside the span of C.
/// The caller fills n_imp_occ and occ_pattern, which only concern the reference
/// state.
SubspaceHamiltonian build_subspace_hamiltonian(const IntegralSet& ints, const Matrix& c,
                                               const Matrix& core_remainder, int n_elec);

/// Spin-summed reduced density matrices over k spatial orbitals:
///   rdm1(i,j)     = sum_s <a+_is a_js>
///   rdm2(i,j,k,l) = sum_st <a+_is a+_jt a_kt a_ls>     (row-major k^4)
struct Rdm12 {
  int norb = 0;
  Matrix rdm1;
  std::vector<double> rdm2;

  double two(int i, int j, int k, int l) const {
    const std::size_t n = norb;
    return rdm2[((i * n + j) * n + k) * n + l];
  }
};

/// sum_ij h_ij rdm1_ij + 1/2 sum_ijkl (il|jk) rdm2_ijkl
double subspace_energy(const SubspaceHamiltonian& h, const Rdm12& rdm);

double assemble_energy(double e_sub, double e_core, double e_nuc);

}  // namespace oevqe
