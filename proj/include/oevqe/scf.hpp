// Copyright 2026 The OE-VQE Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "oevqe/common.hpp"
#include "oevqe/integrals.hpp"

#include <vector>

namespace oevqe {

/// Closed-shell mean-field solution expressed in the input orbital basis.
struct RhfSolution {
  Matrix coefficients;   ///< columns are molecular orbitals
  Vector orbital_energies;  ///< ascending
  Matrix density;        ///< spin-summed, trace = n_elec
  Matrix fock;
  double energy = 0.0;   ///< total, includes e_nuc
  int iterations = 0;
  std::vector<double> energy_history;  ///< energy of the density entering each iteration
};

/// F_ij = h_ij + sum_kl D_kl [ (ij|kl) - 1/2 (ik|jl) ]
Matrix build_fock(const Matrix& density, const IntegralSet& ints);

/// 1/2 sum_ij (h + F)_ij D_ij + e_nuc
double rhf_energy(const Matrix& density, const IntegralSet& ints);

struct ScfOptions {
  int max_iter = 500;
  double conv_tol = 1e-10;
  double mixing = 0.7;  ///< largest weight of the new density; smaller when the energy would rise
  double degeneracy_tol = 1e-8;
};

/// Roothaan iterations with linear density mixing, starting from the core
/// Hamiltonian. Throws NumericalError on non-convergence (the message carries
/// the last commutator residual) and when the HOMO and LUMO are degenerate.
RhfSolution run_rhf(const IntegralSet& ints, const ScfOptions& opts = {});

}  // namespace oevqe
