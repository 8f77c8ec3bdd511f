// Copyright 2026 The OE-VQE Authors
// SPDX-License-Identifier: Apache-2.0

/// Brute-force references used to check the production kernels. Nothing here
/// calls into the simulator or the solver: FCI works on alpha/beta occupation
/// strings, the dense exponential builds matrices from Pauli strings, and MP2
/// does its own four-index transform.

#pragma once

#include "oevqe/common.hpp"
#include "oevqe/fermisim.hpp"
#include "oevqe/integrals.hpp"
#include "oevqe/projection.hpp"
#include "oevqe/scf.hpp"

#include <cstdint>
#include <vector>

namespace oevqe {

enum class FciMethod { Lanczos, Dense };

struct FciOptions {
  FciMethod method = FciMethod::Lanczos;
  double tol = 1e-11;   ///< Lanczos residual norm
  int max_iter = 400;
  int max_orbitals = 10;
};

struct FciResult {
  double energy = 0.0;      ///< total, with e_core and e_nuc
  double electronic = 0.0;
  std::size_t dimension = 0;  ///< determinants in the S_z = 0 sector
  int iterations = 0;
  Statevector state;         ///< ground state on the 2k-qubit register
};

/// Lowest eigenpair in the (n_elec, S_z = 0) sector.
FciResult fci_ground_state(const SubspaceHamiltonian& h, const FciOptions& opts = {});
FciResult fci_ground_state(const IntegralSet& ints, const FciOptions& opts = {});

/// 2^n x 2^n matrix of sum_j c_j P_j built from the Pauli expansion.
Eigen::MatrixXcd dense_generator(const ExcitationOp& op, int n_qubits);

/// exp(theta tau)|psi> by a scaled Taylor series of the dense generator.
Statevector dense_exponential(const Statevector& psi, const ExcitationOp& op, double theta);

/// E_hf + closed-shell MP2 correlation from the canonical orbitals of `sol`.
double mp2_total_energy(const IntegralSet& ints, const RhfSolution& sol);

/// Pool by exhaustive enumeration of ordered index tuples, deduplicated by the
/// generator each tuple represents up to sign.
std::vector<ExcitationOp> enumerate_pool(int k);

struct BpOptions {
  int n_qubits = 4;
  int n_hamiltonians = 2000;
  std::uint64_t seed = 1;
  bool haar = true;  ///< false: V = identity
};

struct BpResult {
  int n_qubits = 0;
  int n_hamiltonians = 0;
  long long n_samples = 0;  ///< (Hamiltonian, operator) pairs
  double mean = 0.0;
  double variance = 0.0;
  double mean_std_error = 0.0;  ///< from the spread of per-Hamiltonian means
};

/// Pool-gradient statistics over random Hamiltonians V H0 V+ with V Haar
/// distributed and H0 diagonal (uniform entries, traceless, Tr H0^2 = 1),
/// evaluated at the determinant with the lowest max(1, floor(k/2)) of the
/// k = n/2 orbitals doubly occupied.
BpResult bp_variance_experiment(const BpOptions& opts);

/// Least-squares slope of log2(variance) against n_qubits.
double bp_log2_slope(const std::vector<BpResult>& rows);

}  // namespace oevqe
