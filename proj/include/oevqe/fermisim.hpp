// Copyright 2026 The OE-VQE Authors
// SPDX-License-Identifier: Apache-2.0

/// Exact statevector simulation of Jordan-Wigner encoded fermions.
///
/// Spatial orbital j occupies qubits 2j (alpha) and 2j+1 (beta); bit q of a
/// basis index is the occupation of spin orbital q, and
///
///   |x> = a+_{q1} a+_{q2} ... a+_{qm} |0>,   q1 < q2 < ... < qm.
///
/// Parity strings run over lower qubits only, so orbitals appended at the tail
/// never change the action of operators recorded on a smaller register.

#pragma once

#include "oevqe/common.hpp"
#include "oevqe/projection.hpp"

#include <array>
#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace oevqe {

using Amplitude = std::complex<double>;

class Statevector {
 public:
  Statevector() = default;
  /// |0...0> on n_qubits.
  explicit Statevector(int n_qubits);
  static Statevector basis_state(int n_qubits, std::uint64_t bits);

  int n_qubits() const { return n_qubits_; }
  std::size_t size() const { return amps_.size(); }
  std::span<Amplitude> amps() { return amps_; }
  std::span<const Amplitude> amps() const { return amps_; }
  Amplitude& operator[](std::size_t i) { return amps_[i]; }
  const Amplitude& operator[](std::size_t i) const { return amps_[i]; }

  double norm() const;
  /// <this|other>
  Amplitude dot(const Statevector& other) const;

 private:
  int n_qubits_ = 0;
  std::vector<Amplitude> amps_;
};

/// A Pauli string: qubit q carries X if bit q of x_mask is set, Z if bit q of
/// z_mask is set, Y if both.
struct PauliTerm {
  Amplitude coeff;
  std::uint64_t x_mask = 0;
  std::uint64_t z_mask = 0;

  std::string label() const;
};

enum class ExcitationKind { Single, Double };

/// Anti-Hermitian generator over spin orbitals.
///   single {p, q}:        a+_q a_p - a+_p a_q
///   double {p, q, r, s}:  a+_p a+_q a_r a_s - a+_s a+_r a_q a_p
struct ExcitationOp {
  ExcitationKind kind = ExcitationKind::Single;
  std::array<int, 4> idx{-1, -1, -1, -1};
  std::vector<PauliTerm> pauli_terms;

  int arity() const { return kind == ExcitationKind::Single ? 2 : 4; }
  int max_index() const;
  /// Spatial orbitals needed to hold the operator.
  int spatial_extent() const { return max_index() / 2 + 1; }
  bool touches_spatial(int j) const;
  /// p < q for singles; p < q, r < s and (r, s) < (p, q) for doubles.
  bool is_canonical() const;
  std::string label() const;

  friend bool operator==(const ExcitationOp& a, const ExcitationOp& b) {
    return a.kind == b.kind && a.idx == b.idx;
  }
  /// Canonical pool order: singles before doubles, then lexicographic indices.
  friend bool operator<(const ExcitationOp& a, const ExcitationOp& b) {
    if (a.kind != b.kind) return a.kind == ExcitationKind::Single;
    return a.idx < b.idx;
  }
};

/// Builds the generator for 2 or 4 spin-orbital indices (in the order of the
/// formulas above) together with its Jordan-Wigner Pauli expansion. Throws
/// InputError on repeated indices, indices outside the register, or a change
/// of S_z.
ExcitationOp jw_encode(std::span<const int> indices, int n_qubits);

/// exp(theta * tau) |psi>, exact. Amplitudes not coupled by tau are untouched.
void apply_excitation_inplace(Statevector& psi, const ExcitationOp& op, double theta);
Statevector apply_excitation(const Statevector& psi, const ExcitationOp& op, double theta);

/// tau |psi>
Statevector apply_generator(const Statevector& psi, const ExcitationOp& op);

/// Determinant with the n_imp_occ leading orbitals doubly occupied and each
/// appended environment orbital filled iff it is tagged core.
Statevector reference_state(int norb, int n_imp_occ, std::span<const EnvClass> occ_pattern);
Statevector reference_state(const SubspaceHamiltonian& h);

/// Tensor-extends psi with two new qubits per tag, occupied for core tags.
Statevector extend_register(const Statevector& psi, std::span<const EnvClass> appended);

/// Direct second-quantized action of a subspace Hamiltonian (electronic part,
/// no e_core / e_nuc) on a statevector, using spin-orbital Slater-Condon rules
/// over the nonzero amplitudes.
class HamiltonianKernel {
 public:
  explicit HamiltonianKernel(const SubspaceHamiltonian& h);

  int n_qubits() const { return n_; }
  Statevector apply(const Statevector& psi) const;
  double expectation(const Statevector& psi) const;

 private:
  double h(int p, int q) const { return h_[p * n_ + q]; }
  double g(int p, int q, int r, int s) const { return g_[((p * n_ + q) * n_ + r) * n_ + s]; }

  int n_ = 0;
  std::vector<double> h_;  // spin-orbital one-body
  std::vector<double> g_;  // <pq||rs>
};

/// <psi|H|psi>; throws InputError on a register mismatch.
double expectation(const Statevector& psi, const SubspaceHamiltonian& h);

/// <psi|[H, tau]|psi> = 2 Re <H psi | tau psi>
double pool_gradient(const Statevector& psi, const SubspaceHamiltonian& h, const ExcitationOp& op);

/// Same, with H|psi> supplied; used to screen a whole pool against one state.
double pool_gradient(const Statevector& psi, const Statevector& h_psi, const ExcitationOp& op);

/// Energy of prod_i exp(theta_i tau_i) |psi0> (first op applied first) and its
/// exact gradient from one forward and one adjoint sweep.
double energy_and_gradient(std::span<const ExcitationOp> ops, std::span<const double> thetas,
                           const Statevector& psi0, const HamiltonianKernel& h,
                           std::span<double> grad);

/// prod_i exp(theta_i tau_i) |psi0>
Statevector prepare_state(std::span<const ExcitationOp> ops, std::span<const double> thetas,
                          const Statevector& psi0);

Rdm12 rdm12(const Statevector& psi, int norb);

double number_expectation(const Statevector& psi);
/// <S_z> in units of hbar (alpha +1/2, beta -1/2)
double sz_expectation(const Statevector& psi);

}  // namespace oevqe
