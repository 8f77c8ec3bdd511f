// Copyright 2026 The OE-VQE Authors
// SPDX-License-Identifier: Apache-2.0

/// Electron integrals over an orthonormal set of real spatial orbitals.
///
/// Two-body integrals are kept in chemist notation (pq|rs), the convention of
/// the FCIDUMP format. Formulas written with bra-ket brackets translate as
///
///   <ij|lk> (Fock Coulomb term)      -> (ij|lk) = (ij|kl)
///   <ik|lj> (Fock exchange term)     -> (ik|lj) = (ik|jl)
///   <pq|rs> (core potential)         -> (pq|rs)
///   <pr|sq> (core exchange)          -> (pr|sq) = (pr|qs)
///   h_pqrs in  1/2 sum h_pqrs a+p a+q a_s a_r  -> (pr|qs)
///
/// so that every Fock-like contraction below is J - K/2 in the usual sense.

#pragma once

#include "oevqe/common.hpp"

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace oevqe {

/// Four-index real tensor with the 8-fold permutational symmetry of (pq|rs),
/// stored packed over canonical (pq) >= (rs) pair indices.
class EriTensor {
 public:
  EriTensor() = default;
  explicit EriTensor(int norb);

  int norb() const { return norb_; }

  double operator()(int p, int q, int r, int s) const { return data_[slot(p, q, r, s)]; }
  double& at(int p, int q, int r, int s) { return data_[slot(p, q, r, s)]; }

  /// Checked accessor: throws InputError on an index outside [0, norb).
  double get(int p, int q, int r, int s) const;

  /// Dense norb^4 copy, row-major in (p,q,r,s).
  std::vector<double> to_dense() const;

  /// Packs a dense norb^4 array. Entries are averaged over each 8-fold orbit;
  /// returns the largest deviation from that average through `max_asym`.
  static EriTensor from_dense(int norb, const std::vector<double>& dense,
                              double* max_asym = nullptr);

  std::size_t packed_size() const { return data_.size(); }

  /// Packed slot of (pq|rs); equal for all 8 symmetric permutations.
  static std::size_t slot(int p, int q, int r, int s) {
    const std::size_t pq = pair(p, q);
    const std::size_t rs = pair(r, s);
    return pq >= rs ? pq * (pq + 1) / 2 + rs : rs * (rs + 1) / 2 + pq;
  }

  static std::size_t pair(int p, int q) {
    return p >= q ? static_cast<std::size_t>(p) * (p + 1) / 2 + q
                  : static_cast<std::size_t>(q) * (q + 1) / 2 + p;
  }

 private:
  int norb_ = 0;
  std::vector<double> data_;
};

struct IntegralSet {
  int norb = 0;
  int n_elec = 0;
  double e_nuc = 0.0;
  Matrix h1;
  EriTensor eri;
  std::string label;

  /// Throws InputError when the invariants (symmetric h1, electron count
  /// even and within 0 < n <= 2L) do not hold.
  void validate() const;
};

/// Thrown for malformed FCIDUMP input; `line()` is 1-based, 0 for errors that
/// concern the file as a whole.
class ParseError : public InputError {
 public:
  ParseError(int line, const std::string& what);
  int line() const { return line_; }

 private:
  int line_;
};

IntegralSet parse_fcidump(std::istream& in, const std::string& label = {});
IntegralSet read_fcidump(const std::string& path);

/// Writes the unique entries (|value| > cutoff) at full double precision.
void write_fcidump(std::ostream& out, const IntegralSet& ints, double cutoff = 0.0);
void write_fcidump(const std::string& path, const IntegralSet& ints, double cutoff = 0.0);

/// Checked accessor for (pq|rs).
double get_eri(const IntegralSet& ints, int p, int q, int r, int s);

}  // namespace oevqe
