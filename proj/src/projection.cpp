// Copyright 2026 The OE-VQE Authors
// SPDX-License-Identifier: Apache-2.0

#include "oevqe/projection.hpp"

#include "oevqe/scf.hpp"

#include <cmath>

namespace oevqe {

const char* to_string(EnvClass c) { return c == EnvClass::Core ? "core" : "virtual"; }

void SubspaceHamiltonian::validate() const {
  if (norb <= 0) throw InputError("subspace has no orbitals");
  if (h1.rows() != norb || h1.cols() != norb) throw InputError("subspace h1 dimension mismatch");
  if (eri.norb() != norb) throw InputError("subspace eri dimension mismatch");
  if (asymmetry(h1) > 1e-10) throw InputError("subspace h1 is not symmetric");
  if (n_elec < 0 || n_elec % 2 != 0 || n_elec > 2 * norb)
    throw InputError("subspace electron count " + std::to_string(n_elec) + " is invalid");
  if (n_impurity() < 0) throw InputError("occupation pattern longer than the subspace");
  if (n_imp_occ < 0 || n_imp_occ > n_impurity()) throw InputError("impurity occupation out of range");
  int occ = 2 * n_imp_occ;
  for (EnvClass c : occ_pattern) occ += c == EnvClass::Core ? 2 : 0;
  if (occ != n_elec) throw InputError("reference occupation does not match the electron count");
}

IntegralSet SubspaceHamiltonian::to_integral_set(const std::string& label) const {
  IntegralSet out;
  out.norb = norb;
  out.n_elec = n_elec;
  out.e_nuc = e_nuc + e_core;
  out.h1 = h1;
  out.eri = eri;
  out.label = label;
  return out;
}

SubspaceHamiltonian full_space(const IntegralSet& ints) {
  ints.validate();
  SubspaceHamiltonian h;
  h.norb = ints.norb;
  h.h1 = ints.h1;
  h.eri = ints.eri;
  h.e_nuc = ints.e_nuc;
  h.n_elec = ints.n_elec;
  h.n_imp_occ = ints.n_elec / 2;
  return h;
}

Matrix core_density(const Matrix& core_remainder) { return 2.0 * core_remainder * core_remainder.transpose(); }

double core_energy(const IntegralSet& ints, const Matrix& d_core) {
  if (d_core.size() == 0 || d_core.cwiseAbs().maxCoeff() == 0.0) return 0.0;
  const Matrix f = build_fock(d_core, ints);
  return 0.5 * (ints.h1 + f).cwiseProduct(d_core).sum();
}

EriTensor transform_eri(const EriTensor& eri, const Matrix& c) {
  const int n = eri.norb();
  const int k = static_cast<int>(c.cols());
  if (c.rows() != n) throw InputError("transform_eri: coefficient rows do not match orbital count");
  const std::size_t N = n, K = k;
  std::vector<double> a = eri.to_dense();  // (p q r s)
  // Each pass contracts the last index and rotates it to the front:
  // (p q r s) -> (l p q r) -> (k l p q) -> (j k l p) -> (i j k l).
  std::vector<double> b;
  std::size_t d0 = N, d1 = N, d2 = N, d3 = N;
  for (int pass = 0; pass < 4; ++pass) {
    b.assign(K * d0 * d1 * d2, 0.0);
    for (std::size_t x = 0; x < d0; ++x)
      for (std::size_t y = 0; y < d1; ++y)
        for (std::size_t z = 0; z < d2; ++z) {
          const double* src = &a[((x * d1 + y) * d2 + z) * d3];
          for (std::size_t t = 0; t < K; ++t) {
            double acc = 0.0;
            for (std::size_t w = 0; w < d3; ++w) acc += c(static_cast<Eigen::Index>(w), static_cast<Eigen::Index>(t)) * src[w];
            b[((t * d0 + x) * d1 + y) * d2 + z] = acc;
          }
        }
    a.swap(b);
    d3 = d2;
    d2 = d1;
    d1 = d0;
    d0 = K;
  }
  return EriTensor::from_dense(k, a);
}

SubspaceHamiltonian build_subspace_hamiltonian(const IntegralSet& ints, const Matrix& c,
                                               const Matrix& core_remainder, int n_elec) {
  const int n = ints.norb;
  if (c.rows() != n) throw InputError("subspace coefficients have the wrong row count");
  if (c.cols() == 0) throw InputError("subspace is empty");
  if (core_remainder.cols() > 0 && core_remainder.rows() != n)
    throw InputError("core block has the wrong row count");

  SubspaceHamiltonian h;
  h.norb = static_cast<int>(c.cols());
  h.e_nuc = ints.e_nuc;
  h.n_elec = n_elec;
  h.n_imp_occ = 0;

  Matrix h_eff = ints.h1;
  if (core_remainder.cols() > 0) {
    const Matrix d_core = core_density(core_remainder);
    h_eff = build_fock(d_core, ints);  // h + J - K/2 of the core density
    h.e_core = 0.5 * (ints.h1 + h_eff).cwiseProduct(d_core).sum();
  }
  h.h1 = c.transpose() * h_eff * c;
  h.h1 = 0.5 * (h.h1 + h.h1.transpose());
  h.eri = transform_eri(ints.eri, c);
  return h;
}

double subspace_energy(const SubspaceHamiltonian& h, const Rdm12& rdm) {
  const int k = h.norb;
  if (rdm.norb != k || rdm.rdm1.rows() != k || rdm.rdm1.cols() != k ||
      rdm.rdm2.size() != static_cast<std::size_t>(k) * k * k * k)
    throw InputError("subspace_energy: RDM dimension mismatch");
  double e = h.h1.cwiseProduct(rdm.rdm1).sum();
  double e2 = 0.0;
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      for (int kk = 0; kk < k; ++kk)
        for (int l = 0; l < k; ++l) e2 += h.eri(i, l, j, kk) * rdm.two(i, j, kk, l);
  return e + 0.5 * e2;
}

double assemble_energy(double e_sub, double e_core, double e_nuc) { return e_sub + e_core + e_nuc; }

}  // namespace oevqe
