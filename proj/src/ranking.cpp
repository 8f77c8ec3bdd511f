// Copyright 2026 The OE-VQE Authors
// SPDX-License-Identifier: Apache-2.0

#include "oevqe/ranking.hpp"

#include "oevqe/scf.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace oevqe {

ImpuritySplit impurity_fock_split(const IntegralSet& ints, const EmbeddingBasis& basis) {
  ImpuritySplit out;
  out.n_elec = impurity_electrons(basis);
  out.fock = build_fock(basis.density, ints);
  const Matrix c_imp = basis.impurity();
  const SymmetricEigen eig = symmetric_eigen(c_imp.transpose() * out.fock * c_imp);
  const Matrix rotated = c_imp * eig.vectors;
  const int n_occ = out.n_elec / 2;
  out.occ = rotated.leftCols(n_occ);
  out.unocc = rotated.rightCols(rotated.cols() - n_occ);
  out.energies = eig.values;
  return out;
}

namespace {

struct Canonical {
  Matrix rotation;  // block eigenvectors
  Vector energies;
};

Canonical canonicalize(const Matrix& fock, const Matrix& cols) {
  Canonical out;
  if (cols.cols() == 0) {
    out.rotation = Matrix(0, 0);
    out.energies = Vector(0);
    return out;
  }
  SymmetricEigen eig = symmetric_eigen(cols.transpose() * fock * cols);
  out.rotation = std::move(eig.vectors);
  out.energies = std::move(eig.values);
  return out;
}

}  // namespace

Mp2BlockDensity mp2_block_rdm(const IntegralSet& ints, const Matrix& fock, const Matrix& occ_cols,
                              const Matrix& vir_cols) {
  const int no = static_cast<int>(occ_cols.cols());
  const int nv = static_cast<int>(vir_cols.cols());
  Mp2BlockDensity out;
  out.occ = 2.0 * Matrix::Identity(no, no);
  out.vir = Matrix::Zero(nv, nv);
  if (no == 0 || nv == 0) return out;

  const Canonical co = canonicalize(fock, occ_cols);
  const Canonical cv = canonicalize(fock, vir_cols);
  Matrix c(occ_cols.rows(), no + nv);
  c << occ_cols * co.rotation, vir_cols * cv.rotation;
  const EriTensor mo = transform_eri(ints.eri, c);

  // t(i,j,a,b) = (ia|jb) / (e_i + e_j - e_a - e_b)
  const std::size_t O = no, V = nv;
  std::vector<double> t(O * O * V * V);
  auto T = [&](int i, int j, int a, int b) -> double& { return t[((i * O + j) * V + a) * V + b]; };
  double e_corr = 0.0;
  for (int i = 0; i < no; ++i)
    for (int j = 0; j < no; ++j)
      for (int a = 0; a < nv; ++a)
        for (int b = 0; b < nv; ++b) {
          const double denom = co.energies(i) + co.energies(j) - cv.energies(a) - cv.energies(b);
          if (std::abs(denom) < 1e-10) {
            std::ostringstream msg;
            msg << "vanishing MP2 denominator for quartet (i=" << i << ", j=" << j << ", a=" << a
                << ", b=" << b << ")";
            throw NumericalError(msg.str());
          }
          const double iajb = mo(i, no + a, j, no + b);
          T(i, j, a, b) = iajb / denom;
          e_corr += T(i, j, a, b) * (2.0 * iajb - mo(i, no + b, j, no + a));
        }
  out.correlation_energy = e_corr;

  Matrix d_occ = Matrix::Zero(no, no);
  for (int i = 0; i < no; ++i)
    for (int j = 0; j < no; ++j) {
      double acc = 0.0;
      for (int k = 0; k < no; ++k)
        for (int a = 0; a < nv; ++a)
          for (int b = 0; b < nv; ++b) acc += T(i, k, a, b) * (2.0 * T(j, k, a, b) - T(j, k, b, a));
      d_occ(i, j) = -2.0 * acc;
    }
  Matrix d_vir = Matrix::Zero(nv, nv);
  for (int a = 0; a < nv; ++a)
    for (int b = 0; b < nv; ++b) {
      double acc = 0.0;
      for (int i = 0; i < no; ++i)
        for (int j = 0; j < no; ++j)
          for (int cc = 0; cc < nv; ++cc) acc += T(i, j, a, cc) * (2.0 * T(i, j, b, cc) - T(i, j, cc, b));
      d_vir(a, b) = 2.0 * acc;
    }
  d_occ = 0.5 * (d_occ + d_occ.transpose());
  d_vir = 0.5 * (d_vir + d_vir.transpose());
  // back to the basis of the input columns
  out.occ += co.rotation * d_occ * co.rotation.transpose();
  out.vir = cv.rotation * d_vir * cv.rotation.transpose();
  return out;
}

RankedBasis rank_environment(const IntegralSet& ints, const EmbeddingBasis& basis) {
  const ImpuritySplit split = impurity_fock_split(ints, basis);
  const int n = basis.norb();

  RankedBasis out;
  out.n_frag = basis.n_frag();
  out.n_bath = basis.n_bath();
  out.n_imp_occ = static_cast<int>(split.occ.cols());
  out.n_elec = static_cast<int>(std::lround(basis.density.trace()));
  out.imp_energies = split.energies;

  const SymmetricEigen fock_eig = symmetric_eigen(split.fock);
  const int nocc = out.n_elec / 2;
  double fermi = fock_eig.values(std::max(0, nocc - 1));
  if (nocc > 0 && nocc < n) fermi = 0.5 * (fock_eig.values(nocc - 1) + fock_eig.values(nocc));

  struct Candidate {
    double score;
    EnvClass cls;
    double energy;
    Vector col;
  };
  std::vector<Candidate> cands;

  if (basis.n_vir() > 0) {
    const Mp2BlockDensity d = mp2_block_rdm(ints, split.fock, split.occ, basis.u_vir);
    const SymmetricEigen e = symmetric_eigen(d.vir);
    const Matrix cols = basis.u_vir * e.vectors;
    for (Eigen::Index j = 0; j < cols.cols(); ++j) {
      const double lambda = std::clamp(e.values(j), 0.0, 2.0);
      cands.push_back({lambda, EnvClass::Virtual, cols.col(j).dot(split.fock * cols.col(j)), cols.col(j)});
    }
  }
  if (basis.n_core() > 0) {
    const Mp2BlockDensity d = mp2_block_rdm(ints, split.fock, basis.u_core, split.unocc);
    const SymmetricEigen e = symmetric_eigen(d.occ);
    const Matrix cols = basis.u_core * e.vectors;
    for (Eigen::Index j = 0; j < cols.cols(); ++j) {
      const double loss = std::clamp(2.0 - e.values(j), 0.0, 2.0);
      cands.push_back({loss, EnvClass::Core, cols.col(j).dot(split.fock * cols.col(j)), cols.col(j)});
    }
  }
  std::stable_sort(cands.begin(), cands.end(), [&](const Candidate& a, const Candidate& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.cls != b.cls) return a.cls == EnvClass::Virtual;
    return std::abs(a.energy - fermi) < std::abs(b.energy - fermi);
  });

  out.u_full.resize(n, n);
  out.u_full.leftCols(split.occ.cols()) = split.occ;
  out.u_full.middleCols(split.occ.cols(), split.unocc.cols()) = split.unocc;
  out.delta_lambda.resize(static_cast<Eigen::Index>(cands.size()));
  out.env_energy.resize(static_cast<Eigen::Index>(cands.size()));
  const int n_imp = basis.n_imp();
  for (std::size_t j = 0; j < cands.size(); ++j) {
    out.u_full.col(n_imp + static_cast<Eigen::Index>(j)) = cands[j].col;
    out.delta_lambda(static_cast<Eigen::Index>(j)) = cands[j].score;
    out.env_energy(static_cast<Eigen::Index>(j)) = cands[j].energy;
    out.env_class.push_back(cands[j].cls);
  }
  return out;
}

StageProjector stage_projector(const RankedBasis& ranked, int n_s) {
  const int n_env = ranked.n_env();
  if (n_s < 0 || n_s > n_env) {
    throw InputError("stage index " + std::to_string(n_s) + " outside [0, " + std::to_string(n_env) + "]");
  }
  StageProjector out;
  const int n_imp = ranked.n_imp();
  out.c = ranked.u_full.leftCols(n_imp + n_s);
  std::vector<Eigen::Index> rest;
  out.n_elec = 2 * ranked.n_imp_occ;
  for (int j = 0; j < n_env; ++j) {
    const EnvClass cls = ranked.env_class[j];
    if (j < n_s) {
      out.appended.push_back(cls);
      if (cls == EnvClass::Core) out.n_elec += 2;
    } else if (cls == EnvClass::Core) {
      rest.push_back(n_imp + j);
    }
  }
  out.core_remainder.resize(ranked.norb(), static_cast<Eigen::Index>(rest.size()));
  for (std::size_t j = 0; j < rest.size(); ++j) out.core_remainder.col(static_cast<Eigen::Index>(j)) = ranked.u_full.col(rest[j]);
  return out;
}

SubspaceHamiltonian stage_hamiltonian(const IntegralSet& ints, const RankedBasis& ranked, int n_s) {
  const StageProjector p = stage_projector(ranked, n_s);
  SubspaceHamiltonian h = build_subspace_hamiltonian(ints, p.c, p.core_remainder, p.n_elec);
  h.n_imp_occ = ranked.n_imp_occ;
  h.occ_pattern = p.appended;
  h.validate();
  return h;
}

}  // namespace oevqe
