// Copyright 2026 The OE-VQE Authors
// SPDX-License-Identifier: Apache-2.0

#include "oevqe/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>

namespace oevqe {

void FragmentSpec::validate(int norb) const {
  if (indices.empty()) throw InputError("fragment is empty");
  if (static_cast<int>(indices.size()) > norb) throw InputError("fragment larger than the orbital set");
  std::set<int> seen;
  for (int i : indices) {
    if (i < 0 || i >= norb) throw InputError("fragment index " + std::to_string(i) + " out of range");
    if (!seen.insert(i).second) throw InputError("duplicate fragment index " + std::to_string(i));
  }
}

DensityPartition partition_density(const Matrix& density, const FragmentSpec& frag) {
  const int n = static_cast<int>(density.rows());
  if (density.cols() != n) throw InputError("partition_density: density is not square");
  frag.validate(n);
  std::vector<bool> in_frag(n, false);
  for (int i : frag.indices) in_frag[i] = true;

  DensityPartition out;
  for (int i = 0; i < n; ++i)
    if (!in_frag[i]) out.env_index_map.push_back(i);
  const auto& a = frag.indices;
  const auto& b = out.env_index_map;
  const int na = static_cast<int>(a.size()), nb = static_cast<int>(b.size());
  out.fragment.resize(na, na);
  out.inter.resize(na, nb);
  out.environment.resize(nb, nb);
  for (int i = 0; i < na; ++i) {
    for (int j = 0; j < na; ++j) out.fragment(i, j) = density(a[i], a[j]);
    for (int j = 0; j < nb; ++j) out.inter(i, j) = density(a[i], b[j]);
  }
  for (int i = 0; i < nb; ++i)
    for (int j = 0; j < nb; ++j) out.environment(i, j) = density(b[i], b[j]);
  return out;
}

Matrix EmbeddingBasis::impurity() const {
  Matrix m(norb(), n_imp());
  m << u_frag, u_bath;
  return m;
}

Matrix EmbeddingBasis::full() const {
  Matrix m(norb(), norb());
  m << u_frag, u_bath, u_core, u_vir;
  return m;
}

namespace {

struct EnvColumn {
  double occupation;
  double coupling;
  int dominant;
  Vector lo;  // expressed over all L orbitals
};

Matrix stack(const std::vector<EnvColumn>& cols, int n, Vector* occ) {
  Matrix m(n, static_cast<Eigen::Index>(cols.size()));
  occ->resize(static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) {
    m.col(static_cast<Eigen::Index>(j)) = cols[j].lo;
    (*occ)(static_cast<Eigen::Index>(j)) = cols[j].occupation;
  }
  return m;
}

}  // namespace

EmbeddingBasis build_bath(const Matrix& density, const FragmentSpec& frag, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw InputError("bath threshold delta must lie in (0, 1)");
  const int n = static_cast<int>(density.rows());
  const DensityPartition part = partition_density(density, frag);
  const int na = static_cast<int>(frag.indices.size());

  EmbeddingBasis out;
  out.delta = delta;
  out.density = density;
  out.fragment = frag;
  out.u_frag = Matrix::Zero(n, na);
  for (int i = 0; i < na; ++i) out.u_frag(frag.indices[i], i) = 1.0;

  std::vector<EnvColumn> bath, core, vir;
  if (!part.env_index_map.empty()) {
    const SymmetricEigen eig = symmetric_eigen(part.environment);
    for (Eigen::Index j = 0; j < eig.values.size(); ++j) {
      EnvColumn c;
      c.occupation = eig.values(j);
      c.coupling = (part.inter * eig.vectors.col(j)).norm();
      c.lo = Vector::Zero(n);
      for (std::size_t r = 0; r < part.env_index_map.size(); ++r)
        c.lo(part.env_index_map[r]) = eig.vectors(static_cast<Eigen::Index>(r), j);
      c.lo.cwiseAbs().maxCoeff(&c.dominant);
      if (c.occupation >= 2.0 - delta) {
        core.push_back(std::move(c));
      } else if (c.occupation <= delta) {
        vir.push_back(std::move(c));
      } else {
        bath.push_back(std::move(c));
      }
    }
  }
  auto order = [](const EnvColumn& x, const EnvColumn& y) {
    if (x.occupation != y.occupation) return x.occupation > y.occupation;
    if (x.coupling != y.coupling) return x.coupling > y.coupling;
    return x.dominant < y.dominant;
  };
  for (auto* v : {&bath, &core, &vir}) std::stable_sort(v->begin(), v->end(), order);

  out.u_bath = stack(bath, n, &out.occ_bath);
  out.u_core = stack(core, n, &out.occ_core);
  out.u_vir = stack(vir, n, &out.occ_vir);
  out.occ_env.resize(out.occ_bath.size() + out.occ_core.size() + out.occ_vir.size());
  out.occ_env << out.occ_bath, out.occ_core, out.occ_vir;
  return out;
}

int impurity_electrons(const EmbeddingBasis& basis) {
  const Matrix c = basis.impurity();
  const double n = (c.transpose() * basis.density * c).trace();
  const double rounded = 2.0 * std::round(n / 2.0);
  if (std::abs(n - rounded) > 1e-6)
    throw NumericalError("impurity electron count " + std::to_string(n) + " is not an even integer");
  return static_cast<int>(rounded);
}

SubspaceHamiltonian impurity_hamiltonian(const IntegralSet& ints, const EmbeddingBasis& basis) {
  const int n_elec = impurity_electrons(basis);
  SubspaceHamiltonian h = build_subspace_hamiltonian(ints, basis.impurity(), basis.u_core, n_elec);
  h.n_imp_occ = n_elec / 2;
  return h;
}

}  // namespace oevqe
