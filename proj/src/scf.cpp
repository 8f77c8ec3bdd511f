// Copyright 2026 The OE-VQE Authors
// SPDX-License-Identifier: Apache-2.0

#include "oevqe/scf.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace oevqe {

Matrix build_fock(const Matrix& density, const IntegralSet& ints) {
  const int n = ints.norb;
  if (density.rows() != n || density.cols() != n) throw InputError("build_fock: density dimension mismatch");
  Matrix f = ints.h1;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) {
      double g = 0.0;
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const double d = density(k, l);
          if (d == 0.0) continue;
          g += d * (ints.eri(i, j, k, l) - 0.5 * ints.eri(i, k, j, l));
        }
      f(i, j) += g;
      if (i != j) f(j, i) += g;
    }
  return f;
}

double rhf_energy(const Matrix& density, const IntegralSet& ints) {
  const Matrix f = build_fock(density, ints);
  return 0.5 * (ints.h1 + f).cwiseProduct(density).sum() + ints.e_nuc;
}

namespace {

Matrix aufbau_density(const Matrix& c, int nocc) {
  const auto occ = c.leftCols(nocc);
  return 2.0 * occ * occ.transpose();
}

}  // namespace

RhfSolution run_rhf(const IntegralSet& ints, const ScfOptions& opts) {
  ints.validate();
  const int nocc = ints.n_elec / 2;
  const int n = ints.norb;
  RhfSolution sol;

  auto check_gap = [&](const Vector& eps) {
    if (nocc < n && eps(nocc) - eps(nocc - 1) < opts.degeneracy_tol) {
      std::ostringstream msg;
      msg << "degenerate HOMO/LUMO (" << eps(nocc - 1) << ", " << eps(nocc) << ")";
      throw NumericalError(msg.str());
    }
  };

  SymmetricEigen guess = symmetric_eigen(ints.h1);
  Matrix d = aufbau_density(guess.vectors, nocc);
  double e_prev = rhf_energy(d, ints);
  double residual = 0.0;
  for (int it = 1; it <= opts.max_iter; ++it) {
    const Matrix f = build_fock(d, ints);
    const double e = 0.5 * (ints.h1 + f).cwiseProduct(d).sum() + ints.e_nuc;
    sol.energy_history.push_back(e);
    residual = (f * d - d * f).cwiseAbs().maxCoeff();
    if (it > 1 && residual <= opts.conv_tol && std::abs(e - e_prev) <= opts.conv_tol) {
      SymmetricEigen eig = symmetric_eigen(f);
      check_gap(eig.values);
      sol.coefficients = eig.vectors;
      sol.orbital_energies = eig.values;
      sol.density = aufbau_density(eig.vectors, nocc);
      sol.fock = build_fock(sol.density, ints);
      sol.energy = rhf_energy(sol.density, ints);
      sol.iterations = it;
      return sol;
    }
    e_prev = e;
    SymmetricEigen eig = symmetric_eigen(f);
    check_gap(eig.values);
    const Matrix step = aufbau_density(eig.vectors, nocc) - d;
    // E(d + t step) is quadratic in t. If the default weight would raise the
    // energy, take the exact line minimum instead.
    const double slope = f.cwiseProduct(step).sum();
    const double curv = rhf_energy(d + step, ints) - e - slope;
    double t = opts.mixing;
    if (slope * t + curv * t * t > 1e-10 && curv > 0.0) t = std::max(0.0, -slope / (2.0 * curv));
    d = d + t * step;
  }
  std::ostringstream msg;
  msg << "RHF did not converge in " << opts.max_iter << " iterations (residual " << residual << ")";
  throw NumericalError(msg.str());
}

}  // namespace oevqe
