// Copyright 2026 The OE-VQE Authors
// SPDX-License-Identifier: Apache-2.0

#include "oevqe/ranking.hpp"
#include "oevqe/scf.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <algorithm>

using namespace oevqe;

namespace {

EmbeddingBasis bath_for(const IntegralSet& ints, std::vector<int> f) {
  return build_bath(run_rhf(ints).density, FragmentSpec{std::move(f)});
}

// Same molecule with orbital labels permuted: new index i holds old orbital perm[i].
IntegralSet relabel(const IntegralSet& ints, const std::vector<int>& perm) {
  IntegralSet out = ints;
  const int n = ints.norb;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.h1(i, j) = ints.h1(perm[i], perm[j]);
  out.eri = EriTensor(n);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s) out.eri.at(p, q, r, s) = ints.eri(perm[p], perm[q], perm[r], perm[s]);
  return out;
}

}  // namespace

TEST(FockSplit, H2TwoByTwoOracle) {
  const auto ints = fx::load("h2_0.74");
  const auto basis = bath_for(ints, {0});
  const auto split = impurity_fock_split(ints, basis);
  EXPECT_EQ(split.n_elec, 2);
  ASSERT_EQ(split.occ.cols(), 1);
  const Matrix imp = basis.impurity();
  const Matrix f_imp = imp.transpose() * split.fock * imp;
  const double a = f_imp(0, 0), b = f_imp(0, 1), d = f_imp(1, 1);
  const double lo = 0.5 * (a + d) - std::sqrt(0.25 * (a - d) * (a - d) + b * b);
  EXPECT_NEAR(split.energies(0), lo, 1e-12);
  const Vector v = imp.transpose() * split.occ.col(0);
  EXPECT_NEAR((f_imp * v - lo * v).norm(), 0.0, 1e-10);
}

TEST(FockSplit, WholeSystemReproducesRhf) {
  const auto ints = fx::load("h4_1.00");
  const auto sol = run_rhf(ints);
  const auto split = impurity_fock_split(ints, build_bath(sol.density, FragmentSpec{{0, 1, 2, 3}}));
  EXPECT_LE((split.energies - sol.orbital_energies).cwiseAbs().maxCoeff(), 1e-8);
  const Matrix occ_proj = split.occ * split.occ.transpose();
  EXPECT_LE((2.0 * occ_proj - sol.density).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(FockSplit, Deterministic) {
  const auto ints = fx::load("h6_2.00");
  const auto a = impurity_fock_split(ints, bath_for(ints, {2, 3}));
  const auto b = impurity_fock_split(ints, bath_for(ints, {2, 3}));
  EXPECT_EQ(a.occ, b.occ);
  EXPECT_EQ(a.unocc, b.unocc);
}

TEST(Mp2Block, NoVirtuals) {
  const auto ints = fx::load("h2_0.74");
  const Matrix f = run_rhf(ints).fock;
  const auto r = mp2_block_rdm(ints, f, Matrix::Identity(2, 2), Matrix(2, 0));
  EXPECT_EQ(r.occ, 2.0 * Matrix::Identity(2, 2));
  EXPECT_EQ(r.vir.size(), 0);
}

TEST(Mp2Block, SingleAmplitudeHandEvaluation) {
  IntegralSet ints;
  ints.norb = 2;
  ints.n_elec = 2;
  ints.h1 = Matrix::Zero(2, 2);
  ints.eri = EriTensor(2);
  const double x = 0.13, eo = -0.6, ev = 0.4;
  ints.eri.at(0, 1, 0, 1) = x;
  Matrix fock = Matrix::Zero(2, 2);
  fock(0, 0) = eo;
  fock(1, 1) = ev;
  const auto r = mp2_block_rdm(ints, fock, Matrix::Identity(2, 2).col(0), Matrix::Identity(2, 2).col(1));
  const double t = x / (2 * eo - 2 * ev);
  EXPECT_NEAR(r.vir(0, 0), 2 * t * t, 1e-15);
  EXPECT_NEAR(r.occ(0, 0), 2 - 2 * t * t, 1e-15);
  EXPECT_NEAR(r.correlation_energy, t * x, 1e-15);
}

TEST(Mp2Block, VanishingDenominator) {
  IntegralSet ints;
  ints.norb = 2;
  ints.n_elec = 2;
  ints.h1 = Matrix::Zero(2, 2);
  ints.eri = EriTensor(2);
  const Matrix fock = Matrix::Zero(2, 2);
  try {
    mp2_block_rdm(ints, fock, Matrix::Identity(2, 2).col(0), Matrix::Identity(2, 2).col(1));
    FAIL();
  } catch (const NumericalError& e) {
    EXPECT_NE(std::string(e.what()).find("quartet"), std::string::npos);
  }
}

TEST(Mp2Block, ParticleConservation) {
  const auto ints = fx::load("h4_1.00");
  const auto basis = bath_for(ints, {0, 1});
  const auto split = impurity_fock_split(ints, basis);
  const auto r = mp2_block_rdm(ints, split.fock, split.occ, split.unocc);
  const double n_o = static_cast<double>(split.occ.cols());
  EXPECT_NEAR(r.vir.trace(), -(r.occ.trace() - 2 * n_o), 1e-10);
  EXPECT_GE(symmetric_eigen(r.vir).values.minCoeff(), -1e-12);
  EXPECT_LE(symmetric_eigen(r.occ).values.maxCoeff(), 2 + 1e-12);
}

TEST(Rank, EmptyEnvironment) {
  const auto ints = fx::load("h4_1.00");
  const auto basis = bath_for(ints, {0, 1, 2, 3});
  const auto r = rank_environment(ints, basis);
  EXPECT_EQ(r.delta_lambda.size(), 0);
  EXPECT_EQ(r.n_env(), 0);
  EXPECT_EQ(r.u_full.cols(), 4);
  EXPECT_LE(orthonormality_error(r.u_full), 1e-10);
}

TEST(Rank, H4TwoEnvironmentOrbitals) {
  const auto ints = fx::load("h4_1.00");
  // A two-orbital fragment binds two bath orbitals and leaves no environment.
  EXPECT_EQ(rank_environment(ints, bath_for(ints, {0, 1})).n_env(), 0);
  const auto r = rank_environment(ints, bath_for(ints, {0}));
  ASSERT_EQ(r.delta_lambda.size(), 2);
  EXPECT_GE(r.delta_lambda(1), 0.0);
  EXPECT_GE(r.delta_lambda(0), r.delta_lambda(1));
}

TEST(Rank, H6CentralBondStrictOrder) {
  const auto ints = fx::load("h6_1.00");
  const auto r = rank_environment(ints, bath_for(ints, {2, 3}));
  ASSERT_GE(r.n_env(), 2);
  EXPECT_GT(r.delta_lambda(0), r.delta_lambda(r.n_env() - 1));
}

TEST(Rank, Invariants) {
  for (const char* stem : {"h4_2.00", "h6_1.00", "h6_2.40"}) {
    const auto ints = fx::load(stem);
    for (std::vector<int> f : {std::vector<int>{0}, std::vector<int>{2, 3}, std::vector<int>{0, 3}}) {
      const auto basis = bath_for(ints, f);
      const auto r = rank_environment(ints, basis);
      SCOPED_TRACE(stem);
      EXPECT_LE(orthonormality_error(r.u_full), 1e-10);
      EXPECT_EQ(r.n_env(), ints.norb - basis.n_imp());
      EXPECT_EQ(r.delta_lambda.size(), r.n_env());
      for (int i = 0; i < r.n_env(); ++i) {
        EXPECT_GE(r.delta_lambda(i), 0.0);
        EXPECT_LE(r.delta_lambda(i), 2.0);
        if (i) EXPECT_GE(r.delta_lambda(i - 1), r.delta_lambda(i));
      }
      const long n_core = std::count(r.env_class.begin(), r.env_class.end(), EnvClass::Core);
      EXPECT_EQ(n_core, basis.n_core());
    }
  }
}

TEST(Rank, RelabelingKeepsScores) {
  const auto ints = fx::load("h6_1.50");
  const std::vector<int> perm{3, 5, 0, 2, 4, 1};  // new i <- old perm[i]
  std::vector<int> inv(6);
  for (int i = 0; i < 6; ++i) inv[perm[i]] = i;
  const auto a = rank_environment(ints, bath_for(ints, {1, 2}));
  const auto moved = relabel(ints, perm);
  const auto b = rank_environment(moved, bath_for(moved, {inv[1], inv[2]}));
  ASSERT_EQ(a.delta_lambda.size(), b.delta_lambda.size());
  for (int i = 0; i < a.delta_lambda.size(); ++i) EXPECT_NEAR(a.delta_lambda(i), b.delta_lambda(i), 1e-8);
}

TEST(StageProjector, FullAndEmptyExpansion) {
  const auto ints = fx::load("h6_1.00");
  const auto basis = bath_for(ints, {2, 3});
  const auto r = rank_environment(ints, basis);
  const int n = r.n_env();
  const auto full = stage_projector(r, n);
  EXPECT_EQ(full.c.cols(), 6);
  EXPECT_EQ(full.core_remainder.cols(), 0);
  EXPECT_LE(orthonormality_error(full.c), 1e-10);
  EXPECT_EQ(full.n_elec, ints.n_elec);

  const auto zero = stage_projector(r, 0);
  const Matrix imp = basis.impurity();
  EXPECT_LE((zero.c * zero.c.transpose() - imp * imp.transpose()).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_THROW(stage_projector(r, n + 1), InputError);
  EXPECT_THROW(stage_projector(r, -1), InputError);
}

TEST(StageProjector, H6FirstStageBookkeeping) {
  const auto ints = fx::load("h6_1.00");
  const auto basis = bath_for(ints, {2, 3});
  const auto r = rank_environment(ints, basis);
  const auto p = stage_projector(r, 1);
  EXPECT_EQ(p.c.cols(), basis.n_imp() + 1);
  if (basis.n_bath() == 2) EXPECT_EQ(p.c.cols(), 5);
  long expect_core = 0;
  for (int i = 1; i < r.n_env(); ++i) expect_core += r.env_class[i] == EnvClass::Core;
  EXPECT_EQ(p.core_remainder.cols(), expect_core);
  Matrix frame(6, p.c.cols() + p.core_remainder.cols());
  frame << p.c, p.core_remainder;
  EXPECT_LE(orthonormality_error(frame), 1e-10);
}
