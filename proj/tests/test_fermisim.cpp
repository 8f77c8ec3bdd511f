// Copyright 2026 The OE-VQE Authors
// SPDX-License-Identifier: Apache-2.0

#include "oevqe/fermisim.hpp"
#include "oevqe/oracle.hpp"
#include "oevqe/ranking.hpp"
#include "oevqe/scf.hpp"
#include "oevqe/solver.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <numbers>

using namespace oevqe;

namespace {

ExcitationOp encode(std::vector<int> idx, int n) { return jw_encode(idx, n); }

// Random correlated state in the sector of `ref`.
Statevector scramble(const Statevector& ref, int norb, std::mt19937_64& rng, int steps = 12) {
  const auto pool = build_pool(norb);
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  std::uniform_real_distribution<double> angle(-1.0, 1.0);
  Statevector psi = ref;
  for (int i = 0; i < steps; ++i) apply_excitation_inplace(psi, pool[pick(rng)], angle(rng));
  return psi;
}

double max_diff(const Statevector& a, const Statevector& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST(Reference, Examples) {
  const auto one = reference_state(1, 1, {});
  EXPECT_EQ(one.n_qubits(), 2);
  EXPECT_EQ(one[0b11], Amplitude(1.0));

  const std::vector<EnvClass> vir{EnvClass::Virtual};
  const auto two = reference_state(2, 1, vir);
  EXPECT_EQ(two[0b0011], Amplitude(1.0));
  EXPECT_NEAR(two.norm(), 1.0, 1e-15);

  const std::vector<EnvClass> core{EnvClass::Core};
  const auto c = reference_state(2, 0, core);
  EXPECT_EQ(c[0b1100], Amplitude(1.0));
  EXPECT_THROW(reference_state(1, 2, {}), InputError);
}

TEST(Reference, StageStatesCarryTheSubspaceElectrons) {
  const auto ints = fx::load("h6_1.00");
  const auto r = rank_environment(ints, build_bath(run_rhf(ints).density, FragmentSpec{{0}}));
  for (int n_s = 0; n_s <= r.n_env(); ++n_s) {
    const auto h = stage_hamiltonian(ints, r, n_s);
    EXPECT_EQ(number_expectation(reference_state(h)), h.n_elec);
  }
}

TEST(JordanWigner, SingleZeroToTwo) {
  const auto op = encode({0, 2}, 4);
  EXPECT_EQ(op.kind, ExcitationKind::Single);
  ASSERT_EQ(op.pauli_terms.size(), 2u);
  for (const auto& t : op.pauli_terms) {
    EXPECT_EQ(t.coeff.real(), 0.0);
    EXPECT_NE(t.coeff.imag(), 0.0);
    EXPECT_EQ(t.x_mask, 0b0101u);
    EXPECT_EQ(t.z_mask & 0b0010u, 0b0010u);
  }
  const Eigen::MatrixXcd g = dense_generator(op, 4);
  EXPECT_LE(g.imag().cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LE((g.real() + g.real().transpose()).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_NEAR(std::abs(g(0b0100, 0b0001)), 1.0, 1e-15);
}

TEST(JordanWigner, DoublesHaveEightTerms) {
  const auto op = encode({2, 3, 0, 1}, 4);
  EXPECT_EQ(op.kind, ExcitationKind::Double);
  EXPECT_EQ(op.pauli_terms.size(), 8u);
  for (const auto& t : op.pauli_terms) EXPECT_EQ(t.coeff.real(), 0.0);
}

TEST(JordanWigner, Errors) {
  EXPECT_THROW(encode({0, 0}, 4), InputError);
  EXPECT_THROW(encode({2, 2, 0, 1}, 4), InputError);
  EXPECT_THROW(encode({0, 4}, 4), InputError);
  EXPECT_THROW(encode({0, 1}, 4), InputError);        // alpha to beta
  EXPECT_THROW(encode({2, 4, 0, 1}, 6), InputError);  // S_z changes
  EXPECT_THROW(encode({0, 1, 2}, 6), InputError);
}

TEST(JordanWigner, PoolOperatorsAreWellFormed) {
  for (const auto& op : build_pool(4)) {
    EXPECT_TRUE(op.is_canonical()) << op.label();
    EXPECT_TRUE(op.pauli_terms.size() == 2 || op.pauli_terms.size() == 8);
    for (const auto& t : op.pauli_terms) EXPECT_EQ(t.coeff.real(), 0.0);
  }
}

TEST(Excitation, ZeroAngleIsBitExact) {
  std::mt19937_64 rng(1);
  const auto psi = scramble(reference_state(4, 2, {}), 4, rng);
  const auto op = encode({4, 6, 0, 2}, 8);
  const auto out = apply_excitation(psi, op, 0.0);
  for (std::size_t i = 0; i < psi.size(); ++i) EXPECT_EQ(out[i], psi[i]);
}

TEST(Excitation, QuarterTurnTransfersPopulation) {
  const auto psi = Statevector::basis_state(4, 0b0001);
  const auto op = encode({0, 2}, 4);
  const auto out = apply_excitation(psi, op, std::numbers::pi / 2);
  EXPECT_NEAR(std::abs(out[0b0100]), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(out[0b0001]), 0.0, 1e-15);
  EXPECT_LE(max_diff(out, dense_exponential(psi, op, std::numbers::pi / 2)), 1e-12);
}

TEST(Excitation, MatchesDenseExponential) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> angle(-3.0, 3.0);
  for (int norb : {2, 3, 4}) {
    const auto pool = build_pool(norb);
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    for (int trial = 0; trial < 20; ++trial) {
      const auto psi = scramble(reference_state(norb, 1, {}), norb, rng, 6);
      const auto& op = pool[pick(rng)];
      const double th = angle(rng);
      ASSERT_LE(max_diff(apply_excitation(psi, op, th), dense_exponential(psi, op, th)), 1e-10) << op.label();
    }
  }
}

TEST(Excitation, GeneratorMatchesPauliImage) {
  std::mt19937_64 rng(9);
  const auto psi = scramble(reference_state(3, 1, {}), 3, rng);
  for (const auto& op : build_pool(3)) {
    const Eigen::MatrixXcd g = dense_generator(op, 6);
    Eigen::VectorXcd v(psi.size());
    for (std::size_t i = 0; i < psi.size(); ++i) v(i) = psi[i];
    const Eigen::VectorXcd gv = g * v;
    const auto mine = apply_generator(psi, op);
    for (std::size_t i = 0; i < psi.size(); ++i) ASSERT_LE(std::abs(mine[i] - gv(i)), 1e-13);
  }
}

TEST(Excitation, ConservesNormNumberAndSpin) {
  std::mt19937_64 rng(3);
  const auto pool = build_pool(4);
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  std::uniform_real_distribution<double> angle(-3.0, 3.0);
  Statevector psi = reference_state(4, 2, {});
  for (int i = 0; i < 1000; ++i) {
    apply_excitation_inplace(psi, pool[pick(rng)], angle(rng));
    ASSERT_NEAR(psi.norm(), 1.0, 1e-12);
  }
  EXPECT_NEAR(number_expectation(psi), 4.0, 1e-10);
  EXPECT_NEAR(sz_expectation(psi), 0.0, 1e-10);
}

TEST(Excitation, RegisterTooSmall) {
  auto psi = reference_state(2, 1, {});
  EXPECT_THROW(apply_excitation_inplace(psi, encode({0, 6}, 8), 0.1), InputError);
}

TEST(Expectation, H2ReferenceIsHartreeFock) {
  for (const char* name : {"h2_0.74", "h4_1.00", "h6_2.00"}) {
    const auto ints = fx::load(name);
    const auto sol = run_rhf(ints);
    auto h = build_subspace_hamiltonian(ints, sol.coefficients, Matrix(ints.norb, 0), ints.n_elec);
    h.n_imp_occ = ints.n_elec / 2;
    EXPECT_NEAR(expectation(reference_state(h), h) + h.e_core + h.e_nuc, sol.energy, 1e-9) << name;
  }
}

TEST(Expectation, FciEigenvector) {
  const auto h = full_space(fx::load("h4_2.00"));
  const auto fci = fci_ground_state(h);
  EXPECT_NEAR(expectation(fci.state, h), fci.electronic, 1e-10);
}

TEST(Expectation, ZeroIntegralsAndMismatch) {
  auto h = full_space(fx::load("h2_0.74"));
  h.h1.setZero();
  h.eri = EriTensor(2);
  std::mt19937_64 rng(2);
  EXPECT_EQ(expectation(scramble(reference_state(h), 2, rng), h), 0.0);
  EXPECT_THROW(expectation(reference_state(3, 1, {}), h), InputError);
}

TEST(PoolGradient, VanishesOutsideSupport) {
  const auto h = full_space(fx::load("h4_1.00"));
  // occupied -> occupied moves annihilate the reference both ways
  EXPECT_EQ(pool_gradient(reference_state(h), h, encode({0, 2}, 8)), 0.0);
  EXPECT_EQ(pool_gradient(reference_state(h), h, encode({6, 7, 4, 5}, 8)), 0.0);
}

TEST(PoolGradient, FiniteDifferences) {
  std::mt19937_64 rng(17);
  const auto ints = fx::load("h4_1.00");
  const auto h = full_space(ints);
  const auto pool = build_pool(4);
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  for (int trial = 0; trial < 50; ++trial) {
    const auto psi = scramble(reference_state(h), 4, rng, 5);
    const auto& op = pool[pick(rng)];
    const double eps = 1e-5;
    const double fd = (expectation(apply_excitation(psi, op, eps), h) - expectation(apply_excitation(psi, op, -eps), h)) /
                      (2 * eps);
    ASSERT_NEAR(pool_gradient(psi, h, op), fd, 1e-7) << op.label();
  }
}

TEST(PoolGradient, H2DoubleLowersEnergy) {
  const auto h = full_space(fx::load("h2_0.74"));
  const auto psi = reference_state(h);
  const auto op = encode({2, 3, 0, 1}, 4);
  const double g = pool_gradient(psi, h, op);
  EXPECT_GT(std::abs(g), 1e-3);
  const double step = -0.05 * (g > 0 ? 1 : -1);
  EXPECT_LT(expectation(apply_excitation(psi, op, step), h), expectation(psi, h));
}

TEST(EnergyGradient, EmptyDirection) {
  const auto h = full_space(fx::load("h2_0.74"));
  EXPECT_TRUE(energy_gradient(Direction{}, reference_state(h), h).empty());
}

TEST(EnergyGradient, SingleParameter) {
  const auto h = full_space(fx::load("h2_0.74"));
  const auto op = encode({2, 3, 0, 1}, 4);
  Direction d;
  d.records.push_back({op, 0.0, 0});
  const auto psi0 = reference_state(h);
  EXPECT_NEAR(energy_gradient(d, psi0, h)[0], pool_gradient(psi0, h, op), 1e-14);
  d.records[0].theta = 0.37;
  const double eps = 1e-5;
  const double fd = (expectation(apply_excitation(psi0, op, 0.37 + eps), h) -
                     expectation(apply_excitation(psi0, op, 0.37 - eps), h)) / (2 * eps);
  EXPECT_NEAR(energy_gradient(d, psi0, h)[0], fd, 1e-7);
  EXPECT_NEAR(energy_gradient(d, psi0, h)[0], pool_gradient(apply_excitation(psi0, op, 0.37), h, op), 1e-12);
}

TEST(EnergyGradient, TwentyParametersMatchFiniteDifferences) {
  const auto h = full_space(fx::load("h4_1.00"));
  const auto pool = build_pool(4);
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  std::uniform_real_distribution<double> angle(-0.5, 0.5);
  Direction d;
  for (int i = 0; i < 20; ++i) d.records.push_back({pool[pick(rng)], angle(rng), 0});
  const auto psi0 = reference_state(h);
  const auto g = energy_gradient(d, psi0, h);
  const double eps = 1e-5;
  for (int i = 0; i < 20; ++i) {
    Direction plus = d, minus = d;
    plus.records[i].theta += eps;
    minus.records[i].theta -= eps;
    const double fd = (expectation(prepare_state(plus, psi0), h) - expectation(prepare_state(minus, psi0), h)) / (2 * eps);
    EXPECT_LT(std::abs(g[i] - fd), 1e-6);
  }
}

TEST(Rdm, TraceAndReference) {
  const auto h = full_space(fx::load("h4_2.00"));
  const auto ref = rdm12(reference_state(h), 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) EXPECT_NEAR(ref.rdm1(i, j), i == j ? (i < 2 ? 2.0 : 0.0) : 0.0, 1e-14);
  std::mt19937_64 rng(31);
  const auto psi = scramble(reference_state(h), 4, rng);
  const auto r = rdm12(psi, 4);
  EXPECT_NEAR(r.rdm1.trace(), 4.0, 1e-10);
  EXPECT_NEAR(subspace_energy(h, r), expectation(psi, h), 1e-9);
  EXPECT_THROW(rdm12(psi, 3), InputError);
}

TEST(ExtendRegister, Examples) {
  const auto base = reference_state(1, 1, {});
  const std::vector<EnvClass> vir{EnvClass::Virtual}, core{EnvClass::Core};
  const auto v = extend_register(base, vir);
  EXPECT_EQ(v.n_qubits(), 4);
  EXPECT_EQ(v[0b0011], Amplitude(1.0));
  EXPECT_NEAR(v.norm(), 1.0, 1e-15);
  const auto c = extend_register(base, core);
  EXPECT_EQ(c[0b1111], Amplitude(1.0));
  EXPECT_NEAR(number_expectation(c), number_expectation(base) + 2, 1e-15);
}

TEST(ExtendRegister, OldOperatorsActIdentically) {
  std::mt19937_64 rng(41);
  const auto ints = fx::load("h6_1.00");
  const auto r = rank_environment(ints, build_bath(run_rhf(ints).density, FragmentSpec{{2, 3}}));
  const auto h0 = stage_hamiltonian(ints, r, 0);
  const auto h1 = stage_hamiltonian(ints, r, 1);
  const auto pool = build_pool(h0.norb);
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  std::uniform_real_distribution<double> angle(-1, 1);
  Direction d;
  for (int i = 0; i < 10; ++i) d.records.push_back({pool[pick(rng)], angle(rng), 0});
  const std::vector<EnvClass> appended{r.env_class[0]};
  const auto small = prepare_state(d, reference_state(h0));
  const auto big = prepare_state(d, extend_register(reference_state(h0), appended));
  EXPECT_LE(max_diff(extend_register(small, appended), big), 1e-12);
  // warm start: the bigger reference is the tail-extended smaller one
  EXPECT_LE(max_diff(extend_register(reference_state(h0), appended), reference_state(h1)), 0.0);
}
