// Copyright 2026 The OE-VQE Authors
// SPDX-License-Identifier: Apache-2.0

#include "oevqe/fermisim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <sstream>

namespace oevqe {

namespace {

constexpr int kMaxQubits = 30;

void check_register(int n_qubits) {
  if (n_qubits < 0 || n_qubits > kMaxQubits)
    throw InputError("register of " + std::to_string(n_qubits) + " qubits is not supported (max " +
                     std::to_string(kMaxQubits) + ")");
}

// Applies a+_q (create) or a_q to the occupation string; false if it vanishes.
inline bool ladder(std::uint64_t& x, int q, bool create, int& sign) {
  const std::uint64_t m = std::uint64_t{1} << q;
  if (create == ((x & m) != 0)) return false;
  if (std::popcount(x & (m - 1)) & 1) sign = -sign;
  x ^= m;
  return true;
}

struct Move {
  std::uint64_t need_set = 0;    // annihilated
  std::uint64_t need_clear = 0;  // created
};

Move move_of(const ExcitationOp& op) {
  Move m;
  if (op.kind == ExcitationKind::Single) {
    m.need_set = std::uint64_t{1} << op.idx[0];
    m.need_clear = std::uint64_t{1} << op.idx[1];
  } else {
    m.need_set = (std::uint64_t{1} << op.idx[2]) | (std::uint64_t{1} << op.idx[3]);
    m.need_clear = (std::uint64_t{1} << op.idx[0]) | (std::uint64_t{1} << op.idx[1]);
  }
  return m;
}

// The forward part A of tau = A - A+ maps |x> to sign |y>. Visits every such
// (x, y, sign) once; then tau|x> = sign|y> and tau|y> = -sign|x>.
template <class F>
void for_each_pair(const ExcitationOp& op, std::size_t dim, F&& f) {
  const Move mv = move_of(op);
  const auto& i = op.idx;
  // Ladder chain of A: a+_q a_p for singles, a+_p a+_q a_r a_s for doubles.
  std::array<std::pair<int, bool>, 4> chain{};
  int len = 0;
  if (op.kind == ExcitationKind::Single) {
    chain = {{{i[0], false}, {i[1], true}}};
    len = 2;
  } else {
    chain = {{{i[3], false}, {i[2], false}, {i[1], true}, {i[0], true}}};
    len = 4;
  }
  std::uint64_t x0 = mv.need_set;
  int sign0 = 1;
  std::uint64_t parity = 0;
  for (int t = 0; t < len; ++t) {
    ladder(x0, chain[t].first, chain[t].second, sign0);
    parity ^= (std::uint64_t{1} << chain[t].first) - 1;
  }
  // The remaining state bits are untouched by the ladder chain, so their
  // contribution to the sign is the parity of sub & parity.
  const std::uint64_t flip = mv.need_set | mv.need_clear;
  const std::uint64_t free = (dim - 1) & ~flip;
  parity &= free;
  for (std::uint64_t sub = 0;; sub = (sub - free) & free) {
    const std::uint64_t x = sub | mv.need_set;
    const int sign = (std::popcount(sub & parity) & 1) ? -sign0 : sign0;
    f(x, x ^ flip, sign);
    if (sub == free) break;
  }
}

void require_fits(const Statevector& psi, const ExcitationOp& op) {
  if (op.max_index() >= psi.n_qubits())
    throw InputError("operator " + op.label() + " exceeds a register of " + std::to_string(psi.n_qubits()) +
                     " qubits");
}

// ---- Pauli algebra for the Jordan-Wigner expansion ------------------------

using PauliKey = std::pair<std::uint64_t, std::uint64_t>;  // (x_mask, z_mask)
using PauliSum = std::map<PauliKey, Amplitude>;

// Single-qubit product phase; codes: 0 I, 1 X, 2 Z, 3 Y (bit0 = x, bit1 = z).
Amplitude qubit_phase(int a, int b) {
  const Amplitude i(0.0, 1.0);
  if (a == 0 || b == 0 || a == b) return 1.0;
  if (a == 1 && b == 3) return i;    // XY = iZ
  if (a == 1 && b == 2) return -i;   // XZ = -iY
  if (a == 3 && b == 1) return -i;   // YX = -iZ
  if (a == 3 && b == 2) return i;    // YZ = iX
  if (a == 2 && b == 1) return i;    // ZX = iY
  return -i;                         // ZY = -iX
}

PauliSum multiply(const PauliSum& a, const PauliSum& b) {
  PauliSum out;
  for (const auto& [ka, ca] : a)
    for (const auto& [kb, cb] : b) {
      Amplitude phase = ca * cb;
      const std::uint64_t bits = ka.first | ka.second | kb.first | kb.second;
      for (std::uint64_t rest = bits; rest != 0; rest &= rest - 1) {
        const int q = std::countr_zero(rest);
        const int ca_code = static_cast<int>(((ka.first >> q) & 1) | (((ka.second >> q) & 1) << 1));
        const int cb_code = static_cast<int>(((kb.first >> q) & 1) | (((kb.second >> q) & 1) << 1));
        phase *= qubit_phase(ca_code, cb_code);
      }
      out[{ka.first ^ kb.first, ka.second ^ kb.second}] += phase;
    }
  return out;
}

// a+_q = Z_<q (X - iY)/2,  a_q = Z_<q (X + iY)/2
PauliSum ladder_pauli(int q, bool create) {
  const std::uint64_t below = (std::uint64_t{1} << q) - 1;
  const std::uint64_t bit = std::uint64_t{1} << q;
  PauliSum s;
  s[{bit, below}] = 0.5;
  s[{bit, below | bit}] = Amplitude(0.0, create ? -0.5 : 0.5);
  return s;
}

std::vector<PauliTerm> generator_terms(const ExcitationOp& op) {
  std::vector<std::pair<int, bool>> factors;  // leftmost first
  if (op.kind == ExcitationKind::Single) {
    factors = {{op.idx[1], true}, {op.idx[0], false}};
  } else {
    factors = {{op.idx[0], true}, {op.idx[1], true}, {op.idx[2], false}, {op.idx[3], false}};
  }
  PauliSum a{{{0, 0}, 1.0}};
  for (const auto& [q, create] : factors) a = multiply(a, ladder_pauli(q, create));
  // Pauli strings are Hermitian, so A - A+ keeps 2i Im(c) per string.
  std::vector<PauliTerm> terms;
  for (const auto& [k, c] : a) {
    const double im = c.imag();
    if (std::abs(im) < 1e-14) continue;
    terms.push_back({Amplitude(0.0, 2.0 * im), k.first, k.second});
  }
  return terms;
}

}  // namespace

// ---- Statevector ----------------------------------------------------------

Statevector::Statevector(int n_qubits) : n_qubits_(n_qubits) {
  check_register(n_qubits);
  amps_.assign(std::size_t{1} << n_qubits, Amplitude(0.0));
  amps_[0] = 1.0;
}

Statevector Statevector::basis_state(int n_qubits, std::uint64_t bits) {
  Statevector s(n_qubits);
  if (bits >= s.size()) throw InputError("basis state outside the register");
  s.amps_[0] = 0.0;
  s.amps_[bits] = 1.0;
  return s;
}

double Statevector::norm() const {
  double acc = 0.0;
  for (const auto& a : amps_) acc += std::norm(a);
  return std::sqrt(acc);
}

Amplitude Statevector::dot(const Statevector& other) const {
  if (other.size() != size()) throw InputError("statevector dimensions differ");
  Amplitude acc = 0.0;
  for (std::size_t i = 0; i < amps_.size(); ++i) acc += std::conj(amps_[i]) * other.amps_[i];
  return acc;
}

std::string PauliTerm::label() const {
  std::ostringstream os;
  const std::uint64_t bits = x_mask | z_mask;
  bool first = true;
  for (std::uint64_t rest = bits; rest != 0; rest &= rest - 1) {
    const int q = std::countr_zero(rest);
    const bool x = (x_mask >> q) & 1, z = (z_mask >> q) & 1;
    if (!first) os << ' ';
    os << (x && z ? 'Y' : x ? 'X' : 'Z') << q;
    first = false;
  }
  if (first) os << 'I';
  return os.str();
}

// ---- ExcitationOp ---------------------------------------------------------

int ExcitationOp::max_index() const {
  return *std::max_element(idx.begin(), idx.begin() + arity());
}

bool ExcitationOp::touches_spatial(int j) const {
  for (int a = 0; a < arity(); ++a)
    if (idx[a] / 2 == j) return true;
  return false;
}

bool ExcitationOp::is_canonical() const {
  if (kind == ExcitationKind::Single) return idx[0] < idx[1];
  return idx[0] < idx[1] && idx[2] < idx[3] && std::pair(idx[2], idx[3]) < std::pair(idx[0], idx[1]);
}

std::string ExcitationOp::label() const {
  std::ostringstream os;
  if (kind == ExcitationKind::Single) {
    os << "S(" << idx[0] << "->" << idx[1] << ")";
  } else {
    os << "D(" << idx[2] << "," << idx[3] << "->" << idx[0] << "," << idx[1] << ")";
  }
  return os.str();
}

ExcitationOp jw_encode(std::span<const int> indices, int n_qubits) {
  check_register(n_qubits);
  ExcitationOp op;
  if (indices.size() == 2) {
    op.kind = ExcitationKind::Single;
  } else if (indices.size() == 4) {
    op.kind = ExcitationKind::Double;
  } else {
    throw InputError("an excitation needs 2 or 4 spin-orbital indices");
  }
  for (std::size_t a = 0; a < indices.size(); ++a) {
    const int q = indices[a];
    if (q < 0 || q >= n_qubits)
      throw InputError("spin orbital " + std::to_string(q) + " outside a register of " + std::to_string(n_qubits));
    for (std::size_t b = 0; b < a; ++b)
      if (indices[b] == q) throw InputError("index collision on spin orbital " + std::to_string(q));
    op.idx[a] = q;
  }
  const auto spin = [](int q) { return q & 1; };
  if (op.kind == ExcitationKind::Single) {
    if (spin(op.idx[0]) != spin(op.idx[1])) throw InputError("single excitation " + op.label() + " changes S_z");
  } else if (spin(op.idx[0]) + spin(op.idx[1]) != spin(op.idx[2]) + spin(op.idx[3])) {
    throw InputError("double excitation " + op.label() + " changes S_z");
  }
  op.pauli_terms = generator_terms(op);
  return op;
}

// ---- state operations -----------------------------------------------------

void apply_excitation_inplace(Statevector& psi, const ExcitationOp& op, double theta) {
  require_fits(psi, op);
  const double c = std::cos(theta), s = std::sin(theta);
  auto amps = psi.amps();
  for_each_pair(op, psi.size(), [&](std::uint64_t x, std::uint64_t y, int sign) {
    const Amplitude ax = amps[x], ay = amps[y];
    amps[x] = c * ax - sign * s * ay;
    amps[y] = sign * s * ax + c * ay;
  });
}

Statevector apply_excitation(const Statevector& psi, const ExcitationOp& op, double theta) {
  Statevector out = psi;
  apply_excitation_inplace(out, op, theta);
  return out;
}

Statevector apply_generator(const Statevector& psi, const ExcitationOp& op) {
  require_fits(psi, op);
  Statevector out(psi.n_qubits());
  out[0] = 0.0;
  for_each_pair(op, psi.size(), [&](std::uint64_t x, std::uint64_t y, int sign) {
    out[y] += static_cast<double>(sign) * psi[x];
    out[x] -= static_cast<double>(sign) * psi[y];
  });
  return out;
}

Statevector reference_state(int norb, int n_imp_occ, std::span<const EnvClass> occ_pattern) {
  const int n_imp = norb - static_cast<int>(occ_pattern.size());
  if (n_imp < 0 || n_imp_occ < 0 || n_imp_occ > n_imp)
    throw InputError("reference occupation does not fit the orbital count");
  std::uint64_t bits = 0;
  for (int j = 0; j < n_imp_occ; ++j) bits |= std::uint64_t{3} << (2 * j);
  for (std::size_t t = 0; t < occ_pattern.size(); ++t)
    if (occ_pattern[t] == EnvClass::Core) bits |= std::uint64_t{3} << (2 * (n_imp + static_cast<int>(t)));
  return Statevector::basis_state(2 * norb, bits);
}

Statevector reference_state(const SubspaceHamiltonian& h) {
  return reference_state(h.norb, h.n_imp_occ, h.occ_pattern);
}

Statevector extend_register(const Statevector& psi, std::span<const EnvClass> appended) {
  const int n_old = psi.n_qubits();
  Statevector out(n_old + 2 * static_cast<int>(appended.size()));
  out[0] = 0.0;
  std::uint64_t high = 0;
  for (std::size_t t = 0; t < appended.size(); ++t)
    if (appended[t] == EnvClass::Core) high |= std::uint64_t{3} << (2 * t);
  const std::uint64_t shift = high << n_old;
  for (std::size_t x = 0; x < psi.size(); ++x) out[x | shift] = psi[x];
  return out;
}

// ---- Hamiltonian ----------------------------------------------------------

HamiltonianKernel::HamiltonianKernel(const SubspaceHamiltonian& hs) : n_(2 * hs.norb) {
  check_register(n_);
  const int n = n_;
  h_.assign(static_cast<std::size_t>(n) * n, 0.0);
  g_.assign(static_cast<std::size_t>(n) * n * n * n, 0.0);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      if ((p & 1) == (q & 1)) h_[p * n + q] = hs.h1(p / 2, q / 2);
  // <pq|rs> = (pr|qs) for matching spins
  auto phys = [&](int p, int q, int r, int s) -> double {
    if ((p & 1) != (r & 1) || (q & 1) != (s & 1)) return 0.0;
    return hs.eri(p / 2, r / 2, q / 2, s / 2);
  };
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s)
          g_[((static_cast<std::size_t>(p) * n + q) * n + r) * n + s] = phys(p, q, r, s) - phys(p, q, s, r);
}

Statevector HamiltonianKernel::apply(const Statevector& psi) const {
  if (psi.n_qubits() != n_)
    throw InputError("statevector has " + std::to_string(psi.n_qubits()) + " qubits, Hamiltonian acts on " +
                     std::to_string(n_));
  Statevector out(n_);
  out[0] = 0.0;
  std::vector<int> occ, vir;
  occ.reserve(n_);
  vir.reserve(n_);
  for (std::uint64_t x = 0; x < psi.size(); ++x) {
    const Amplitude ax = psi[x];
    if (ax == Amplitude(0.0)) continue;
    occ.clear();
    vir.clear();
    for (int q = 0; q < n_; ++q) ((x >> q) & 1 ? occ : vir).push_back(q);

    double diag = 0.0;
    for (std::size_t a = 0; a < occ.size(); ++a) {
      diag += h(occ[a], occ[a]);
      for (std::size_t b = 0; b < a; ++b) diag += g(occ[a], occ[b], occ[a], occ[b]);
    }
    out[x] += diag * ax;

    for (int i : occ)
      for (int a : vir) {
        if ((i & 1) != (a & 1)) continue;
        double v = h(a, i);
        for (int j : occ)
          if (j != i) v += g(a, j, i, j);
        if (v == 0.0) continue;
        std::uint64_t y = x;
        int sign = 1;
        ladder(y, i, false, sign);
        ladder(y, a, true, sign);
        out[y] += (sign * v) * ax;
      }

    for (std::size_t ii = 0; ii < occ.size(); ++ii)
      for (std::size_t jj = ii + 1; jj < occ.size(); ++jj) {
        const int i = occ[ii], j = occ[jj];
        const int spin = (i & 1) + (j & 1);
        for (std::size_t aa = 0; aa < vir.size(); ++aa)
          for (std::size_t bb = aa + 1; bb < vir.size(); ++bb) {
            const int a = vir[aa], b = vir[bb];
            if ((a & 1) + (b & 1) != spin) continue;
            const double v = g(a, b, i, j);
            if (v == 0.0) continue;
            // <ab||ij> a+_a a+_b a_j a_i
            std::uint64_t y = x;
            int sign = 1;
            ladder(y, i, false, sign);
            ladder(y, j, false, sign);
            ladder(y, b, true, sign);
            ladder(y, a, true, sign);
            out[y] += (sign * v) * ax;
          }
      }
  }
  return out;
}

double HamiltonianKernel::expectation(const Statevector& psi) const {
  return psi.dot(apply(psi)).real();
}

double expectation(const Statevector& psi, const SubspaceHamiltonian& h) {
  return HamiltonianKernel(h).expectation(psi);
}

double pool_gradient(const Statevector& psi, const Statevector& h_psi, const ExcitationOp& op) {
  require_fits(psi, op);
  if (h_psi.size() != psi.size()) throw InputError("H|psi> and |psi> have different registers");
  Amplitude acc = 0.0;
  for_each_pair(op, psi.size(), [&](std::uint64_t x, std::uint64_t y, int sign) {
    acc += static_cast<double>(sign) * (std::conj(h_psi[y]) * psi[x] - std::conj(h_psi[x]) * psi[y]);
  });
  return 2.0 * acc.real();
}

double pool_gradient(const Statevector& psi, const SubspaceHamiltonian& h, const ExcitationOp& op) {
  return pool_gradient(psi, HamiltonianKernel(h).apply(psi), op);
}

Statevector prepare_state(std::span<const ExcitationOp> ops, std::span<const double> thetas,
                          const Statevector& psi0) {
  if (ops.size() != thetas.size()) throw InputError("operator and angle counts differ");
  Statevector psi = psi0;
  for (std::size_t i = 0; i < ops.size(); ++i) apply_excitation_inplace(psi, ops[i], thetas[i]);
  return psi;
}

double energy_and_gradient(std::span<const ExcitationOp> ops, std::span<const double> thetas,
                           const Statevector& psi0, const HamiltonianKernel& h,
                           std::span<double> grad) {
  if (grad.size() != ops.size()) throw InputError("gradient buffer has the wrong length");
  Statevector psi = prepare_state(ops, thetas, psi0);
  Statevector lam = h.apply(psi);
  const double energy = psi.dot(lam).real();
  for (std::size_t k = ops.size(); k-- > 0;) {
    grad[k] = pool_gradient(psi, lam, ops[k]);
    apply_excitation_inplace(psi, ops[k], -thetas[k]);
    apply_excitation_inplace(lam, ops[k], -thetas[k]);
  }
  return energy;
}

// ---- observables ----------------------------------------------------------

Rdm12 rdm12(const Statevector& psi, int norb) {
  if (psi.n_qubits() != 2 * norb) throw InputError("rdm12: register does not hold " + std::to_string(norb) + " orbitals");
  const int n = 2 * norb;
  const std::size_t k = norb;
  Rdm12 out;
  out.norb = norb;
  out.rdm1 = Matrix::Zero(norb, norb);
  out.rdm2.assign(k * k * k * k, 0.0);
  std::vector<int> occ;
  for (std::uint64_t x = 0; x < psi.size(); ++x) {
    const Amplitude ax = psi[x];
    if (ax == Amplitude(0.0)) continue;
    occ.clear();
    for (int q = 0; q < n; ++q)
      if ((x >> q) & 1) occ.push_back(q);
    // a+_I a_J
    for (int jq : occ)
      for (int iq = jq & 1; iq < n; iq += 2) {
        std::uint64_t y = x;
        int sign = 1;
        ladder(y, jq, false, sign);
        if (!ladder(y, iq, true, sign)) continue;
        out.rdm1(iq / 2, jq / 2) += (std::conj(psi[y]) * ax).real() * sign;
      }
    // a+_I a+_J a_K a_L with spin(I) = spin(L), spin(J) = spin(K)
    for (int lq : occ)
      for (int kq : occ) {
        if (kq == lq) continue;
        std::uint64_t x2 = x;
        int s2 = 1;
        ladder(x2, lq, false, s2);
        ladder(x2, kq, false, s2);
        for (int jq = kq & 1; jq < n; jq += 2) {
          std::uint64_t x3 = x2;
          int s3 = s2;
          if (!ladder(x3, jq, true, s3)) continue;
          for (int iq = lq & 1; iq < n; iq += 2) {
            std::uint64_t y = x3;
            int sign = s3;
            if (!ladder(y, iq, true, sign)) continue;
            const std::size_t slot = ((static_cast<std::size_t>(iq / 2) * k + jq / 2) * k + kq / 2) * k + lq / 2;
            out.rdm2[slot] += (std::conj(psi[y]) * ax).real() * sign;
          }
        }
      }
  }
  return out;
}

double number_expectation(const Statevector& psi) {
  double acc = 0.0;
  for (std::uint64_t x = 0; x < psi.size(); ++x) acc += std::norm(psi[x]) * std::popcount(x);
  return acc;
}

double sz_expectation(const Statevector& psi) {
  const std::uint64_t alpha = 0x5555555555555555ULL;
  double acc = 0.0;
  for (std::uint64_t x = 0; x < psi.size(); ++x) {
    const int na = std::popcount(x & alpha), nb = std::popcount(x & ~alpha);
    acc += std::norm(psi[x]) * 0.5 * (na - nb);
  }
  return acc;
}

}  // namespace oevqe
