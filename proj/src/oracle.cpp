// Copyright 2026 The OE-VQE Authors
// SPDX-License-Identifier: Apache-2.0

#include "oevqe/oracle.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <random>
#include <set>

namespace oevqe {

namespace {

// ---- occupation strings ---------------------------------------------------

struct StringSpace {
  int norb = 0;
  std::vector<std::uint32_t> strings;  // ascending
  std::vector<int> index;               // string -> position, -1 if absent

  struct Move {
    int p, q, target, sign;
  };
  std::vector<std::vector<Move>> moves;  // per string: every nonzero a+_p a_q

  StringSpace(int k, int n) : norb(k), index(std::size_t{1} << k, -1) {
    for (std::uint32_t s = 0; s < (1u << k); ++s)
      if (std::popcount(s) == n) {
        index[s] = static_cast<int>(strings.size());
        strings.push_back(s);
      }
    moves.resize(strings.size());
    for (std::size_t i = 0; i < strings.size(); ++i) {
      const std::uint32_t s = strings[i];
      for (int q = 0; q < k; ++q) {
        if (!((s >> q) & 1)) continue;
        const std::uint32_t removed = s & ~(1u << q);
        const int sign_q = std::popcount(s & ((1u << q) - 1)) & 1 ? -1 : 1;
        for (int p = 0; p < k; ++p) {
          if ((removed >> p) & 1) continue;
          const std::uint32_t t = removed | (1u << p);
          const int sign_p = std::popcount(removed & ((1u << p) - 1)) & 1 ? -1 : 1;
          moves[i].push_back({p, q, index[t], sign_p * sign_q});
        }
      }
    }
  }

  std::size_t size() const { return strings.size(); }
};

class FciSpace {
 public:
  FciSpace(const SubspaceHamiltonian& h, int n_alpha, int n_beta)
      : k_(h.norb), a_(h.norb, n_alpha), b_(h.norb, n_beta), h_(h) {
    hp_ = h.h1;
    for (int p = 0; p < k_; ++p)
      for (int q = 0; q < k_; ++q) {
        double acc = 0.0;
        for (int r = 0; r < k_; ++r) acc += h.eri(p, r, r, q);
        hp_(p, q) -= 0.5 * acc;
      }
  }

  std::size_t dim() const { return a_.size() * b_.size(); }
  const StringSpace& alpha() const { return a_; }
  const StringSpace& beta() const { return b_; }

  // out[p * k + q] = E_pq v for every pair at once.
  void excitations(const Vector& v, std::vector<Vector>& out) const {
    const std::size_t nb = b_.size();
    for (auto& o : out) o.setZero(static_cast<Eigen::Index>(dim()));
    for (std::size_t ia = 0; ia < a_.size(); ++ia)
      for (const auto& m : a_.moves[ia]) {
        Vector& o = out[m.p * k_ + m.q];
        for (std::size_t ib = 0; ib < nb; ++ib) o(m.target * nb + ib) += m.sign * v(ia * nb + ib);
      }
    for (std::size_t ib = 0; ib < nb; ++ib)
      for (const auto& m : b_.moves[ib]) {
        Vector& o = out[m.p * k_ + m.q];
        for (std::size_t ia = 0; ia < a_.size(); ++ia) o(ia * nb + m.target) += m.sign * v(ia * nb + ib);
      }
  }

  void add_excitation(int p, int q, const Vector& v, Vector& out) const {
    const std::size_t nb = b_.size();
    for (std::size_t ia = 0; ia < a_.size(); ++ia)
      for (const auto& m : a_.moves[ia])
        if (m.p == p && m.q == q)
          for (std::size_t ib = 0; ib < nb; ++ib) out(m.target * nb + ib) += m.sign * v(ia * nb + ib);
    for (std::size_t ib = 0; ib < nb; ++ib)
      for (const auto& m : b_.moves[ib])
        if (m.p == p && m.q == q)
          for (std::size_t ia = 0; ia < a_.size(); ++ia) out(ia * nb + m.target) += m.sign * v(ia * nb + ib);
  }

  // H v = sum_pq h'_pq E_pq v + 1/2 sum_pqrs (pq|rs) E_pq E_rs v
  Vector sigma(const Vector& v) const {
    const int kk = k_ * k_;
    std::vector<Vector> d(static_cast<std::size_t>(kk));
    excitations(v, d);
    Vector out = Vector::Zero(static_cast<Eigen::Index>(dim()));
    for (int p = 0; p < k_; ++p)
      for (int q = 0; q < k_; ++q) {
        Vector g = Vector::Zero(static_cast<Eigen::Index>(dim()));
        bool any = false;
        for (int r = 0; r < k_; ++r)
          for (int s = 0; s < k_; ++s) {
            const double w = h_.eri(p, q, r, s);
            if (w == 0.0) continue;
            g += 0.5 * w * d[r * k_ + s];
            any = true;
          }
        out += hp_(p, q) * d[p * k_ + q];
        if (any) add_excitation(p, q, g, out);
      }
    return out;
  }

 private:
  int k_;
  StringSpace a_, b_;
  const SubspaceHamiltonian& h_;
  Matrix hp_;
};

Statevector to_statevector(const FciSpace& space, const Vector& c, int k) {
  Statevector out(2 * k);
  out[0] = 0.0;
  const std::size_t nb = space.beta().size();
  for (std::size_t ia = 0; ia < space.alpha().size(); ++ia)
    for (std::size_t ib = 0; ib < nb; ++ib) {
      const std::uint32_t sa = space.alpha().strings[ia], sb = space.beta().strings[ib];
      std::uint64_t x = 0;
      int inversions = 0;
      for (int j = 0; j < k; ++j) {
        if ((sa >> j) & 1) x |= std::uint64_t{1} << (2 * j);
        if ((sb >> j) & 1) {
          x |= std::uint64_t{1} << (2 * j + 1);
          inversions += std::popcount(sa >> (j + 1));
        }
      }
      out[x] = (inversions & 1 ? -1.0 : 1.0) * c(static_cast<Eigen::Index>(ia * nb + ib));
    }
  return out;
}

}  // namespace

FciResult fci_ground_state(const SubspaceHamiltonian& h, const FciOptions& opts) {
  const int k = h.norb;
  if (k > opts.max_orbitals) throw InputError("FCI limited to " + std::to_string(opts.max_orbitals) + " orbitals");
  if (h.n_elec < 0 || h.n_elec % 2 != 0 || h.n_elec / 2 > k)
    throw InputError("FCI sector with " + std::to_string(h.n_elec) + " electrons in " + std::to_string(k) +
                     " orbitals is empty");
  const FciSpace space(h, h.n_elec / 2, h.n_elec / 2);
  const std::size_t dim = space.dim();

  FciResult res;
  res.dimension = dim;
  Vector ground;
  if (opts.method == FciMethod::Dense || dim == 1) {
    Matrix H(dim, dim);
    for (std::size_t j = 0; j < dim; ++j) {
      Vector e = Vector::Zero(static_cast<Eigen::Index>(dim));
      e(static_cast<Eigen::Index>(j)) = 1.0;
      H.col(static_cast<Eigen::Index>(j)) = space.sigma(e);
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (H + H.transpose()));
    res.electronic = es.eigenvalues()(0);
    ground = es.eigenvectors().col(0);
    res.iterations = 1;
  } else {
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    Vector v(static_cast<Eigen::Index>(dim));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = uni(rng);
    v.normalize();
    std::vector<Vector> basis{v};
    std::vector<double> alpha, beta;
    const int max_iter = std::min<int>(opts.max_iter, static_cast<int>(dim));
    bool converged = false;
    for (int j = 0; j < max_iter; ++j) {
      Vector w = space.sigma(basis[j]);
      alpha.push_back(basis[j].dot(w));
      for (int pass = 0; pass < 2; ++pass)
        for (const auto& b : basis) w -= b.dot(w) * b;
      const double bnorm = w.norm();
      const int m = j + 1;
      Matrix t = Matrix::Zero(m, m);
      for (int i = 0; i < m; ++i) {
        t(i, i) = alpha[i];
        if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[i];
      }
      Eigen::SelfAdjointEigenSolver<Matrix> es(t);
      const double residual = std::abs(bnorm * es.eigenvectors()(m - 1, 0));
      res.iterations = m;
      if (residual < opts.tol || bnorm < 1e-14 || m == static_cast<int>(dim)) {
        res.electronic = es.eigenvalues()(0);
        ground = Vector::Zero(static_cast<Eigen::Index>(dim));
        for (int i = 0; i < m; ++i) ground += es.eigenvectors()(i, 0) * basis[i];
        converged = true;
        break;
      }
      beta.push_back(bnorm);
      basis.push_back(w / bnorm);
    }
    if (!converged) throw NumericalError("Lanczos did not converge in " + std::to_string(max_iter) + " iterations");
    ground.normalize();
    res.electronic = ground.dot(space.sigma(ground));
  }
  res.energy = res.electronic + h.e_core + h.e_nuc;
  res.state = to_statevector(space, ground, k);
  return res;
}

FciResult fci_ground_state(const IntegralSet& ints, const FciOptions& opts) {
  return fci_ground_state(full_space(ints), opts);
}

Eigen::MatrixXcd dense_generator(const ExcitationOp& op, int n_qubits) {
  if (n_qubits > 10) throw InputError("dense generator limited to 10 qubits");
  const std::size_t d = std::size_t{1} << n_qubits;
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  const Amplitude iunit(0.0, 1.0);
  for (const auto& t : op.pauli_terms) {
    if (((t.x_mask | t.z_mask) >> n_qubits) != 0) throw InputError("Pauli string outside the register");
    Amplitude base = t.coeff;
    for (int y = std::popcount(t.x_mask & t.z_mask); y > 0; --y) base *= iunit;
    for (std::uint64_t x = 0; x < d; ++x) {
      const double s = std::popcount(x & t.z_mask) & 1 ? -1.0 : 1.0;
      g(static_cast<Eigen::Index>(x ^ t.x_mask), static_cast<Eigen::Index>(x)) += s * base;
    }
  }
  return g;
}

Statevector dense_exponential(const Statevector& psi, const ExcitationOp& op, double theta) {
  const Eigen::MatrixXcd g = dense_generator(op, psi.n_qubits());
  Eigen::VectorXcd v(static_cast<Eigen::Index>(psi.size()));
  for (std::size_t i = 0; i < psi.size(); ++i) v(static_cast<Eigen::Index>(i)) = psi[i];
  const double norm1 = g.cwiseAbs().colwise().sum().maxCoeff();
  const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(theta) * norm1 / 0.5)));
  const double h = theta / steps;
  for (int s = 0; s < steps; ++s) {
    Eigen::VectorXcd term = v, sum = v;
    for (int j = 1; j < 60; ++j) {
      term = (h / j) * (g * term);
      sum += term;
      if (term.norm() < 1e-18 * sum.norm()) break;
    }
    v = sum;
  }
  Statevector out = psi;
  for (std::size_t i = 0; i < psi.size(); ++i) out[i] = v(static_cast<Eigen::Index>(i));
  return out;
}

double mp2_total_energy(const IntegralSet& ints, const RhfSolution& sol) {
  const int n = ints.norb;
  const int no = ints.n_elec / 2;
  const int nv = n - no;
  if (nv == 0 || no == 0) return sol.energy;
  const std::vector<double> eri = ints.eri.to_dense();
  const Matrix& c = sol.coefficients;
  const std::size_t N = n;
  // (ia|jb) in stages: (pq|rs) -> (iq|rs) -> (ia|rs) -> (ia|js) -> (ia|jb)
  std::vector<double> t1(no * N * N * N, 0.0), t2(no * nv * N * N, 0.0), t3(no * nv * no * N, 0.0),
      ovov(static_cast<std::size_t>(no) * nv * no * nv, 0.0);
  for (int i = 0; i < no; ++i)
    for (int p = 0; p < n; ++p)
      for (std::size_t rest = 0; rest < N * N * N; ++rest) t1[i * N * N * N + rest] += c(p, i) * eri[p * N * N * N + rest];
  for (int i = 0; i < no; ++i)
    for (int a = 0; a < nv; ++a)
      for (int q = 0; q < n; ++q)
        for (std::size_t rs = 0; rs < N * N; ++rs)
          t2[(i * nv + a) * N * N + rs] += c(q, no + a) * t1[(i * N + q) * N * N + rs];
  for (int ia = 0; ia < no * nv; ++ia)
    for (int j = 0; j < no; ++j)
      for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s) t3[(ia * no + j) * N + s] += c(r, j) * t2[(ia * N + r) * N + s];
  for (int iaj = 0; iaj < no * nv * no; ++iaj)
    for (int b = 0; b < nv; ++b)
      for (int s = 0; s < n; ++s) ovov[iaj * nv + b] += c(s, no + b) * t3[iaj * N + s];
  auto g = [&](int i, int a, int j, int b) { return ovov[((i * nv + a) * no + j) * nv + b]; };
  const Vector& e = sol.orbital_energies;
  double corr = 0.0;
  for (int i = 0; i < no; ++i)
    for (int j = 0; j < no; ++j)
      for (int a = 0; a < nv; ++a)
        for (int b = 0; b < nv; ++b) {
          const double denom = e(i) + e(j) - e(no + a) - e(no + b);
          if (std::abs(denom) < 1e-10) throw NumericalError("degenerate MP2 denominator");
          corr += g(i, a, j, b) * (2.0 * g(i, a, j, b) - g(i, b, j, a)) / denom;
        }
  return sol.energy + corr;
}

// ---- barren-plateau experiment -------------------------------------------

namespace {

// tau|x> via the Pauli expansion; sparse result.
std::map<std::uint64_t, Amplitude> generator_on_basis(const ExcitationOp& op, std::uint64_t x) {
  std::map<std::uint64_t, Amplitude> out;
  const Amplitude iunit(0.0, 1.0);
  for (const auto& t : op.pauli_terms) {
    Amplitude a = t.coeff;
    for (int y = std::popcount(t.x_mask & t.z_mask); y > 0; --y) a *= iunit;
    if (std::popcount(x & t.z_mask) & 1) a = -a;
    out[x ^ t.x_mask] += a;
  }
  for (auto it = out.begin(); it != out.end();) it = std::abs(it->second) < 1e-12 ? out.erase(it) : std::next(it);
  return out;
}

}  // namespace

std::vector<ExcitationOp> enumerate_pool(int k) {
  const int n = 2 * k;
  std::set<std::pair<int, int>> singles;
  std::set<std::pair<std::pair<int, int>, std::pair<int, int>>> doubles;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      if (p != q && (p & 1) == (q & 1)) singles.insert({std::min(p, q), std::max(p, q)});
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s) {
          const std::set<int> distinct{p, q, r, s};
          if (distinct.size() != 4) continue;
          if ((p & 1) + (q & 1) != (r & 1) + (s & 1)) continue;
          std::pair<int, int> cre{std::min(p, q), std::max(p, q)}, ann{std::min(r, s), std::max(r, s)};
          if (cre < ann) std::swap(cre, ann);
          doubles.insert({cre, ann});
        }
  std::vector<ExcitationOp> out;
  for (const auto& [p, q] : singles) {
    const int idx[2] = {p, q};
    out.push_back(jw_encode(idx, n));
  }
  for (const auto& [cre, ann] : doubles) {
    const int idx[4] = {cre.first, cre.second, ann.first, ann.second};
    out.push_back(jw_encode(idx, n));
  }
  return out;
}

BpResult bp_variance_experiment(const BpOptions& opts) {
  const int n = opts.n_qubits;
  if (n < 4 || n > 10 || n % 2 != 0) throw InputError("bp experiment needs an even qubit count in [4, 10]");
  if (opts.n_hamiltonians < 1) throw InputError("bp experiment needs at least one Hamiltonian");
  const int k = n / 2;
  const int l_occ = std::max(1, k / 2);
  std::uint64_t x0 = 0;
  for (int j = 0; j < l_occ; ++j) x0 |= std::uint64_t{3} << (2 * j);

  const std::vector<ExcitationOp> pool = enumerate_pool(k);
  std::vector<std::map<std::uint64_t, Amplitude>> actions;
  std::map<std::uint64_t, int> column{{x0, 0}};
  for (const auto& op : pool) {
    actions.push_back(generator_on_basis(op, x0));
    for (const auto& [y, a] : actions.back()) column.emplace(y, static_cast<int>(column.size()));
  }
  const Eigen::Index d = Eigen::Index{1} << n;
  const Eigen::Index m = static_cast<Eigen::Index>(column.size());

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> uni(-1.0, 1.0);

  BpResult res;
  res.n_qubits = n;
  res.n_hamiltonians = opts.n_hamiltonians;
  double sum = 0.0, sumsq = 0.0;
  std::vector<double> h_means;
  for (int sample = 0; sample < opts.n_hamiltonians; ++sample) {
    Vector h0(d);
    for (Eigen::Index i = 0; i < d; ++i) h0(i) = uni(rng);
    h0.array() -= h0.mean();
    h0 /= h0.norm();

    // Columns of W = V^+ for the basis states that matter; Haar columns come
    // from a thin QR of a complex Gaussian block with the R diagonal made
    // positive.
    Eigen::MatrixXcd w;
    if (opts.haar) {
      Eigen::MatrixXcd gauss(d, m);
      for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < m; ++j) gauss(i, j) = Amplitude(normal(rng), normal(rng)) / std::sqrt(2.0);
      Eigen::HouseholderQR<Eigen::MatrixXcd> qr(gauss);
      w = qr.householderQ() * Eigen::MatrixXcd::Identity(d, m);
      const Eigen::MatrixXcd& r = qr.matrixQR();
      for (Eigen::Index j = 0; j < m; ++j) {
        const Amplitude rjj = r(j, j);
        if (std::abs(rjj) > 0.0) w.col(j) *= rjj / std::abs(rjj);
      }
    } else {
      w = Eigen::MatrixXcd::Zero(d, m);
      for (const auto& [state, col] : column) w(static_cast<Eigen::Index>(state), col) = 1.0;
    }
    const Eigen::VectorXcd left = h0.cast<Amplitude>().cwiseProduct(w.col(0));
    double h_sum = 0.0;
    for (const auto& act : actions) {
      Amplitude acc = 0.0;
      for (const auto& [y, a] : act) acc += a * left.dot(w.col(column.at(y)));
      const double g = 2.0 * acc.real();
      sum += g;
      sumsq += g * g;
      h_sum += g;
      ++res.n_samples;
    }
    h_means.push_back(pool.empty() ? 0.0 : h_sum / static_cast<double>(pool.size()));
  }
  const double ns = static_cast<double>(res.n_samples);
  res.mean = sum / ns;
  res.variance = ns > 1 ? (sumsq - ns * res.mean * res.mean) / (ns - 1.0) : 0.0;
  if (h_means.size() > 1) {
    double mu = 0.0;
    for (double v : h_means) mu += v;
    mu /= static_cast<double>(h_means.size());
    double ss = 0.0;
    for (double v : h_means) ss += (v - mu) * (v - mu);
    res.mean_std_error = std::sqrt(ss / static_cast<double>(h_means.size() - 1) / static_cast<double>(h_means.size()));
  }
  return res;
}

double bp_log2_slope(const std::vector<BpResult>& rows) {
  if (rows.size() < 2) throw InputError("slope needs at least two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& r : rows) {
    if (!(r.variance > 0.0)) throw NumericalError("non-positive variance in slope fit");
    const double x = r.n_qubits, y = std::log2(r.variance);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(rows.size());
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace oevqe
