// Copyright 2026 The OE-VQE Authors
// SPDX-License-Identifier: Apache-2.0

#include "oevqe/solver.hpp"

#include "oevqe/scf.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

namespace oevqe {

// ---- pools ----------------------------------------------------------------

namespace {

long long choose(long long n, long long k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (long long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Generator moving `from` into `to`, oriented so the annihilated indices are
// the lexicographically smaller set. Orientation only flips the sign of tau.
ExcitationOp canonical_single(int from, int to, int n_qubits) {
  const int idx[2] = {std::min(from, to), std::max(from, to)};
  return jw_encode(idx, n_qubits);
}

ExcitationOp canonical_double(std::pair<int, int> created, std::pair<int, int> annihilated, int n_qubits) {
  auto sorted = [](std::pair<int, int> p) { return std::pair(std::min(p.first, p.second), std::max(p.first, p.second)); };
  created = sorted(created);
  annihilated = sorted(annihilated);
  if (created < annihilated) std::swap(created, annihilated);
  const int idx[4] = {created.first, created.second, annihilated.first, annihilated.second};
  return jw_encode(idx, n_qubits);
}

}  // namespace

long long pool_size(int k) {
  if (k < 1) return 0;
  const long long c2 = choose(k, 2);
  return 2 * c2 + 6 * choose(k, 4) + 2 * c2 * c2;
}

std::vector<ExcitationOp> build_pool(int k) {
  if (k < 1) throw InputError("build_pool needs at least one orbital");
  const int n = 2 * k;
  std::vector<ExcitationOp> pool;
  for (int p = 0; p < n; ++p)
    for (int q = p + 1; q < n; ++q)
      if ((p & 1) == (q & 1)) pool.push_back(canonical_single(p, q, n));
  for (int r = 0; r < n; ++r)
    for (int s = r + 1; s < n; ++s)
      for (int p = 0; p < n; ++p)
        for (int q = p + 1; q < n; ++q) {
          if (p == r || p == s || q == r || q == s) continue;
          if (std::pair(r, s) >= std::pair(p, q)) continue;
          if ((p & 1) + (q & 1) != (r & 1) + (s & 1)) continue;
          const int idx[4] = {p, q, r, s};
          pool.push_back(jw_encode(idx, n));
        }
  std::sort(pool.begin(), pool.end());
  return pool;
}

std::vector<ExcitationOp> pool_difference(int k_old, int k_new) {
  std::vector<ExcitationOp> out;
  for (auto& op : build_pool(k_new)) {
    if (op.max_index() / 2 >= k_old) out.push_back(std::move(op));
  }
  return out;
}

std::vector<ExcitationOp> incremental_pool(int k) {
  if (k < 2) throw InputError("incremental_pool needs at least two orbitals");
  return pool_difference(k - 1, k);
}

std::vector<ExcitationOp> uccsd_operators(const Statevector& reference) {
  std::size_t det = reference.size();
  for (std::size_t x = 0; x < reference.size(); ++x) {
    if (std::abs(std::abs(reference[x]) - 1.0) < 1e-12) {
      det = x;
      break;
    }
  }
  if (det == reference.size()) throw InputError("uccsd_operators needs a single-determinant reference");
  const int n = reference.n_qubits();
  std::vector<int> occ, vir;
  for (int q = 0; q < n; ++q) ((det >> q) & 1 ? occ : vir).push_back(q);

  std::vector<ExcitationOp> doubles, singles;
  for (std::size_t a = 0; a < occ.size(); ++a)
    for (std::size_t b = a + 1; b < occ.size(); ++b)
      for (std::size_t c = 0; c < vir.size(); ++c)
        for (std::size_t d = c + 1; d < vir.size(); ++d) {
          if ((occ[a] & 1) + (occ[b] & 1) != (vir[c] & 1) + (vir[d] & 1)) continue;
          doubles.push_back(canonical_double({vir[c], vir[d]}, {occ[a], occ[b]}, n));
        }
  for (int i : occ)
    for (int a : vir)
      if ((i & 1) == (a & 1)) singles.push_back(canonical_single(i, a, n));
  std::sort(doubles.begin(), doubles.end());
  std::sort(singles.begin(), singles.end());
  doubles.insert(doubles.end(), singles.begin(), singles.end());
  return doubles;
}

// ---- circuit --------------------------------------------------------------

std::vector<ExcitationOp> Direction::ops() const {
  std::vector<ExcitationOp> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.op);
  return out;
}

std::vector<double> Direction::thetas() const {
  std::vector<double> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.theta);
  return out;
}

void Direction::set_thetas(const Vector& t) {
  if (static_cast<std::size_t>(t.size()) != records.size()) throw InputError("angle count does not match the circuit");
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (!std::isfinite(t(static_cast<Eigen::Index>(i)))) throw NumericalError("non-finite circuit angle");
    records[i].theta = t(static_cast<Eigen::Index>(i));
  }
}

Statevector prepare_state(const Direction& dir, const Statevector& psi0) {
  Statevector psi = psi0;
  for (const auto& r : dir.records) apply_excitation_inplace(psi, r.op, r.theta);
  return psi;
}

std::vector<double> energy_gradient(const Direction& dir, const Statevector& psi0, const SubspaceHamiltonian& h) {
  const auto ops = dir.ops();
  const auto thetas = dir.thetas();
  std::vector<double> grad(ops.size());
  energy_and_gradient(ops, thetas, psi0, HamiltonianKernel(h), grad);
  return grad;
}

// ---- optimizer ------------------------------------------------------------

namespace {

struct LinePoint {
  double alpha = 0.0;
  double f = 0.0;
  double d = 0.0;  // directional derivative
  Vector g;
};

struct LineSearchOutcome {
  bool ok = false;
  LinePoint point;
};

class LineSearch {
 public:
  LineSearch(const Objective& fg, const Vector& x, const Vector& p, int* evals)
      : fg_(fg), x_(x), p_(p), evals_(evals) {}

  LinePoint eval(double alpha) {
    LinePoint pt;
    pt.alpha = alpha;
    pt.g.resize(x_.size());
    pt.f = fg_(x_ + alpha * p_, pt.g);
    pt.d = pt.g.dot(p_);
    ++*evals_;
    return pt;
  }

  // Strong Wolfe conditions, c1 = 1e-4, c2 = 0.9.
  LineSearchOutcome run(const LinePoint& zero) {
    constexpr double c1 = 1e-4, c2 = 0.9, alpha_max = 1e3;
    LinePoint prev = zero;
    double alpha = 1.0;
    for (int i = 0; i < 40; ++i) {
      LinePoint cur = eval(alpha);
      if (!std::isfinite(cur.f) || !std::isfinite(cur.d)) {
        alpha = 0.5 * (prev.alpha + alpha);
        continue;
      }
      if (cur.f > zero.f + c1 * alpha * zero.d || (i > 0 && cur.f >= prev.f)) return zoom(zero, prev, cur);
      if (std::abs(cur.d) <= -c2 * zero.d) return {true, cur};
      if (cur.d >= 0.0) return zoom(zero, cur, prev);
      prev = cur;
      alpha = std::min(2.0 * alpha, alpha_max);
    }
    return {};
  }

 private:
  LineSearchOutcome zoom(const LinePoint& zero, LinePoint lo, LinePoint hi) {
    constexpr double c1 = 1e-4, c2 = 0.9;
    for (int j = 0; j < 60; ++j) {
      const double width = hi.alpha - lo.alpha;
      if (std::abs(width) <= 1e-15 * std::max(1.0, std::abs(lo.alpha))) break;
      // minimizer of the quadratic through f_lo, d_lo, f_hi, kept inside the bracket
      double alpha = lo.alpha + 0.5 * width;
      const double denom = 2.0 * (hi.f - lo.f - lo.d * width);
      if (denom > 0.0) {
        const double t = -lo.d * width * width / denom;
        const double lo_b = lo.alpha + 0.1 * width, hi_b = lo.alpha + 0.9 * width;
        alpha = std::clamp(lo.alpha + t, std::min(lo_b, hi_b), std::max(lo_b, hi_b));
      }
      LinePoint cur = eval(alpha);
      if (!std::isfinite(cur.f)) {
        hi = cur;
        continue;
      }
      if (cur.f > zero.f + c1 * alpha * zero.d || cur.f >= lo.f) {
        hi = cur;
      } else {
        if (std::abs(cur.d) <= -c2 * zero.d) return {true, cur};
        if (cur.d * (hi.alpha - lo.alpha) >= 0.0) hi = lo;
        lo = cur;
      }
    }
    // Report the best strictly decreasing point, if any, so the caller can
    // still make progress.
    if (lo.alpha != 0.0 && lo.f < zero.f) return {true, lo};
    return {};
  }

  const Objective& fg_;
  const Vector& x_;
  const Vector& p_;
  int* evals_;
};

}  // namespace

BfgsResult bfgs_minimize(const Objective& fg, const Vector& theta0, const BfgsOptions& opts) {
  const Eigen::Index n = theta0.size();
  BfgsResult res;
  res.theta = theta0;
  Vector g(n);
  res.f = fg(res.theta, g);
  res.evaluations = 1;
  res.grad_inf = n > 0 ? g.cwiseAbs().maxCoeff() : 0.0;
  if (!std::isfinite(res.f)) throw NumericalError("objective is not finite at the starting point");
  if (n == 0 || res.grad_inf <= opts.tol) {
    res.converged = true;
    return res;
  }
  Matrix hinv = Matrix::Identity(n, n);
  bool hinv_is_identity = true;
  bool scaled = false;
  while (res.iterations < opts.max_iter) {
    if (res.grad_inf <= opts.tol) {
      res.converged = true;
      break;
    }
    Vector p = -hinv * g;
    double d0 = g.dot(p);
    if (!(d0 < 0.0)) {
      hinv.setIdentity();
      hinv_is_identity = true;
      p = -g;
      d0 = -g.squaredNorm();
    }
    LinePoint zero;
    zero.f = res.f;
    zero.d = d0;
    zero.g = g;
    LineSearch ls(fg, res.theta, p, &res.evaluations);
    const LineSearchOutcome out = ls.run(zero);
    if (!out.ok) {
      if (!hinv_is_identity) {
        hinv.setIdentity();
        hinv_is_identity = true;
        continue;
      }
      if (res.grad_inf <= opts.stall_tol) break;
      std::ostringstream msg;
      msg << "line search failed at iteration " << res.iterations << " with |g|_inf = " << res.grad_inf;
      throw OptimizerError(msg.str(), res);
    }
    const Vector s = out.point.alpha * p;
    const Vector y = out.point.g - g;
    res.theta += s;
    res.f = out.point.f;
    g = out.point.g;
    res.grad_inf = g.cwiseAbs().maxCoeff();
    ++res.iterations;

    const double sy = s.dot(y);
    if (sy > 1e-14 * s.norm() * y.norm() && sy > 0.0) {
      if (!scaled) {
        hinv *= sy / y.squaredNorm();
        scaled = true;
      }
      const double rho = 1.0 / sy;
      const Vector hy = hinv * y;
      // (I - rho s y^T) H (I - rho y s^T) + rho s s^T, expanded
      hinv += (rho * rho * y.dot(hy) + rho) * (s * s.transpose()) - rho * (hy * s.transpose() + s * hy.transpose());
      hinv_is_identity = false;
    }
  }
  if (res.grad_inf <= opts.tol) res.converged = true;
  return res;
}

// ---- configuration --------------------------------------------------------

void SolverConfig::validate() const {
  if (!(grad_threshold > 0.0)) throw InputError("gradient threshold must be positive");
  for (double t : stage_thresholds)
    if (!(t > 0.0)) throw InputError("stage thresholds must be positive");
  if (max_ops_total < 0) throw InputError("operator budget must be non-negative");
  if (!(bfgs_tol > 0.0)) throw InputError("bfgs tolerance must be positive");
  if (bfgs_max_iter < 0) throw InputError("bfgs iteration limit must be non-negative");
  if (!(measurement_epsilon > 0.0)) throw InputError("measurement epsilon must be positive");
  if (!(bath_delta > 0.0 && bath_delta < 1.0)) throw InputError("bath threshold delta must lie in (0, 1)");
  for (std::size_t i = 0; i < stage_schedule.size(); ++i) {
    if (stage_schedule[i] < 0) throw InputError("stage schedule entries must be non-negative");
    if (i > 0 && stage_schedule[i] <= stage_schedule[i - 1])
      throw InputError("stage schedule must be strictly increasing");
  }
}

double SolverConfig::threshold_at(std::size_t position) const {
  return position < stage_thresholds.size() ? stage_thresholds[position] : grad_threshold;
}

// ---- stages ---------------------------------------------------------------

namespace {

BfgsResult optimize(const HamiltonianKernel& kernel, const Statevector& psi0,
                    Direction& dir, const SolverConfig& cfg, bool all) {
  const std::vector<ExcitationOp> ops = dir.ops();
  std::vector<double> thetas = dir.thetas();
  const std::size_t n = ops.size();
  const std::size_t first = all ? 0 : n - 1;
  std::vector<double> grad(n);
  Objective fg = [&](const Vector& x, Vector& g) {
    for (std::size_t i = first; i < n; ++i) thetas[i] = x(static_cast<Eigen::Index>(i - first));
    const double e = energy_and_gradient(ops, thetas, psi0, kernel, grad);
    for (std::size_t i = first; i < n; ++i) g(static_cast<Eigen::Index>(i - first)) = grad[i];
    return e;
  };
  Vector x0(static_cast<Eigen::Index>(n - first));
  for (std::size_t i = first; i < n; ++i) x0(static_cast<Eigen::Index>(i - first)) = dir.records[i].theta;
  BfgsOptions bo;
  bo.tol = cfg.bfgs_tol;
  bo.max_iter = cfg.bfgs_max_iter;
  BfgsResult r = bfgs_minimize(fg, x0, bo);
  Vector full(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i)
    full(static_cast<Eigen::Index>(i)) = i < first ? dir.records[i].theta : r.theta(static_cast<Eigen::Index>(i - first));
  dir.set_thetas(full);
  return r;
}

void require_register(const SubspaceHamiltonian& h, const Direction& dir) {
  for (const auto& r : dir.records)
    if (r.op.max_index() >= 2 * h.norb)
      throw InputError("circuit operator " + r.op.label() + " does not fit a stage of " + std::to_string(h.norb) +
                       " orbitals");
}

}  // namespace

StageResult adapt_stage(const SubspaceHamiltonian& h, const Direction& warm, const std::vector<ExcitationOp>& pool,
                        const SolverConfig& cfg, const StageLimits& limits) {
  require_register(h, warm);
  for (const auto& op : pool)
    if (op.max_index() >= 2 * h.norb) throw InputError("pool operator " + op.label() + " does not fit the stage");
  StageResult r;
  r.direction = warm;
  const HamiltonianKernel kernel(h);
  const Statevector psi0 = reference_state(h);
  Statevector psi = prepare_state(r.direction, psi0);
  Statevector hpsi = kernel.apply(psi);
  r.e_warm = r.e_sub = psi.dot(hpsi).real();

  for (;;) {
    std::size_t best = pool.size();
    double g_best = 0.0;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      const double g = std::abs(pool_gradient(psi, hpsi, pool[i]));
      if (g > g_best) {
        g_best = g;
        best = i;
      }
    }
    r.grad_max.push_back(g_best);
    if (best == pool.size() || g_best <= limits.threshold) break;
    if (limits.max_new_ops >= 0 && r.appended >= limits.max_new_ops) {
      r.budget_exhausted = true;
      break;
    }
    r.direction.records.push_back({pool[best], 0.0, limits.stage});
    r.selected.push_back(pool[best].label());
    ++r.appended;
    try {
      const BfgsResult br = optimize(kernel, psi0, r.direction, cfg, cfg.reopt_all);
      r.bfgs_iterations += br.iterations;
      r.e_sub = br.f;
    } catch (const OptimizerError& e) {
      throw OptimizerError(std::string(e.what()) + " after appending " + pool[best].label(), e.best());
    }
    r.e_trace.push_back(r.e_sub);
    psi = prepare_state(r.direction, psi0);
    hpsi = kernel.apply(psi);
  }
  return r;
}

StageResult uccsd_stage(const SubspaceHamiltonian& h, const Direction& warm, const SolverConfig& cfg, int stage) {
  require_register(h, warm);
  StageResult r;
  r.direction = warm;
  const HamiltonianKernel kernel(h);
  const Statevector psi0 = reference_state(h);
  r.e_warm = r.e_sub = kernel.expectation(prepare_state(r.direction, psi0));
  for (auto& op : uccsd_operators(psi0)) {
    const bool present = std::any_of(warm.records.begin(), warm.records.end(),
                                     [&](const DirectionRecord& rec) { return rec.op == op; });
    if (present) continue;
    r.selected.push_back(op.label());
    r.direction.records.push_back({std::move(op), 0.0, stage});
    ++r.appended;
  }
  if (r.appended == 0) return r;
  const bool all = cfg.reopt_all || warm.empty();
  const std::size_t first = all ? 0 : warm.size();
  const std::vector<ExcitationOp> ops = r.direction.ops();
  std::vector<double> thetas = r.direction.thetas();
  std::vector<double> grad(ops.size());
  Objective fg = [&](const Vector& x, Vector& g) {
    for (std::size_t i = first; i < ops.size(); ++i) thetas[i] = x(static_cast<Eigen::Index>(i - first));
    const double e = energy_and_gradient(ops, thetas, psi0, kernel, grad);
    for (std::size_t i = first; i < ops.size(); ++i) g(static_cast<Eigen::Index>(i - first)) = grad[i];
    return e;
  };
  Vector x0(static_cast<Eigen::Index>(ops.size() - first));
  for (std::size_t i = first; i < ops.size(); ++i) x0(static_cast<Eigen::Index>(i - first)) = thetas[i];
  BfgsOptions bo;
  bo.tol = cfg.bfgs_tol;
  bo.max_iter = cfg.bfgs_max_iter;
  const BfgsResult br = bfgs_minimize(fg, x0, bo);
  Vector full(static_cast<Eigen::Index>(ops.size()));
  for (std::size_t i = 0; i < ops.size(); ++i)
    full(static_cast<Eigen::Index>(i)) = i < first ? r.direction.records[i].theta : br.theta(static_cast<Eigen::Index>(i - first));
  r.direction.set_thetas(full);
  r.bfgs_iterations = br.iterations;
  r.e_sub = br.f;
  r.e_trace.push_back(r.e_sub);
  return r;
}

// ---- runs -----------------------------------------------------------------

RunReport oe_run(const IntegralSet& ints, const FragmentSpec& frag, const SolverConfig& cfg) {
  cfg.validate();
  ints.validate();
  frag.validate(ints.norb);

  RunReport rep;
  rep.mode = cfg.ansatz == AnsatzKind::Adapt ? "oe-adapt" : "oe-uccsd";
  rep.label = ints.label;
  rep.norb = ints.norb;
  rep.n_elec = ints.n_elec;
  rep.fragment = frag.indices;
  rep.e_nuc = ints.e_nuc;

  const RhfSolution sol = run_rhf(ints);
  rep.e_hf = sol.energy;
  rep.scf_iterations = sol.iterations;
  const EmbeddingBasis basis = build_bath(sol.density, frag, cfg.bath_delta);
  const RankedBasis ranked = rank_environment(ints, basis);
  rep.n_frag = basis.n_frag();
  rep.n_bath = basis.n_bath();
  rep.n_core = basis.n_core();
  rep.n_vir = basis.n_vir();
  rep.delta_lambda.assign(ranked.delta_lambda.data(), ranked.delta_lambda.data() + ranked.delta_lambda.size());
  rep.env_class = ranked.env_class;

  std::vector<int> schedule = cfg.stage_schedule;
  if (schedule.empty())
    for (int s = 0; s <= ranked.n_env(); ++s) schedule.push_back(s);
  for (int s : schedule)
    if (s > ranked.n_env())
      throw InputError("stage " + std::to_string(s) + " exceeds the " + std::to_string(ranked.n_env()) +
                       " environment orbitals");

  Direction dir;
  int prev_k = 0;
  for (std::size_t pos = 0; pos < schedule.size(); ++pos) {
    const auto t0 = std::chrono::steady_clock::now();
    StageRecord rec;
    rec.n_s = schedule[pos];
    try {
      const SubspaceHamiltonian h = stage_hamiltonian(ints, ranked, rec.n_s);
      rec.norb = h.norb;
      rec.n_elec = h.n_elec;
      rec.appended = h.occ_pattern;
      rec.e_core = h.e_core;
      rec.e_nuc = h.e_nuc;
      rec.threshold = cfg.threshold_at(pos);
      rec.pool_full = pool_size(h.norb);
      rec.e_reference = assemble_energy(expectation(reference_state(h), h), h.e_core, h.e_nuc);

      StageResult sr;
      if (cfg.ansatz == AnsatzKind::Uccsd) {
        rec.pool_screened = 0;
        sr = uccsd_stage(h, dir, cfg, rec.n_s);
      } else {
        const std::vector<ExcitationOp> pool = pos == 0 ? build_pool(h.norb) : pool_difference(prev_k, h.norb);
        rec.pool_screened = static_cast<long long>(pool.size());
        StageLimits lim;
        lim.threshold = rec.threshold;
        lim.stage = rec.n_s;
        lim.max_new_ops = cfg.max_ops_total - static_cast<int>(dir.size());
        if (cfg.max_ops_per_stage >= 0) lim.max_new_ops = std::min(lim.max_new_ops, cfg.max_ops_per_stage);
        sr = adapt_stage(h, dir, pool, cfg, lim);
      }
      dir = sr.direction;
      rec.ops_appended = sr.appended;
      rec.e_warm = assemble_energy(sr.e_warm, h.e_core, h.e_nuc);
      rec.e_sub = sr.e_sub;
      rec.e_g = assemble_energy(sr.e_sub, h.e_core, h.e_nuc);
      rec.grad_max = sr.grad_max;
      for (double e : sr.e_trace) rec.energy_trace.push_back(assemble_energy(e, h.e_core, h.e_nuc));
      rec.selected = sr.selected;
      rec.bfgs_iterations = sr.bfgs_iterations;
      rec.budget_exhausted = sr.budget_exhausted;
      prev_k = h.norb;
    } catch (const InputError&) {
      throw;
    } catch (const std::exception& e) {
      rep.direction = dir;
      rep.total_ops = static_cast<int>(dir.size());
      if (!rep.stages.empty()) rep.e_final = rep.stages.back().e_g;
      rep.failure = "stage " + std::to_string(rec.n_s) + ": " + e.what();
      rep.measurement = measurement_accounting(rep, cfg);
      throw RunError(rep.failure, rep);
    }
    rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rep.stages.push_back(std::move(rec));
  }
  rep.direction = dir;
  rep.total_ops = static_cast<int>(dir.size());
  rep.e_final = rep.stages.empty() ? rep.e_hf : rep.stages.back().e_g;
  rep.measurement = measurement_accounting(rep, cfg);
  return rep;
}

RunReport adapt_run(const IntegralSet& ints, const SolverConfig& cfg) {
  FragmentSpec all;
  all.indices.resize(static_cast<std::size_t>(ints.norb));
  for (int i = 0; i < ints.norb; ++i) all.indices[static_cast<std::size_t>(i)] = i;
  SolverConfig c = cfg;
  c.stage_schedule = {0};
  c.stage_thresholds.clear();
  RunReport rep = oe_run(ints, all, c);
  rep.mode = cfg.ansatz == AnsatzKind::Adapt ? "adapt" : "uccsd";
  return rep;
}

MeasurementSummary measurement_accounting(const RunReport& report, const SolverConfig& cfg) {
  MeasurementSummary m;
  m.epsilon = cfg.measurement_epsilon;
  const double inv_eps2 = 1.0 / (m.epsilon * m.epsilon);
  long long ops = 0;
  double modeled = 0.0;
  for (const auto& s : report.stages) {
    const double mi = static_cast<double>(s.ops_appended) * static_cast<double>(pool_size(s.norb)) * inv_eps2;
    m.per_stage.push_back(mi);
    m.m_total += mi;
    ops += s.ops_appended;
    modeled += s.ops_appended * std::pow(static_cast<double>(s.norb), 4) * std::pow(4.0, s.norb);
  }
  const int L = report.norb;
  m.m_full_pool = static_cast<double>(ops) * static_cast<double>(pool_size(L)) * inv_eps2;
  m.ratio = m.m_full_pool > 0.0 ? m.m_total / m.m_full_pool : 0.0;
  const int l_imp = report.n_frag + report.n_bath;
  m.ratio_bound = L > l_imp ? 1.0 / ((L - l_imp) * std::log(4.0)) : 0.0;
  if (ops > 0 && L > 0) modeled /= static_cast<double>(ops) * std::pow(static_cast<double>(L), 4) * std::pow(4.0, L);
  m.modeled_ratio = ops > 0 ? modeled : 0.0;
  return m;
}

}  // namespace oevqe
