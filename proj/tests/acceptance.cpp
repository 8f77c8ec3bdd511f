// Copyright 2026 The OE-VQE Authors
// SPDX-License-Identifier: Apache-2.0

// End-to-end acceptance run. Prints one line per criterion and exits non-zero
// if any criterion fails. Criterion 8 runs only with OEVQE_EXTENDED=1 in the
// environment.

#include "oevqe/oracle.hpp"
#include "oevqe/ranking.hpp"
#include "oevqe/scf.hpp"
#include "oevqe/solver.hpp"
#include "test_support.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <string>
#include <vector>

using namespace oevqe;

namespace {

enum class Verdict { Pass, Fail, Skip };

struct Outcome {
  Verdict verdict = Verdict::Fail;
  std::string detail;
};

char buf[512];

template <class... A>
std::string fmt(const char* f, A... a) {
  std::snprintf(buf, sizeof buf, f, a...);
  return buf;
}

struct Run {
  std::string name;
  RunReport report;
  double e_fci = 0.0;
  double seconds = 0.0;
};

// Every OE run made here, reused by criteria 2 and 5.
std::vector<Run> g_runs;

const char* kFixtures[] = {"h2_0.74", "h4_1.00", "h4_2.00", "h6_1.00", "h6_1.50", "h6_2.00", "h6_2.40", "n2_0.80"};

Run timed_oe(const std::string& name, const FragmentSpec& frag, const SolverConfig& cfg) {
  const auto ints = fx::load(name);
  Run r;
  r.name = name;
  const auto t0 = std::chrono::steady_clock::now();
  r.report = oe_run(ints, frag, cfg);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.e_fci = fci_ground_state(ints).energy;
  return r;
}

Run timed_adapt(const std::string& name, const SolverConfig& cfg) {
  const auto ints = fx::load(name);
  Run r;
  r.name = name;
  const auto t0 = std::chrono::steady_clock::now();
  r.report = adapt_run(ints, cfg);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.e_fci = fci_ground_state(ints).energy;
  return r;
}

// ---- 1 -------------------------------------------------------------------

Outcome exactness() {
  SolverConfig cfg;
  cfg.grad_threshold = 1e-6;
  cfg.max_ops_total = 300;
  const std::pair<const char*, FragmentSpec> cases[] = {
      {"h2_0.74", FragmentSpec{{0}}}, {"h4_1.00", FragmentSpec{{0}}}, {"h4_2.00", FragmentSpec{{0}}},
      {"h6_1.00", FragmentSpec{{2, 3}}}};
  Outcome o{Verdict::Pass, ""};
  for (const auto& [name, frag] : cases) {
    Run r = timed_oe(name, frag, cfg);
    const double err = std::abs(r.report.e_final - r.e_fci);
    const bool full = !r.report.stages.empty() && r.report.stages.back().norb == r.report.norb;
    if (err > 1e-6 || !full) o.verdict = Verdict::Fail;
    o.detail += fmt("%s err=%.1e ops=%d %.0fs; ", name, err, r.report.total_ops, r.seconds);
    g_runs.push_back(std::move(r));
  }
  return o;
}

// ---- 2 -------------------------------------------------------------------

Outcome hf_consistency() {
  double worst = 0.0;
  int stages = 0;
  for (const auto& r : g_runs)
    for (const auto& s : r.report.stages) {
      worst = std::max(worst, std::abs(s.e_reference - r.report.e_hf));
      ++stages;
    }
  // every stage of every fixture for a one-orbital and a two-orbital fragment
  for (const char* name : kFixtures) {
    const auto ints = fx::load(name);
    const auto sol = run_rhf(ints);
    for (const FragmentSpec& frag : {FragmentSpec{{0}}, FragmentSpec{{0, 1}}}) {
      const auto ranked = rank_environment(ints, build_bath(sol.density, frag));
      for (int n_s = 0; n_s <= ranked.n_env(); ++n_s) {
        const auto h = stage_hamiltonian(ints, ranked, n_s);
        const double e = assemble_energy(expectation(reference_state(h), h), h.e_core, h.e_nuc);
        worst = std::max(worst, std::abs(e - sol.energy));
        ++stages;
      }
    }
  }
  return {worst <= 1e-8 ? Verdict::Pass : Verdict::Fail, fmt("%d stages, max |E_ref - E_hf| = %.1e", stages, worst)};
}

// ---- 3 -------------------------------------------------------------------

Outcome embedding_structure() {
  int combos = 0;
  double worst_orth = 0.0;
  bool bath_ok = true;
  for (const char* name : kFixtures) {
    const auto ints = fx::load(name);
    const auto d = run_rhf(ints).density;
    std::vector<FragmentSpec> frags;
    for (int i = 0; i < ints.norb; ++i) frags.push_back(FragmentSpec{{i}});
    for (int i = 0; i + 1 < ints.norb; ++i) frags.push_back(FragmentSpec{{i, i + 1}});
    if (ints.norb >= 6) frags.push_back(FragmentSpec{{0, ints.norb / 2, ints.norb - 1}});
    for (const auto& f : frags) {
      const auto basis = build_bath(d, f);
      if (basis.n_bath() > basis.n_frag()) bath_ok = false;
      const Matrix u = basis.full();
      worst_orth = std::max(worst_orth, (u.transpose() * u - Matrix::Identity(u.cols(), u.cols())).cwiseAbs().maxCoeff());
      const auto ranked = rank_environment(ints, basis);
      const Matrix v = ranked.u_full;
      worst_orth = std::max(worst_orth, (v.transpose() * v - Matrix::Identity(v.cols(), v.cols())).cwiseAbs().maxCoeff());
      ++combos;
    }
  }
  const bool ok = bath_ok && worst_orth <= 1e-10 && combos > 0;
  return {ok ? Verdict::Pass : Verdict::Fail,
          fmt("%d combinations, L_B <= L_A %s, max orthonormality defect %.1e", combos, bath_ok ? "holds" : "VIOLATED",
              worst_orth)};
}

// ---- 4 -------------------------------------------------------------------

Outcome oe_beats_adapt() {
  SolverConfig oe;
  oe.grad_threshold = 1e-6;
  oe.stage_thresholds = {1e-2, 1e-2};
  oe.max_ops_total = 100;
  SolverConfig base = oe;
  base.stage_thresholds.clear();
  Outcome o{Verdict::Pass, ""};
  for (const char* name : {"h6_2.00", "h6_2.40"}) {
    Run a = timed_oe(name, FragmentSpec{{0, 5}}, oe);
    const Run b = timed_adapt(name, base);
    const double ea = std::abs(a.report.e_final - a.e_fci), eb = std::abs(b.report.e_final - b.e_fci);
    if (!(ea < eb)) o.verdict = Verdict::Fail;
    o.detail += fmt("%s OE %.3e (%d ops, %.0fs) vs ADAPT %.3e (%d ops, %.0fs); ", name, ea, a.report.total_ops,
                    a.seconds, eb, b.report.total_ops, b.seconds);
    g_runs.push_back(std::move(a));
  }
  return o;
}

// ---- 5 -------------------------------------------------------------------

Outcome measurement() {
  Outcome o{Verdict::Pass, ""};
  double worst_formula = 0.0;
  int multi = 0;
  for (const auto& r : g_runs) {
    const auto& rep = r.report;
    const double eps = rep.measurement.epsilon;
    const double p_l = static_cast<double>(enumerate_pool(rep.norb).size());
    double m_oe = 0.0;
    for (const auto& s : rep.stages)
      m_oe += s.ops_appended * static_cast<double>(enumerate_pool(s.norb).size()) / (eps * eps);
    const double m_base = rep.total_ops * p_l / (eps * eps);
    worst_formula = std::max({worst_formula, std::abs(rep.measurement.m_full_pool - m_base),
                              std::abs(rep.measurement.m_total - m_oe)});
    int active = 0;
    for (const auto& s : rep.stages) active += s.norb < rep.norb && s.ops_appended > 0;
    if (active == 0) continue;
    ++multi;
    if (!(m_oe < m_base)) o.verdict = Verdict::Fail;
    int lo = rep.total_ops, hi = 0;
    for (const auto& s : rep.stages) lo = std::min(lo, s.ops_appended), hi = std::max(hi, s.ops_appended);
    o.detail += fmt("%s M_OE/M_base=%.3f bound=%.3f %s (n_i %d..%d); ", r.name.c_str(), rep.measurement.ratio,
                    rep.measurement.ratio_bound, rep.measurement.ratio <= rep.measurement.ratio_bound ? "met" : "not met",
                    lo, hi);
  }
  if (worst_formula != 0.0) o.verdict = Verdict::Fail;
  if (multi == 0) o.verdict = Verdict::Fail;
  o.detail = fmt("eps=1e-3, formula defect %.1e; ", worst_formula) + o.detail + "(bound advisory: it assumes equal n_i)";
  return o;
}

// ---- 6 -------------------------------------------------------------------

Outcome barren_plateau() {
  std::vector<BpResult> rows;
  bool mean_ok = true;
  std::string detail;
  for (int n : {4, 6, 8}) {
    BpOptions o;
    o.n_qubits = n;
    o.n_hamiltonians = 2000;
    o.seed = 1 + static_cast<std::uint64_t>(n);
    rows.push_back(bp_variance_experiment(o));
    const auto& r = rows.back();
    if (std::abs(r.mean) > 3 * r.mean_std_error) mean_ok = false;
    detail += fmt("n=%d var=%.3e mean=%.1e (SE %.1e); ", n, r.variance, r.mean, r.mean_std_error);
  }
  const double slope = bp_log2_slope(rows);
  const bool ok = mean_ok && slope <= -1.6 && slope >= -2.4;
  return {ok ? Verdict::Pass : Verdict::Fail, detail + fmt("slope %.3f", slope)};
}

// ---- 7 -------------------------------------------------------------------

Statevector random_state(int norb, int n_occ, std::mt19937_64& rng, int steps) {
  const auto pool = build_pool(norb);
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  std::uniform_real_distribution<double> angle(-1.5, 1.5);
  Statevector psi = reference_state(norb, n_occ, {});
  for (int i = 0; i < steps; ++i) apply_excitation_inplace(psi, pool[pick(rng)], angle(rng));
  return psi;
}

double max_diff(const Statevector& a, const Statevector& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

Outcome simulator() {
  std::mt19937_64 rng(2026);
  std::uniform_real_distribution<double> angle(-3.2, 3.2);

  double exp_err = 0.0;
  for (int draw = 0; draw < 200; ++draw) {
    const int norb = 2 + draw % 3;  // 4, 6, 8 qubits
    const auto pool = build_pool(norb);
    const auto psi = random_state(norb, 1 + draw % 2, rng, 4);
    const auto& op = pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)];
    const double th = angle(rng);
    exp_err = std::max(exp_err, max_diff(apply_excitation(psi, op, th), dense_exponential(psi, op, th)));
  }

  double grad_err = 0.0;
  for (const char* name : {"h4_1.00", "h6_2.00"}) {
    const auto ints = fx::load(name);
    const auto h = full_space(ints);
    const auto pool = build_pool(h.norb);
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    std::uniform_real_distribution<double> small(-0.4, 0.4);
    Direction d;
    for (int i = 0; i < 12; ++i) d.records.push_back({pool[pick(rng)], small(rng), 0});
    const auto psi0 = reference_state(h);
    const auto g = energy_gradient(d, psi0, h);
    const double step = 1e-5;
    for (std::size_t i = 0; i < d.size(); ++i) {
      Direction p = d, m = d;
      p.records[i].theta += step;
      m.records[i].theta -= step;
      const double fd = (expectation(prepare_state(p, psi0), h) - expectation(prepare_state(m, psi0), h)) / (2 * step);
      grad_err = std::max(grad_err, std::abs(fd - g[i]));
    }
    const auto psi = prepare_state(d, psi0);
    for (int i = 0; i < 20; ++i) {
      const auto& op = pool[pick(rng)];
      const double fd =
          (expectation(apply_excitation(psi, op, step), h) - expectation(apply_excitation(psi, op, -step), h)) / (2 * step);
      grad_err = std::max(grad_err, std::abs(fd - pool_gradient(psi, h, op)));
    }
  }

  double cons_err = 0.0;
  {
    const auto pool = build_pool(4);
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    Statevector psi = reference_state(4, 2, {});
    for (int i = 0; i < 1000; ++i) {
      apply_excitation_inplace(psi, pool[pick(rng)], angle(rng));
      cons_err = std::max({cons_err, std::abs(psi.norm() - 1.0), std::abs(number_expectation(psi) - 4.0),
                           std::abs(sz_expectation(psi))});
    }
  }

  double tail_err = 0.0;
  {
    const auto ints = fx::load("h6_1.00");
    const auto ranked = rank_environment(ints, build_bath(run_rhf(ints).density, FragmentSpec{{2, 3}}));
    for (int n_s = 0; n_s < ranked.n_env(); ++n_s) {
      const auto h0 = stage_hamiltonian(ints, ranked, n_s);
      const std::vector<EnvClass> add{ranked.env_class[static_cast<std::size_t>(n_s)]};
      const auto pool = build_pool(h0.norb);
      std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
      Direction d;
      for (int i = 0; i < 15; ++i) d.records.push_back({pool[pick(rng)], angle(rng), 0});
      const auto ref = reference_state(h0);
      tail_err = std::max(tail_err, max_diff(extend_register(prepare_state(d, ref), add),
                                             prepare_state(d, extend_register(ref, add))));
      tail_err = std::max(tail_err, max_diff(extend_register(ref, add),
                                             reference_state(stage_hamiltonian(ints, ranked, n_s + 1))));
    }
  }

  const bool ok = exp_err <= 1e-10 && grad_err <= 1e-6 && cons_err <= 1e-10 && tail_err <= 1e-12;
  return {ok ? Verdict::Pass : Verdict::Fail,
          fmt("exp %.1e, grad %.1e, conservation %.1e, tail %.1e", exp_err, grad_err, cons_err, tail_err)};
}

// ---- 8 -------------------------------------------------------------------

Outcome nitrogen() {
  const char* flag = std::getenv("OEVQE_EXTENDED");
  if (!flag || std::string(flag) != "1") return {Verdict::Skip, "extended; set OEVQE_EXTENDED=1"};
  SolverConfig cfg;
  cfg.grad_threshold = 1e-6;
  cfg.max_ops_total = 100;
  const Run b = timed_adapt("n2_0.80", cfg);
  const double eb = std::abs(b.report.e_final - b.e_fci);
  // the sigma bond pair of 2p_z orbitals as the impurity
  Run a = timed_oe("n2_0.80", FragmentSpec{{4, 9}}, cfg);
  int reached = -1, count = 0;
  for (const auto& s : a.report.stages) {
    for (double e : s.energy_trace) {
      ++count;
      if (reached < 0 && s.norb == a.report.norb && std::abs(e - a.e_fci) <= eb) reached = count;
    }
  }
  const bool order = eb > 1.07e-4 && eb < 1.07e-2;
  const bool fewer = reached > 0 && reached < b.report.total_ops;
  g_runs.push_back(a);
  return {order && fewer ? Verdict::Pass : Verdict::Fail,
          fmt("ADAPT err %.3e with %d ops (%.0fs); OE reaches it at op %d (%.0fs)", eb, b.report.total_ops, b.seconds,
              reached, a.seconds)};
}

}  // namespace

int main() {
  // 2 and 5 audit the runs made by 1, 4 and 8, so those go first.
  const std::pair<int, std::function<Outcome()>> criteria[] = {
      {1, exactness}, {4, oe_beats_adapt}, {8, nitrogen},      {2, hf_consistency},
      {3, embedding_structure}, {5, measurement}, {6, barren_plateau}, {7, simulator}};
  std::map<int, Outcome> results;
  for (const auto& [id, fn] : criteria) {
    std::fprintf(stderr, "running criterion %d\n", id);
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {Verdict::Fail, std::string("exception: ") + e.what()};
    }
    results[id] = o;
  }
  int failures = 0;
  for (const auto& [id, o] : results) {
    const char* v = o.verdict == Verdict::Pass ? "PASS" : o.verdict == Verdict::Skip ? "SKIP" : "FAIL";
    std::printf("criterion %d: %s %s\n", id, v, o.detail.c_str());
    failures += o.verdict == Verdict::Fail;
  }
  return failures == 0 ? 0 : 1;
}
