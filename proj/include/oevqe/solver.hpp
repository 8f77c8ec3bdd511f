// Copyright 2026 The OE-VQE Authors
// SPDX-License-Identifier: Apache-2.0

/// Orbital-expansion ADAPT-VQE.
///
/// A run solves the impurity first and then appends ranked environment
/// orbitals one stage at a time. Each stage warm-starts from the previous
/// circuit on the enlarged register, screens the operators that touch the new
/// orbitals and grows the circuit until the largest gradient drops below the
/// stage threshold or the operator budget is spent.

#pragma once

#include "oevqe/common.hpp"
#include "oevqe/embedding.hpp"
#include "oevqe/fermisim.hpp"
#include "oevqe/integrals.hpp"
#include "oevqe/projection.hpp"
#include "oevqe/ranking.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace oevqe {

// ---- pools ----------------------------------------------------------------

/// Every S_z-preserving single and double over 2k spin orbitals, one generator
/// per +/- pair, in canonical order.
std::vector<ExcitationOp> build_pool(int k);

/// Elements of build_pool(k) that touch spatial orbital k - 1.
std::vector<ExcitationOp> incremental_pool(int k);

/// Elements of build_pool(k_new) touching any orbital >= k_old.
std::vector<ExcitationOp> pool_difference(int k_old, int k_new);

/// |build_pool(k)| in closed form.
long long pool_size(int k);

/// Occupied -> unoccupied singles and doubles of a reference determinant.
std::vector<ExcitationOp> uccsd_operators(const Statevector& reference);

// ---- circuit --------------------------------------------------------------

struct DirectionRecord {
  ExcitationOp op;
  double theta = 0.0;
  int stage = 0;
};

/// The accumulated circuit; records are applied in order, first one first.
struct Direction {
  std::vector<DirectionRecord> records;

  std::size_t size() const { return records.size(); }
  bool empty() const { return records.empty(); }
  std::vector<ExcitationOp> ops() const;
  std::vector<double> thetas() const;
  void set_thetas(const Vector& t);
};

Statevector prepare_state(const Direction& dir, const Statevector& psi0);

/// dE/dtheta for every record, by one forward and one adjoint sweep.
std::vector<double> energy_gradient(const Direction& dir, const Statevector& psi0,
                                    const SubspaceHamiltonian& h);

// ---- optimizer ------------------------------------------------------------

/// Returns f(theta) and writes the gradient into `grad`.
using Objective = std::function<double(const Vector& theta, Vector& grad)>;

struct BfgsOptions {
  double tol = 1e-9;  ///< on the gradient infinity norm
  int max_iter = 500;
  /// A line search that collapses while ||g||_inf is below this is treated as
  /// having reached the noise floor of f rather than as a failure.
  double stall_tol = 1e-5;
};

struct BfgsResult {
  Vector theta;
  double f = 0.0;
  double grad_inf = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
};

/// Thrown when the line search cannot bracket a step far from stationarity.
class OptimizerError : public NumericalError {
 public:
  OptimizerError(const std::string& what, BfgsResult best) : NumericalError(what), best_(std::move(best)) {}
  const BfgsResult& best() const { return best_; }

 private:
  BfgsResult best_;
};

BfgsResult bfgs_minimize(const Objective& fg, const Vector& theta0, const BfgsOptions& opts = {});

// ---- configuration and reports -------------------------------------------

enum class AnsatzKind { Adapt, Uccsd };

struct SolverConfig {
  double grad_threshold = 1e-3;
  /// Per-entry override of grad_threshold, aligned with stage_schedule.
  std::vector<double> stage_thresholds;
  int max_ops_total = 100;
  int max_ops_per_stage = -1;  ///< negative: unlimited
  double bfgs_tol = 1e-9;
  int bfgs_max_iter = 500;
  bool reopt_all = true;
  /// N_s values to visit in increasing order; empty means 0..N.
  std::vector<int> stage_schedule;
  double measurement_epsilon = 1e-3;
  double bath_delta = 1e-6;
  AnsatzKind ansatz = AnsatzKind::Adapt;

  void validate() const;
  double threshold_at(std::size_t position) const;
};

struct StageRecord {
  int n_s = 0;
  int norb = 0;              ///< k, orbitals in the stage register
  int n_elec = 0;
  std::vector<EnvClass> appended;
  long long pool_screened = 0;
  long long pool_full = 0;   ///< |build_pool(k)|
  int ops_appended = 0;
  double threshold = 0.0;
  double e_reference = 0.0;  ///< total energy of the stage reference determinant
  double e_warm = 0.0;       ///< total energy of the warm start
  double e_sub = 0.0;
  double e_core = 0.0;
  double e_nuc = 0.0;
  double e_g = 0.0;
  std::vector<double> grad_max;      ///< largest |gradient| at each screening
  std::vector<double> energy_trace;  ///< E_g after each append
  std::vector<std::string> selected;
  int bfgs_iterations = 0;
  double wall_seconds = 0.0;
  bool budget_exhausted = false;
};

struct MeasurementSummary {
  double epsilon = 1e-3;
  double m_total = 0.0;               ///< sum_i n_i |P(k_i)| / eps^2
  std::vector<double> per_stage;
  double m_full_pool = 0.0;           ///< same operators priced at |P(L)|
  double ratio = 0.0;                 ///< m_total / m_full_pool
  double ratio_bound = 0.0;       ///< 1 / ((L - L_imp) ln 4), 0 if L = L_imp
  double modeled_ratio = 0.0;         ///< sum n_i k_i^4 4^k_i / (K L^4 4^L)
};

struct BaselineComparison {
  double e_final = 0.0;
  int operators = 0;
  double m_total = 0.0;
};

struct RunReport {
  std::string mode;
  std::string label;
  int norb = 0;
  int n_elec = 0;
  std::vector<int> fragment;
  int n_frag = 0, n_bath = 0, n_core = 0, n_vir = 0;
  int scf_iterations = 0;
  double e_hf = 0.0;
  double e_nuc = 0.0;
  std::vector<double> delta_lambda;
  std::vector<EnvClass> env_class;
  std::vector<StageRecord> stages;
  Direction direction;
  int total_ops = 0;
  double e_final = 0.0;
  MeasurementSummary measurement;
  std::optional<double> e_fci;
  std::optional<BaselineComparison> baseline;
  std::string failure;  ///< set when a stage aborted; stages hold the partial run
};

// ---- stages and runs ------------------------------------------------------

struct StageLimits {
  double threshold = 1e-3;
  int max_new_ops = -1;  ///< negative: unlimited
  int stage = 0;
};

struct StageResult {
  Direction direction;
  double e_sub = 0.0;
  double e_warm = 0.0;
  std::vector<double> grad_max;
  std::vector<double> e_trace;  ///< E_sub after each append
  std::vector<std::string> selected;
  int appended = 0;
  int bfgs_iterations = 0;
  bool budget_exhausted = false;
};

/// Gradient-screened growth of `warm` with operators from `pool` on the stage
/// Hamiltonian; argmax ties go to the earliest pool entry.
StageResult adapt_stage(const SubspaceHamiltonian& h, const Direction& warm,
                        const std::vector<ExcitationOp>& pool, const SolverConfig& cfg,
                        const StageLimits& limits);

/// Appends every occupied -> unoccupied single and double of the stage
/// reference not already in `warm` (doubles first), starting at zero, and
/// optimizes them jointly (all parameters when reopt_all).
StageResult uccsd_stage(const SubspaceHamiltonian& h, const Direction& warm, const SolverConfig& cfg,
                        int stage);

/// The orbital-expansion pipeline. Throws on invalid input; a failing stage
/// rethrows as RunError carrying the partial report.
RunReport oe_run(const IntegralSet& ints, const FragmentSpec& frag, const SolverConfig& cfg);

/// Plain ADAPT on the full space in the canonical Hartree-Fock orbital basis:
/// oe_run with every orbital in the fragment. Its single stage always uses
/// grad_threshold; per-stage overrides are ignored.
RunReport adapt_run(const IntegralSet& ints, const SolverConfig& cfg);

class RunError : public NumericalError {
 public:
  RunError(const std::string& what, RunReport partial) : NumericalError(what), partial_(std::move(partial)) {}
  const RunReport& partial() const { return partial_; }

 private:
  RunReport partial_;
};

MeasurementSummary measurement_accounting(const RunReport& report, const SolverConfig& cfg);

}  // namespace oevqe
