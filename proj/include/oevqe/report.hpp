// Copyright 2026 The OE-VQE Authors
// SPDX-License-Identifier: Apache-2.0

/// Machine-readable run reports.
///
/// JSON reports carry doubles at round-trip precision so every stage energy
/// can be re-derived from its parts. CSV tables and console output use 12
/// significant digits.

#pragma once

#include "oevqe/oracle.hpp"
#include "oevqe/solver.hpp"

#include <string>
#include <vector>

namespace oevqe {

inline constexpr int kReportSchemaVersion = 1;

/// "%.12g"
std::string format_energy(double e);

std::string report_json(const RunReport& report);

/// Inverse of report_json for the fields needed to re-check energies; the
/// circuit is restored as labels only (stage records keep `selected`).
RunReport report_from_json(const std::string& text);

/// max over stages of |e_g - (e_sub + e_core + e_nuc)|
double rederivation_error(const RunReport& report);

/// n_s, norb, n_elec, ops, pool, e_reference, e_sub, e_core, e_nuc, e_g, error
std::string stage_csv(const RunReport& report);

/// rank, class, delta_lambda
std::string ranking_csv(const RunReport& report);

std::string bp_csv(const std::vector<BpResult>& rows);

struct CurvePoint {
  double distance = 0.0;
  std::string path;
  double e_oe = 0.0;
  double e_fci = 0.0;
  int ops_oe = 0;
  double m_oe = 0.0;
  bool has_baseline = false;
  double e_adapt = 0.0;
  int ops_adapt = 0;
  double m_adapt = 0.0;
};

std::string curve_csv(const std::vector<CurvePoint>& points, bool baseline);

}  // namespace oevqe
