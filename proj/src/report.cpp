// Copyright 2026 The OE-VQE Authors
// SPDX-License-Identifier: Apache-2.0

#include "oevqe/report.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <sstream>

namespace oevqe {

using nlohmann::json;

std::string format_energy(double e) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", e);
  return buf;
}

namespace {

json stage_to_json(const StageRecord& s) {
  json tags = json::array();
  for (EnvClass c : s.appended) tags.push_back(to_string(c));
  return {{"n_s", s.n_s},
          {"norb", s.norb},
          {"n_elec", s.n_elec},
          {"appended", tags},
          {"pool_screened", s.pool_screened},
          {"pool_full", s.pool_full},
          {"ops_appended", s.ops_appended},
          {"threshold", s.threshold},
          {"e_reference", s.e_reference},
          {"e_warm", s.e_warm},
          {"e_sub", s.e_sub},
          {"e_core", s.e_core},
          {"e_nuc", s.e_nuc},
          {"e_g", s.e_g},
          {"grad_max", s.grad_max},
          {"energy_trace", s.energy_trace},
          {"selected", s.selected},
          {"bfgs_iterations", s.bfgs_iterations},
          {"wall_seconds", s.wall_seconds},
          {"budget_exhausted", s.budget_exhausted}};
}

EnvClass class_from_string(const std::string& s) {
  if (s == "core") return EnvClass::Core;
  if (s == "virtual") return EnvClass::Virtual;
  throw InputError("unknown environment class '" + s + "'");
}

}  // namespace

std::string report_json(const RunReport& r) {
  json ranking = json::array();
  for (std::size_t i = 0; i < r.env_class.size(); ++i)
    ranking.push_back({{"rank", i}, {"class", to_string(r.env_class[i])}, {"delta_lambda", r.delta_lambda[i]}});
  json stages = json::array();
  for (const auto& s : r.stages) stages.push_back(stage_to_json(s));
  json circuit = json::array();
  for (const auto& rec : r.direction.records) {
    std::vector<int> idx(rec.op.idx.begin(), rec.op.idx.begin() + rec.op.arity());
    circuit.push_back({{"op", rec.op.label()},
                       {"kind", rec.op.kind == ExcitationKind::Single ? "single" : "double"},
                       {"indices", idx},
                       {"theta", rec.theta},
                       {"stage", rec.stage}});
  }
  const auto& m = r.measurement;
  json j = {{"schema", "oevqe.report"},
            {"version", kReportSchemaVersion},
            {"mode", r.mode},
            {"label", r.label},
            {"norb", r.norb},
            {"n_elec", r.n_elec},
            {"fragment", r.fragment},
            {"embedding", {{"n_frag", r.n_frag}, {"n_bath", r.n_bath}, {"n_core", r.n_core}, {"n_vir", r.n_vir}}},
            {"scf", {{"e_hf", r.e_hf}, {"iterations", r.scf_iterations}}},
            {"e_nuc", r.e_nuc},
            {"ranking", ranking},
            {"stages", stages},
            {"circuit", circuit},
            {"totals", {{"operators", r.total_ops}, {"e_final", r.e_final}}},
            {"measurement",
             {{"epsilon", m.epsilon},
              {"m_total", m.m_total},
              {"per_stage", m.per_stage},
              {"m_full_pool", m.m_full_pool},
              {"ratio", m.ratio},
              {"ratio_bound", m.ratio_bound},
              {"modeled_ratio", m.modeled_ratio}}}};
  j["totals"]["e_fci"] = r.e_fci ? json(*r.e_fci) : json(nullptr);
  j["totals"]["error"] = r.e_fci ? json(r.e_final - *r.e_fci) : json(nullptr);
  if (r.baseline) {
    j["baseline"] = {{"e_final", r.baseline->e_final},
                     {"operators", r.baseline->operators},
                     {"m_total", r.baseline->m_total}};
  } else {
    j["baseline"] = nullptr;
  }
  j["failure"] = r.failure.empty() ? json(nullptr) : json(r.failure);
  return j.dump(2) + "\n";
}

RunReport report_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InputError(std::string("report is not valid JSON: ") + e.what());
  }
  try {
    if (j.at("schema") != "oevqe.report") throw InputError("not an oevqe report");
    if (j.at("version").get<int>() != kReportSchemaVersion)
      throw InputError("unsupported report version " + j.at("version").dump());
    RunReport r;
    r.mode = j.at("mode");
    r.label = j.at("label");
    r.norb = j.at("norb");
    r.n_elec = j.at("n_elec");
    r.fragment = j.at("fragment").get<std::vector<int>>();
    const auto& emb = j.at("embedding");
    r.n_frag = emb.at("n_frag");
    r.n_bath = emb.at("n_bath");
    r.n_core = emb.at("n_core");
    r.n_vir = emb.at("n_vir");
    r.e_hf = j.at("scf").at("e_hf");
    r.scf_iterations = j.at("scf").at("iterations");
    r.e_nuc = j.at("e_nuc");
    for (const auto& e : j.at("ranking")) {
      r.env_class.push_back(class_from_string(e.at("class")));
      r.delta_lambda.push_back(e.at("delta_lambda"));
    }
    for (const auto& s : j.at("stages")) {
      StageRecord rec;
      rec.n_s = s.at("n_s");
      rec.norb = s.at("norb");
      rec.n_elec = s.at("n_elec");
      for (const auto& t : s.at("appended")) rec.appended.push_back(class_from_string(t));
      rec.pool_screened = s.at("pool_screened");
      rec.pool_full = s.at("pool_full");
      rec.ops_appended = s.at("ops_appended");
      rec.threshold = s.at("threshold");
      rec.e_reference = s.at("e_reference");
      rec.e_warm = s.at("e_warm");
      rec.e_sub = s.at("e_sub");
      rec.e_core = s.at("e_core");
      rec.e_nuc = s.at("e_nuc");
      rec.e_g = s.at("e_g");
      rec.grad_max = s.at("grad_max").get<std::vector<double>>();
      rec.energy_trace = s.at("energy_trace").get<std::vector<double>>();
      rec.selected = s.at("selected").get<std::vector<std::string>>();
      rec.bfgs_iterations = s.at("bfgs_iterations");
      rec.wall_seconds = s.at("wall_seconds");
      rec.budget_exhausted = s.at("budget_exhausted");
      r.stages.push_back(std::move(rec));
    }
    for (const auto& c : j.at("circuit")) {
      const auto idx = c.at("indices").get<std::vector<int>>();
      r.direction.records.push_back({jw_encode(idx, 2 * r.norb), c.at("theta").get<double>(), c.at("stage").get<int>()});
    }
    r.total_ops = j.at("totals").at("operators");
    r.e_final = j.at("totals").at("e_final");
    if (!j.at("totals").at("e_fci").is_null()) r.e_fci = j.at("totals").at("e_fci").get<double>();
    const auto& m = j.at("measurement");
    r.measurement.epsilon = m.at("epsilon");
    r.measurement.m_total = m.at("m_total");
    r.measurement.per_stage = m.at("per_stage").get<std::vector<double>>();
    r.measurement.m_full_pool = m.at("m_full_pool");
    r.measurement.ratio = m.at("ratio");
    r.measurement.ratio_bound = m.at("ratio_bound");
    r.measurement.modeled_ratio = m.at("modeled_ratio");
    if (!j.at("baseline").is_null()) {
      const auto& b = j.at("baseline");
      r.baseline = BaselineComparison{b.at("e_final"), b.at("operators"), b.at("m_total")};
    }
    if (!j.at("failure").is_null()) r.failure = j.at("failure");
    return r;
  } catch (const json::exception& e) {
    throw InputError(std::string("report schema violation: ") + e.what());
  }
}

double rederivation_error(const RunReport& r) {
  double worst = 0.0;
  for (const auto& s : r.stages) worst = std::max(worst, std::abs(s.e_g - assemble_energy(s.e_sub, s.e_core, s.e_nuc)));
  return worst;
}

std::string stage_csv(const RunReport& r) {
  std::ostringstream os;
  os << "n_s,norb,n_elec,ops,pool,e_reference,e_sub,e_core,e_nuc,e_g,error\n";
  for (const auto& s : r.stages) {
    os << s.n_s << ',' << s.norb << ',' << s.n_elec << ',' << s.ops_appended << ',' << s.pool_screened << ','
       << format_energy(s.e_reference) << ',' << format_energy(s.e_sub) << ',' << format_energy(s.e_core) << ','
       << format_energy(s.e_nuc) << ',' << format_energy(s.e_g) << ','
       << (r.e_fci ? format_energy(s.e_g - *r.e_fci) : std::string()) << '\n';
  }
  return os.str();
}

std::string ranking_csv(const RunReport& r) {
  std::ostringstream os;
  os << "rank,class,delta_lambda\n";
  for (std::size_t i = 0; i < r.env_class.size(); ++i)
    os << i << ',' << to_string(r.env_class[i]) << ',' << format_energy(r.delta_lambda[i]) << '\n';
  return os.str();
}

std::string bp_csv(const std::vector<BpResult>& rows) {
  std::ostringstream os;
  os << "n_qubits,mean,variance,n_samples,n_hamiltonians,mean_std_error\n";
  for (const auto& b : rows)
    os << b.n_qubits << ',' << format_energy(b.mean) << ',' << format_energy(b.variance) << ',' << b.n_samples << ','
       << b.n_hamiltonians << ',' << format_energy(b.mean_std_error) << '\n';
  return os.str();
}

std::string curve_csv(const std::vector<CurvePoint>& points, bool baseline) {
  std::ostringstream os;
  os << "distance,E_oe";
  if (baseline) os << ",E_adapt";
  os << ",E_fci,error_oe";
  if (baseline) os << ",error_adapt";
  os << ",ops_oe";
  if (baseline) os << ",ops_adapt";
  os << ",M_oe";
  if (baseline) os << ",M_adapt";
  os << '\n';
  for (const auto& p : points) {
    os << format_energy(p.distance) << ',' << format_energy(p.e_oe);
    if (baseline) os << ',' << format_energy(p.e_adapt);
    os << ',' << format_energy(p.e_fci) << ',' << format_energy(p.e_oe - p.e_fci);
    if (baseline) os << ',' << format_energy(p.e_adapt - p.e_fci);
    os << ',' << p.ops_oe;
    if (baseline) os << ',' << p.ops_adapt;
    os << ',' << format_energy(p.m_oe);
    if (baseline) os << ',' << format_energy(p.m_adapt);
    os << '\n';
  }
  return os.str();
}

}  // namespace oevqe
