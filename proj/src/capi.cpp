// Copyright 2026 The OE-VQE Authors
// SPDX-License-Identifier: Apache-2.0

#include "oevqe/oevqe.h"

#include "oevqe/oracle.hpp"
#include "oevqe/ranking.hpp"
#include "oevqe/report.hpp"
#include "oevqe/scf.hpp"
#include "oevqe/solver.hpp"

#include <json.hpp>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

using namespace oevqe;

namespace {

thread_local std::string g_last_error;

struct Settings {
  std::string mode = "oe-adapt";
  std::vector<int> fragment;
  SolverConfig solver;
  bool baseline = false;
  bool fci_reference = true;
  std::uint64_t seed = 1;
  int jobs = 1;
  std::vector<int> bp_qubits{4, 6, 8};
  int bp_samples = 2000;
};

}  // namespace

struct oevqe_integrals {
  IntegralSet ints;
};

struct oevqe_config {
  Settings s;
};

struct oevqe_result {
  bool has_energy = false;
  double energy = 0.0;
  int operators = 0;
  std::string json;
  std::string summary;
  std::map<std::string, std::string> tables;
};

namespace {

oevqe_status fail(oevqe_status code, const std::string& msg) {
  g_last_error = msg;
  return code;
}

template <class F>
oevqe_status guarded(F&& f) {
  try {
    g_last_error.clear();
    return f();
  } catch (const InputError& e) {
    return fail(OEVQE_INPUT_ERROR, e.what());
  } catch (const NumericalError& e) {
    return fail(OEVQE_NUMERICAL_ERROR, e.what());
  } catch (const std::bad_alloc&) {
    return fail(OEVQE_NUMERICAL_ERROR, "out of memory");
  } catch (const std::exception& e) {
    return fail(OEVQE_NUMERICAL_ERROR, e.what());
  }
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size()) throw InputError("'" + key + "' expects a number, got '" + v + "'");
  return x;
}

long long parse_int(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  long long x = 0;
  try {
    x = std::stoll(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size()) throw InputError("'" + key + "' expects an integer, got '" + v + "'");
  return x;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw InputError("'" + key + "' expects a boolean, got '" + v + "'");
}

template <class T, class P>
std::vector<T> parse_list(const std::string& key, const std::string& v, P parse) {
  std::vector<T> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw InputError("'" + key + "' has an empty list entry");
    out.push_back(static_cast<T>(parse(key, item)));
  }
  return out;
}

void apply_setting(Settings& s, const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  if (key == "mode") {
    static const char* modes[] = {"oe-adapt", "adapt", "oe-uccsd", "fci", "rank", "scf"};
    if (std::find(std::begin(modes), std::end(modes), v) == std::end(modes))
      throw InputError("unknown mode '" + v + "'");
    s.mode = v;
  } else if (key == "fragment") {
    s.fragment = parse_list<int>(key, v, parse_int);
    // range needs the integrals; everything else can be checked now
    FragmentSpec{s.fragment}.validate(std::numeric_limits<int>::max());
  } else if (key == "delta") {
    s.solver.bath_delta = parse_double(key, v);
  } else if (key == "grad_threshold") {
    s.solver.grad_threshold = parse_double(key, v);
  } else if (key == "stage_thresholds") {
    s.solver.stage_thresholds = parse_list<double>(key, v, parse_double);
  } else if (key == "stage_schedule") {
    s.solver.stage_schedule = parse_list<int>(key, v, parse_int);
  } else if (key == "budget") {
    s.solver.max_ops_total = static_cast<int>(parse_int(key, v));
  } else if (key == "max_ops_per_stage") {
    s.solver.max_ops_per_stage = static_cast<int>(parse_int(key, v));
  } else if (key == "bfgs_tol") {
    s.solver.bfgs_tol = parse_double(key, v);
  } else if (key == "bfgs_max_iter") {
    s.solver.bfgs_max_iter = static_cast<int>(parse_int(key, v));
  } else if (key == "reopt_all") {
    s.solver.reopt_all = parse_bool(key, v);
  } else if (key == "measurement_epsilon") {
    s.solver.measurement_epsilon = parse_double(key, v);
  } else if (key == "baseline") {
    s.baseline = parse_bool(key, v);
  } else if (key == "fci_reference") {
    s.fci_reference = parse_bool(key, v);
  } else if (key == "seed") {
    s.seed = static_cast<std::uint64_t>(parse_int(key, v));
  } else if (key == "jobs") {
    s.jobs = static_cast<int>(parse_int(key, v));
    if (s.jobs < 1) throw InputError("'jobs' must be at least 1");
  } else if (key == "bp_qubits") {
    s.bp_qubits = parse_list<int>(key, v, parse_int);
  } else if (key == "bp_samples") {
    s.bp_samples = static_cast<int>(parse_int(key, v));
  } else {
    throw InputError("unknown configuration key '" + key + "'");
  }
  s.solver.validate();
}

SolverConfig solver_config(const Settings& s) {
  SolverConfig c = s.solver;
  c.ansatz = s.mode == "oe-uccsd" ? AnsatzKind::Uccsd : AnsatzKind::Adapt;
  return c;
}

FragmentSpec fragment_of(const Settings& s) {
  if (s.fragment.empty()) throw InputError("mode '" + s.mode + "' needs a fragment");
  return FragmentSpec{s.fragment};
}

std::string summary_line(const RunReport& r) {
  std::ostringstream os;
  os << "E_g = " << format_energy(r.e_final) << " Ha, operators = " << r.total_ops;
  if (r.e_fci) os << ", E_fci = " << format_energy(*r.e_fci) << ", error = " << format_energy(r.e_final - *r.e_fci);
  if (r.baseline)
    os << ", baseline E = " << format_energy(r.baseline->e_final) << " (" << r.baseline->operators << " operators)";
  return os.str();
}

void fill_from_report(oevqe_result& res, const RunReport& r) {
  res.has_energy = true;
  res.energy = r.e_final;
  res.operators = r.total_ops;
  res.json = report_json(r);
  res.summary = summary_line(r);
  res.tables["stages"] = stage_csv(r);
  res.tables["ranking"] = ranking_csv(r);
}

RunReport pipeline(const IntegralSet& ints, const Settings& s) {
  const SolverConfig cfg = solver_config(s);
  RunReport rep = s.mode == "adapt" ? adapt_run(ints, cfg) : oe_run(ints, fragment_of(s), cfg);
  if (s.fci_reference && ints.norb <= 10) rep.e_fci = fci_ground_state(ints).energy;
  if (s.baseline && s.mode != "adapt") {
    const RunReport base = adapt_run(ints, cfg);
    rep.baseline = BaselineComparison{base.e_final, base.total_ops, base.measurement.m_total};
  }
  return rep;
}

oevqe_status run_mode(const IntegralSet& ints, const Settings& s, oevqe_result& res) {
  if (s.mode == "scf") {
    const RhfSolution sol = run_rhf(ints);
    nlohmann::json j = {{"schema", "oevqe.scf"}, {"version", kReportSchemaVersion}, {"label", ints.label},
                        {"e_hf", sol.energy}, {"iterations", sol.iterations},
                        {"orbital_energies", std::vector<double>(sol.orbital_energies.data(), sol.orbital_energies.data() + sol.orbital_energies.size())}};
    res.has_energy = true;
    res.energy = sol.energy;
    res.json = j.dump(2) + "\n";
    res.summary = "E_hf = " + format_energy(sol.energy) + " Ha, iterations = " + std::to_string(sol.iterations);
    return OEVQE_OK;
  }
  if (s.mode == "fci") {
    const FciResult f = fci_ground_state(ints);
    nlohmann::json j = {{"schema", "oevqe.fci"}, {"version", kReportSchemaVersion}, {"label", ints.label},
                        {"e_fci", f.energy}, {"dimension", f.dimension}, {"iterations", f.iterations}};
    res.has_energy = true;
    res.energy = f.energy;
    res.json = j.dump(2) + "\n";
    res.summary = "E_fci = " + format_energy(f.energy) + " Ha, determinants = " + std::to_string(f.dimension);
    return OEVQE_OK;
  }
  if (s.mode == "rank") {
    const FragmentSpec frag = fragment_of(s);
    frag.validate(ints.norb);
    const RhfSolution sol = run_rhf(ints);
    const EmbeddingBasis basis = build_bath(sol.density, frag, s.solver.bath_delta);
    const RankedBasis ranked = rank_environment(ints, basis);
    RunReport r;
    r.mode = "rank";
    r.label = ints.label;
    r.norb = ints.norb;
    r.n_elec = ints.n_elec;
    r.fragment = frag.indices;
    r.n_frag = basis.n_frag();
    r.n_bath = basis.n_bath();
    r.n_core = basis.n_core();
    r.n_vir = basis.n_vir();
    r.e_hf = r.e_final = sol.energy;
    r.scf_iterations = sol.iterations;
    r.e_nuc = ints.e_nuc;
    r.delta_lambda.assign(ranked.delta_lambda.data(), ranked.delta_lambda.data() + ranked.delta_lambda.size());
    r.env_class = ranked.env_class;
    fill_from_report(res, r);
    std::ostringstream os;
    os << "L_A = " << r.n_frag << ", L_B = " << r.n_bath << ", core = " << r.n_core << ", virtual = " << r.n_vir;
    res.summary = os.str();
    return OEVQE_OK;
  }
  try {
    fill_from_report(res, pipeline(ints, s));
  } catch (const RunError& e) {
    fill_from_report(res, e.partial());
    throw;
  }
  return OEVQE_OK;
}

}  // namespace

extern "C" {

const char* oevqe_version(void) { return "1.0.0"; }

const char* oevqe_last_error(void) { return g_last_error.c_str(); }

oevqe_status oevqe_integrals_load(const char* path, oevqe_integrals** out) {
  return guarded([&] {
    if (!path || !out) throw InputError("null argument");
    *out = nullptr;
    auto h = std::make_unique<oevqe_integrals>();
    h->ints = read_fcidump(path);
    *out = h.release();
    return OEVQE_OK;
  });
}

oevqe_status oevqe_integrals_info(const oevqe_integrals* ints, int* norb, int* n_elec, double* e_nuc) {
  return guarded([&] {
    if (!ints) throw InputError("null integrals handle");
    if (norb) *norb = ints->ints.norb;
    if (n_elec) *n_elec = ints->ints.n_elec;
    if (e_nuc) *e_nuc = ints->ints.e_nuc;
    return OEVQE_OK;
  });
}

void oevqe_integrals_free(oevqe_integrals* ints) { delete ints; }

oevqe_status oevqe_config_new(oevqe_config** out) {
  return guarded([&] {
    if (!out) throw InputError("null argument");
    *out = new oevqe_config();
    return OEVQE_OK;
  });
}

oevqe_status oevqe_config_set(oevqe_config* cfg, const char* key, const char* value) {
  return guarded([&] {
    if (!cfg || !key || !value) throw InputError("null argument");
    Settings next = cfg->s;
    apply_setting(next, key, value);
    cfg->s = std::move(next);
    return OEVQE_OK;
  });
}

oevqe_status oevqe_config_load(oevqe_config* cfg, const char* path) {
  return guarded([&] {
    if (!cfg || !path) throw InputError("null argument");
    std::ifstream in(path);
    if (!in) throw InputError(std::string("cannot open config file ") + path);
    Settings next = cfg->s;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      line = trim(line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        throw InputError(std::string(path) + ":" + std::to_string(lineno) + ": expected key = value");
      try {
        apply_setting(next, trim(line.substr(0, eq)), line.substr(eq + 1));
      } catch (const InputError& e) {
        throw InputError(std::string(path) + ":" + std::to_string(lineno) + ": " + e.what());
      }
    }
    cfg->s = std::move(next);
    return OEVQE_OK;
  });
}

void oevqe_config_free(oevqe_config* cfg) { delete cfg; }

oevqe_status oevqe_run(const oevqe_integrals* ints, const oevqe_config* cfg, oevqe_result** out) {
  if (out) *out = nullptr;
  auto res = std::make_unique<oevqe_result>();
  const oevqe_status st = guarded([&] {
    if (!ints || !cfg || !out) throw InputError("null argument");
    return run_mode(ints->ints, cfg->s, *res);
  });
  if (out && (st == OEVQE_OK || !res->json.empty())) *out = res.release();
  return st;
}

oevqe_status oevqe_bp_variance(const oevqe_config* cfg, oevqe_result** out) {
  if (out) *out = nullptr;
  return guarded([&] {
    if (!cfg || !out) throw InputError("null argument");
    const Settings& s = cfg->s;
    if (s.bp_qubits.empty()) throw InputError("no qubit counts for the variance experiment");
    std::vector<BpResult> rows;
    for (int n : s.bp_qubits) {
      BpOptions o;
      o.n_qubits = n;
      o.n_hamiltonians = s.bp_samples;
      o.seed = s.seed + static_cast<std::uint64_t>(n);
      rows.push_back(bp_variance_experiment(o));
    }
    auto res = std::make_unique<oevqe_result>();
    nlohmann::json j = {{"schema", "oevqe.bp"}, {"version", kReportSchemaVersion}, {"seed", s.seed}};
    j["rows"] = nlohmann::json::array();
    for (const auto& r : rows)
      j["rows"].push_back({{"n_qubits", r.n_qubits}, {"mean", r.mean}, {"variance", r.variance},
                           {"n_samples", r.n_samples}, {"n_hamiltonians", r.n_hamiltonians},
                           {"mean_std_error", r.mean_std_error}});
    std::ostringstream sum;
    if (rows.size() >= 2) {
      const double slope = bp_log2_slope(rows);
      j["log2_slope"] = slope;
      sum << "log2(variance) slope = " << format_energy(slope) << " per qubit";
    } else {
      j["log2_slope"] = nullptr;
      sum << "variance = " << format_energy(rows[0].variance);
    }
    res->json = j.dump(2) + "\n";
    res->tables["bp"] = bp_csv(rows);
    res->summary = sum.str();
    *out = res.release();
    return OEVQE_OK;
  });
}

oevqe_status oevqe_curve(const char* manifest_path, const oevqe_config* cfg, oevqe_result** out) {
  if (out) *out = nullptr;
  return guarded([&]() -> oevqe_status {
    if (!manifest_path || !cfg || !out) throw InputError("null argument");
    std::ifstream in(manifest_path);
    if (!in) throw InputError(std::string("cannot open manifest ") + manifest_path);
    const std::filesystem::path base = std::filesystem::path(manifest_path).parent_path();
    std::vector<CurvePoint> points;
    std::string line;
    while (std::getline(in, line)) {
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      line = trim(line);
      if (line.empty()) continue;
      std::istringstream ls(line);
      CurvePoint p;
      if (!(ls >> p.distance >> p.path)) throw InputError("manifest line '" + line + "' is not 'distance path'");
      if (std::filesystem::path(p.path).is_relative()) p.path = (base / p.path).string();
      if (!std::filesystem::exists(p.path)) throw InputError("manifest entry " + p.path + " does not exist");
      points.push_back(p);
    }
    if (points.empty()) throw InputError("manifest is empty");
    Settings s = cfg->s;
    if (s.mode != "oe-adapt" && s.mode != "oe-uccsd" && s.mode != "adapt")
      throw InputError("curve runs need mode oe-adapt, oe-uccsd or adapt");

    std::vector<std::string> errors(points.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t i = next++; i < points.size(); i = next++) {
        try {
          const IntegralSet ints = read_fcidump(points[i].path);
          Settings local = s;
          local.fci_reference = false;
          local.baseline = false;
          const RunReport rep = pipeline(ints, local);
          points[i].e_oe = rep.e_final;
          points[i].ops_oe = rep.total_ops;
          points[i].m_oe = rep.measurement.m_total;
          points[i].e_fci = fci_ground_state(ints).energy;
          if (s.baseline) {
            const RunReport base = adapt_run(ints, solver_config(s));
            points[i].has_baseline = true;
            points[i].e_adapt = base.e_final;
            points[i].ops_adapt = base.total_ops;
            points[i].m_adapt = base.measurement.m_total;
          }
        } catch (const std::exception& e) {
          errors[i] = points[i].path + ": " + e.what();
        }
      }
    };
    std::vector<std::thread> pool;
    const int jobs = std::max(1, std::min<int>(s.jobs, static_cast<int>(points.size())));
    for (int t = 1; t < jobs; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    std::vector<CurvePoint> done;
    std::string first_error;
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (!errors[i].empty()) {
        first_error = errors[i];
        break;
      }
      done.push_back(points[i]);
    }
    auto res = std::make_unique<oevqe_result>();
    res->tables["curve"] = curve_csv(done, s.baseline);
    nlohmann::json j = {{"schema", "oevqe.curve"}, {"version", kReportSchemaVersion}, {"points", nlohmann::json::array()}};
    for (const auto& p : done) {
      nlohmann::json row = {{"distance", p.distance}, {"path", p.path}, {"e_oe", p.e_oe}, {"e_fci", p.e_fci},
                            {"ops_oe", p.ops_oe}, {"m_oe", p.m_oe}};
      if (p.has_baseline) {
        row["e_adapt"] = p.e_adapt;
        row["ops_adapt"] = p.ops_adapt;
        row["m_adapt"] = p.m_adapt;
      }
      j["points"].push_back(row);
    }
    res->json = j.dump(2) + "\n";
    res->summary = std::to_string(done.size()) + " of " + std::to_string(points.size()) + " points";
    *out = res.release();
    if (!first_error.empty()) return fail(OEVQE_NUMERICAL_ERROR, first_error);
    return OEVQE_OK;
  });
}

oevqe_status oevqe_report_load(const char* json_path, oevqe_result** out) {
  if (out) *out = nullptr;
  return guarded([&] {
    if (!json_path || !out) throw InputError("null argument");
    std::ifstream in(json_path);
    if (!in) throw InputError(std::string("cannot open report ") + json_path);
    std::stringstream buf;
    buf << in.rdbuf();
    const RunReport r = report_from_json(buf.str());
    const double err = rederivation_error(r);
    if (err > 1e-12) throw NumericalError("stage energies differ from their parts by " + format_energy(err));
    auto res = std::make_unique<oevqe_result>();
    fill_from_report(*res, r);
    *out = res.release();
    return OEVQE_OK;
  });
}

oevqe_status oevqe_result_energy(const oevqe_result* res, double* energy) {
  return guarded([&] {
    if (!res || !energy) throw InputError("null argument");
    if (!res->has_energy) throw InputError("result carries no energy");
    *energy = res->energy;
    return OEVQE_OK;
  });
}

oevqe_status oevqe_result_operator_count(const oevqe_result* res, int* count) {
  return guarded([&] {
    if (!res || !count) throw InputError("null argument");
    *count = res->operators;
    return OEVQE_OK;
  });
}

const char* oevqe_result_json(const oevqe_result* res) { return res ? res->json.c_str() : ""; }

const char* oevqe_result_csv(const oevqe_result* res, const char* table) {
  if (!res || !table) return "";
  const auto it = res->tables.find(table);
  return it == res->tables.end() ? "" : it->second.c_str();
}

const char* oevqe_result_summary(const oevqe_result* res) { return res ? res->summary.c_str() : ""; }

void oevqe_result_free(oevqe_result* res) { delete res; }

}  // extern "C"
