// Copyright 2026 The OE-VQE Authors
// SPDX-License-Identifier: Apache-2.0

// oevqe: command-line front end over the C interface.

#include "oevqe/oevqe.h"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iterator>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace {

struct Handles {
  oevqe_config* cfg = nullptr;
  oevqe_integrals* ints = nullptr;
  oevqe_result* res = nullptr;
  ~Handles() {
    oevqe_result_free(res);
    oevqe_integrals_free(ints);
    oevqe_config_free(cfg);
  }
};

int report_error(oevqe_status st) {
  std::cerr << "error: " << oevqe_last_error() << "\n";
  return static_cast<int>(st);
}

struct Common {
  std::string fcidump;
  std::string config;
  std::string json_out;
  std::string stages_csv;
  std::string ranking_csv;
  bool baseline = false;
  bool no_fci = false;
  // Flag values keyed by configuration name; applied after the config file so
  // that flags win.
  std::vector<std::pair<std::string, std::string>> flags;
  std::map<std::string, CLI::Option*> opts;
};

void add_solver_flags(CLI::App* app, Common& c) {
  struct Flag {
    const char* flag;
    const char* key;
    const char* help;
  };
  static const Flag table[] = {
      {"--fragment", "fragment", "fragment orbital indices, e.g. 0,1"},
      {"--delta", "delta", "bath occupation threshold"},
      {"--grad-threshold", "grad_threshold", "gradient threshold of the final stage"},
      {"--stage-thresholds", "stage_thresholds", "per-stage thresholds, comma separated"},
      {"--stage-schedule", "stage_schedule", "environment orbital counts to visit, comma separated"},
      {"--budget", "budget", "total operator budget"},
      {"--max-ops-per-stage", "max_ops_per_stage", "per-stage operator cap"},
      {"--bfgs-tol", "bfgs_tol", "optimizer gradient tolerance"},
      {"--bfgs-max-iter", "bfgs_max_iter", "optimizer iteration limit"},
      {"--reopt-all", "reopt_all", "re-optimize every parameter after each append (true/false)"},
      {"--epsilon", "measurement_epsilon", "measurement accuracy for shot accounting"},
      {"--seed", "seed", "random seed"},
      {"--jobs", "jobs", "worker threads for curve runs"},
  };
  c.flags.reserve(std::size(table));  // CLI11 keeps pointers into this vector
  for (const auto& f : table) {
    c.flags.emplace_back(f.key, std::string());
    c.opts[f.key] = app->add_option(f.flag, c.flags.back().second, f.help);
  }
  app->add_option("--config", c.config, "key = value configuration file")->check(CLI::ExistingFile);
  app->add_flag("--baseline", c.baseline, "also run plain ADAPT for comparison");
}

// Creates the config, loads the file, then applies the flags.
oevqe_status build_config(Common& c, oevqe_config** cfg, const std::string& mode) {
  oevqe_status st = oevqe_config_new(cfg);
  if (st != OEVQE_OK) return st;
  if (!c.config.empty() && (st = oevqe_config_load(*cfg, c.config.c_str())) != OEVQE_OK) return st;
  if (!mode.empty() && (st = oevqe_config_set(*cfg, "mode", mode.c_str())) != OEVQE_OK) return st;
  for (const auto& [key, value] : c.flags) {
    if (c.opts.count(key) && c.opts[key]->count() == 0) continue;
    if ((st = oevqe_config_set(*cfg, key.c_str(), value.c_str())) != OEVQE_OK) return st;
  }
  if (c.baseline && (st = oevqe_config_set(*cfg, "baseline", "true")) != OEVQE_OK) return st;
  if (c.no_fci && (st = oevqe_config_set(*cfg, "fci_reference", "false")) != OEVQE_OK) return st;
  return OEVQE_OK;
}

bool write_file(const std::string& path, const std::string& text) {
  if (path.empty() || text.empty()) return true;
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) {
    std::cerr << "error: cannot write " << path << "\n";
    return false;
  }
  return true;
}

int emit(const oevqe_result* res, const Common& c) {
  bool ok = write_file(c.json_out, oevqe_result_json(res));
  ok = write_file(c.stages_csv, oevqe_result_csv(res, "stages")) && ok;
  ok = write_file(c.ranking_csv, oevqe_result_csv(res, "ranking")) && ok;
  return ok ? 0 : 1;
}

void print_energy(const oevqe_result* res, const char* name) {
  double e = 0.0;
  int ops = 0;
  if (oevqe_result_energy(res, &e) != OEVQE_OK) return;
  std::printf("%s %.12g\n", name, e);
  if (std::string(name) != "E_g") return;
  oevqe_result_operator_count(res, &ops);
  std::printf("operators %d\n", ops);
}

int run_pipeline(Common& c, const std::string& mode, const char* energy_name) {
  Handles h;
  oevqe_status st = build_config(c, &h.cfg, mode);
  if (st != OEVQE_OK) return report_error(st);
  if ((st = oevqe_integrals_load(c.fcidump.c_str(), &h.ints)) != OEVQE_OK) return report_error(st);
  st = oevqe_run(h.ints, h.cfg, &h.res);
  if (h.res) {
    const int io = emit(h.res, c);
    if (st == OEVQE_OK) {
      std::printf("%s\n", oevqe_result_summary(h.res));
      print_energy(h.res, energy_name);
      return io;
    }
  }
  return report_error(st);
}

void add_io(CLI::App* app, Common& c, bool fcidump = true) {
  if (fcidump) app->add_option("--fcidump", c.fcidump, "integral file")->required()->check(CLI::ExistingFile);
  app->add_option("--json", c.json_out, "write the JSON report here");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Orbital-expansion VQE on a statevector simulator", "oevqe"};
  app.require_subcommand(1);
  app.set_version_flag("--version", oevqe_version());

  Common run_c, adapt_c, rank_c, scf_c, fci_c, curve_c;
  std::string run_mode = "oe-adapt";

  auto* run = app.add_subcommand("run", "embedding + orbital-expansion run");
  add_io(run, run_c);
  add_solver_flags(run, run_c);
  run->add_option("--mode", run_mode, "oe-adapt | oe-uccsd | adapt | fci | rank | scf");
  run->add_option("--stages-csv", run_c.stages_csv, "per-stage energy table");
  run->add_option("--ranking-csv", run_c.ranking_csv, "environment ranking table");
  run->add_flag("--no-fci", run_c.no_fci, "skip the exact reference");

  auto* adapt = app.add_subcommand("adapt", "plain ADAPT in the canonical orbital basis");
  add_io(adapt, adapt_c);
  add_solver_flags(adapt, adapt_c);
  adapt->add_option("--stages-csv", adapt_c.stages_csv, "per-stage energy table");
  adapt->add_flag("--no-fci", adapt_c.no_fci, "skip the exact reference");

  auto* rank = app.add_subcommand("rank", "bath construction and environment ranking");
  add_io(rank, rank_c);
  add_solver_flags(rank, rank_c);
  rank->add_option("--csv", rank_c.ranking_csv, "ranking table (stdout if omitted)");

  auto* scf = app.add_subcommand("scf", "restricted Hartree-Fock");
  add_io(scf, scf_c);

  auto* fci = app.add_subcommand("fci", "exact ground state");
  add_io(fci, fci_c);

  std::vector<int> bp_qubits{4, 6, 8};
  int bp_samples = 2000;
  std::uint64_t bp_seed = 1;
  std::string bp_csv, bp_json;
  auto* bp = app.add_subcommand("bp-var", "gradient variance over random Hamiltonians");
  bp->add_option("--qubits", bp_qubits, "qubit counts")->delimiter(',');
  bp->add_option("--samples", bp_samples, "Hamiltonians per qubit count");
  bp->add_option("--seed", bp_seed, "random seed");
  bp->add_option("--csv", bp_csv, "variance table (stdout if omitted)");
  bp->add_option("--json", bp_json, "JSON summary");

  std::string report_path;
  Common report_c;
  auto* report = app.add_subcommand("report", "validate a JSON report and export its tables");
  report->add_option("path", report_path, "report file")->required()->check(CLI::ExistingFile);
  report->add_option("--stages-csv", report_c.stages_csv, "per-stage energy table");
  report->add_option("--ranking-csv", report_c.ranking_csv, "environment ranking table");

  std::string manifest, curve_csv;
  auto* curve = app.add_subcommand("curve", "batch runs over a manifest of bond distances");
  curve->add_option("--manifest", manifest, "lines of 'distance fcidump'")->required()->check(CLI::ExistingFile);
  curve->add_option("--mode", run_mode, "oe-adapt | oe-uccsd | adapt");
  curve->add_option("--csv", curve_csv, "curve table (stdout if omitted)");
  curve->add_option("--json", curve_c.json_out, "JSON summary");
  add_solver_flags(curve, curve_c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (run->parsed()) return run_pipeline(run_c, run_mode, run_mode == "fci" ? "E_fci" : run_mode == "scf" ? "E_hf" : "E_g");
  if (adapt->parsed()) return run_pipeline(adapt_c, "adapt", "E_g");
  if (scf->parsed()) return run_pipeline(scf_c, "scf", "E_hf");
  if (fci->parsed()) return run_pipeline(fci_c, "fci", "E_fci");

  if (rank->parsed()) {
    Handles h;
    oevqe_status st = build_config(rank_c, &h.cfg, "rank");
    if (st != OEVQE_OK) return report_error(st);
    if ((st = oevqe_integrals_load(rank_c.fcidump.c_str(), &h.ints)) != OEVQE_OK) return report_error(st);
    if ((st = oevqe_run(h.ints, h.cfg, &h.res)) != OEVQE_OK) return report_error(st);
    std::fprintf(stderr, "%s\n", oevqe_result_summary(h.res));
    if (rank_c.ranking_csv.empty()) std::fputs(oevqe_result_csv(h.res, "ranking"), stdout);
    return emit(h.res, rank_c);
  }

  if (bp->parsed()) {
    Handles h;
    oevqe_status st = oevqe_config_new(&h.cfg);
    if (st != OEVQE_OK) return report_error(st);
    std::string qs;
    for (std::size_t i = 0; i < bp_qubits.size(); ++i) qs += (i ? "," : "") + std::to_string(bp_qubits[i]);
    const std::pair<const char*, std::string> kv[] = {
        {"bp_qubits", qs}, {"bp_samples", std::to_string(bp_samples)}, {"seed", std::to_string(bp_seed)}};
    for (const auto& [k, v] : kv)
      if ((st = oevqe_config_set(h.cfg, k, v.c_str())) != OEVQE_OK) return report_error(st);
    if ((st = oevqe_bp_variance(h.cfg, &h.res)) != OEVQE_OK) return report_error(st);
    std::fprintf(stderr, "%s\n", oevqe_result_summary(h.res));
    if (bp_csv.empty()) std::fputs(oevqe_result_csv(h.res, "bp"), stdout);
    const bool ok = write_file(bp_csv, oevqe_result_csv(h.res, "bp")) && write_file(bp_json, oevqe_result_json(h.res));
    return ok ? 0 : 1;
  }

  if (report->parsed()) {
    Handles h;
    const oevqe_status st = oevqe_report_load(report_path.c_str(), &h.res);
    if (st != OEVQE_OK) return report_error(st);
    std::printf("%s\n", oevqe_result_summary(h.res));
    print_energy(h.res, "E_g");
    return emit(h.res, report_c);
  }

  if (curve->parsed()) {
    Handles h;
    oevqe_status st = build_config(curve_c, &h.cfg, run_mode);
    if (st != OEVQE_OK) return report_error(st);
    st = oevqe_curve(manifest.c_str(), h.cfg, &h.res);
    if (h.res) {
      const std::string table = oevqe_result_csv(h.res, "curve");
      if (curve_csv.empty()) std::fputs(table.c_str(), stdout);
      bool ok = write_file(curve_csv, table) && write_file(curve_c.json_out, oevqe_result_json(h.res));
      if (st == OEVQE_OK) return ok ? 0 : 1;
    }
    return report_error(st);
  }
  return 1;
}
