/* Copyright 2026 The OE-VQE Authors
 * SPDX-License-Identifier: Apache-2.0
 */

/* C interface to the orbital-expansion VQE library.
 *
 * All objects are opaque and owned by the caller once returned; release them
 * with the matching *_free function. Functions return an oevqe_status; on
 * failure oevqe_last_error() describes the problem for the calling thread.
 * Strings returned by the library stay valid until the owning object is
 * freed.
 */

#ifndef OEVQE_OEVQE_H_
#define OEVQE_OEVQE_H_

#include <stddef.h>

#if defined(_WIN32)
#define OEVQE_API __declspec(dllexport)
#else
#define OEVQE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  OEVQE_OK = 0,
  OEVQE_INPUT_ERROR = 1,     /* bad arguments, files or configuration */
  OEVQE_NUMERICAL_ERROR = 2  /* a numerical procedure failed */
} oevqe_status;

typedef struct oevqe_integrals oevqe_integrals;
typedef struct oevqe_config oevqe_config;
typedef struct oevqe_result oevqe_result;

OEVQE_API const char* oevqe_version(void);
OEVQE_API const char* oevqe_last_error(void);

/* ---- integrals ---- */

OEVQE_API oevqe_status oevqe_integrals_load(const char* fcidump_path, oevqe_integrals** out);
OEVQE_API oevqe_status oevqe_integrals_info(const oevqe_integrals* ints, int* norb, int* n_elec, double* e_nuc);
OEVQE_API void oevqe_integrals_free(oevqe_integrals* ints);

/* ---- configuration ----
 *
 * Keys: mode (oe-adapt | adapt | oe-uccsd | fci | rank | scf), fragment
 * ("0,1"), delta, grad_threshold, stage_thresholds ("1e-2,1e-3"),
 * stage_schedule ("0,1,2"), budget, max_ops_per_stage, bfgs_tol,
 * bfgs_max_iter, reopt_all, measurement_epsilon, baseline, fci_reference,
 * seed, jobs, bp_qubits ("4,6,8"), bp_samples.
 */

OEVQE_API oevqe_status oevqe_config_new(oevqe_config** out);
OEVQE_API oevqe_status oevqe_config_set(oevqe_config* cfg, const char* key, const char* value);
/* Reads "key = value" lines; '#' starts a comment. */
OEVQE_API oevqe_status oevqe_config_load(oevqe_config* cfg, const char* path);
OEVQE_API void oevqe_config_free(oevqe_config* cfg);

/* ---- runs ---- */

/* Runs the configured mode. On a numerical failure inside the pipeline *out
 * may still receive a partial result. */
OEVQE_API oevqe_status oevqe_run(const oevqe_integrals* ints, const oevqe_config* cfg, oevqe_result** out);

/* Gradient-variance experiment over the configured qubit counts. */
OEVQE_API oevqe_status oevqe_bp_variance(const oevqe_config* cfg, oevqe_result** out);

/* Batch run over a manifest of "distance path" lines (relative paths resolve
 * against the manifest directory). A failing point yields a partial result and
 * OEVQE_NUMERICAL_ERROR. */
OEVQE_API oevqe_status oevqe_curve(const char* manifest_path, const oevqe_config* cfg, oevqe_result** out);

/* Loads a JSON report, checks that every stage energy equals the sum of its
 * parts to 1e-12 and exposes its tables. */
OEVQE_API oevqe_status oevqe_report_load(const char* json_path, oevqe_result** out);

/* ---- results ---- */

OEVQE_API oevqe_status oevqe_result_energy(const oevqe_result* res, double* energy);
OEVQE_API oevqe_status oevqe_result_operator_count(const oevqe_result* res, int* count);
/* Full JSON report; empty for results without one. */
OEVQE_API const char* oevqe_result_json(const oevqe_result* res);
/* Tables: "stages", "ranking", "bp", "curve". Empty string if absent. */
OEVQE_API const char* oevqe_result_csv(const oevqe_result* res, const char* table);
/* One-line human summary. */
OEVQE_API const char* oevqe_result_summary(const oevqe_result* res);
OEVQE_API void oevqe_result_free(oevqe_result* res);

#ifdef __cplusplus
}
#endif

#endif /* OEVQE_OEVQE_H_ */
