/* Copyright 2026 The OE-VQE Authors
 * SPDX-License-Identifier: Apache-2.0
 */
#include "oevqe/oevqe.h"

#include <stdio.h>

int main(int argc, char** argv) {
  oevqe_integrals* ints = NULL;
  oevqe_config* cfg = NULL;
  oevqe_result* res = NULL;
  double e = 0.0;
  int rc = 1;
  if (argc != 2) return 2;
  if (oevqe_integrals_load(argv[1], &ints) != OEVQE_OK) goto done;
  if (oevqe_config_new(&cfg) != OEVQE_OK) goto done;
  if (oevqe_config_set(cfg, "mode", "fci") != OEVQE_OK) goto done;
  if (oevqe_run(ints, cfg, &res) != OEVQE_OK) goto done;
  if (oevqe_result_energy(res, &e) != OEVQE_OK) goto done;
  printf("%s %.10f\n", oevqe_version(), e);
  rc = e < 0.0 ? 0 : 1;
done:
  if (rc) fprintf(stderr, "%s\n", oevqe_last_error());
  oevqe_result_free(res);
  oevqe_config_free(cfg);
  oevqe_integrals_free(ints);
  return rc;
}
