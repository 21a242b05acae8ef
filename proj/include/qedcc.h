/*
 * Copyright 2026 The qedcc Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface of the qedcc engine. All model data and reports travel as JSON
 * text; systems are opaque handles. Functions returning a pointer yield NULL
 * on failure, functions returning qedcc_status yield a nonzero code; in both
 * cases qedcc_last_error() describes the failure for the calling thread. */

#ifndef QEDCC_H
#define QEDCC_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

/* 0 success; 1 numerical failure (divergence, degeneracy, lost precision);
 * 2 invalid input (malformed JSON, bad arguments, inconsistent model). */
typedef enum qedcc_status {
  QEDCC_OK = 0,
  QEDCC_ERR_NUMERICAL = 1,
  QEDCC_ERR_INPUT = 2
} qedcc_status;

typedef struct qedcc_system qedcc_system;

/* Semantic version of the library; static storage, do not free. */
const char* qedcc_version(void);

/* Message for the most recent failure on the calling thread; static thread-
 * local storage, do not free. Empty string when no failure occurred yet. */
const char* qedcc_last_error(void);

/* Frees strings returned through char** out-parameters. NULL is a no-op. */
void qedcc_string_free(char* text);

/* Parses a model system from JSON text (schema_version 1). */
qedcc_system* qedcc_system_from_json(const char* text);

/* Serializes a system back to canonical JSON; free with qedcc_string_free. */
char* qedcc_system_to_json(const qedcc_system* system);

void qedcc_system_free(qedcc_system* system);

/* Structural validation. Writes {"ok": bool, "violations": [...]} and
 * returns QEDCC_OK even when violations exist; nonzero only for failures of
 * the validation run itself. */
qedcc_status qedcc_validate_json(const qedcc_system* system, char** report);

/* Block-diagonal direct sum of n_units non-interacting copies. */
qedcc_system* qedcc_replicate(const qedcc_system* system, size_t n_units);

/* Correlation-energy run. options_json keys (all optional):
 *   "method": "mp2" | "dci" | "ccd" | "ccsd"   (default "ccsd")
 *   "channels": comma list of coulomb,breit,hyperfine,lamb (default coulomb)
 *   "max_iterations", "damping", "residual_tolerance", "energy_tolerance",
 *   "level_shift": solver numbers
 *   "pair_mode": "none" | "decoupled" | "coupled"
 *   "pair_denominator": "exact" | "limit"
 * Writes the correlation report as JSON. */
qedcc_status qedcc_run_json(const qedcc_system* system, const char* options_json,
                            char** report);

/* Closed-form table for the two-spatial-orbital unit. params_json keys:
 * eps1, eps2, j11, j22, j12, k12 (required), jb11, jb22, kb12 (default 0),
 * units (array of replica counts for the doubles-CI column, default
 * [1,2,4,8]). */
qedcc_status qedcc_oracle_h2_json(const char* params_json, char** report);

/* Materializes the two-spatial-orbital unit as a system. Accepts the oracle
 * params plus "include_negative" (bool), "eta_one_pair", "eta_two_pair". */
qedcc_system* qedcc_build_h2_unit(const char* params_json);

/* Thermal photon-field statistics. state_json keys: tau (required), volume,
 * modes (array of {k:[3], polarization:[[re,im] x3], weight}), and optional
 * position:[3], time for the averaged vector potential. */
qedcc_status qedcc_photon_report_json(const char* state_json, char** report);

/* State-universal multireference solve. options_json keys:
 *   "references": array of occupied-level-index arrays (required)
 *   "channels", "max_iterations", "damping", "residual_tolerance",
 *   "energy_tolerance", "target_root",
 *   "coupling": "bloch" | "row_bare" | "row_transformed"
 * Writes the effective-Hamiltonian report as JSON. */
qedcc_status qedcc_mrcc_run_json(const qedcc_system* system, const char* options_json,
                                 char** report);

#ifdef __cplusplus
}
#endif

#endif /* QEDCC_H */
