/* Copyright 2026 The oqrw authors
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

/* C interface of the open-quantum-random-walk library.
 *
 * Handles are opaque; every function returns an oqrw_status, with OQRW_OK on
 * success.  On failure, oqrw_last_error() describes the problem for the
 * calling thread.  Strings returned through `char**` out-parameters are
 * heap-allocated and must be released with oqrw_string_free().  Documents
 * cross the boundary as JSON text; matrices use [re, im] entries.
 */

#ifndef OQRW_OQRW_H_
#define OQRW_OQRW_H_

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum oqrw_status {
  OQRW_OK = 0,
  OQRW_ERROR_VALIDATION = 1, /* model/state/parameter fails its contract */
  OQRW_ERROR_PARSE = 2,      /* document is malformed or ill-typed */
  OQRW_ERROR_INTERNAL = 3    /* cross-check contradiction or solver failure */
} oqrw_status;

typedef struct oqrw_model oqrw_model;
typedef struct oqrw_state oqrw_state;
typedef struct oqrw_trajectory oqrw_trajectory;

/* Thread-local message of the most recent failure; never NULL. */
const char* oqrw_last_error(void);

void oqrw_string_free(char* s);

const char* oqrw_version(void);

/* ---- models ---- */

oqrw_status oqrw_model_from_json(const char* text, oqrw_model** out);
oqrw_status oqrw_model_from_file(const char* path, oqrw_model** out);
void oqrw_model_free(oqrw_model* m);

oqrw_status oqrw_model_hdim(const oqrw_model* m, int* out);
oqrw_status oqrw_model_site_count(const oqrw_model* m, int* out);

/* Normalization report; *valid_out is 1 when every non-boundary site passes
 * at tolerance tol (pass tol <= 0 for the default). */
oqrw_status oqrw_model_validate(const oqrw_model* m, double tol,
                                int* valid_out, char** report_json_out);

/* ---- states ---- */

oqrw_status oqrw_state_from_json(const char* text, oqrw_state** out);
oqrw_status oqrw_state_from_file(const char* path, oqrw_state** out);
oqrw_status oqrw_state_to_json(const oqrw_state* s, char** out);
void oqrw_state_free(oqrw_state* s);

/* ---- evolution ---- */

/* Runs `steps` applications of the transition map and keeps every
 * intermediate state. */
oqrw_status oqrw_trajectory_run(const oqrw_model* m, const oqrw_state* rho0,
                                int steps, oqrw_trajectory** out);
void oqrw_trajectory_free(oqrw_trajectory* t);

oqrw_status oqrw_trajectory_depth(const oqrw_trajectory* t, int* out);

/* CSV "step,site,probability" over the whole trajectory. */
oqrw_status oqrw_trajectory_distribution_csv(const oqrw_trajectory* t,
                                             char** out);

oqrw_status oqrw_trajectory_state(const oqrw_trajectory* t, int step,
                                  oqrw_state** out);

/* Normalized fixed point of the transition map on a finite-site model.
 * *found_out is 0 (with a null report state) when no fixed point is
 * identified at tolerance; that is an answer, not an error. */
oqrw_status oqrw_invariant_state(const oqrw_model* m, double tol,
                                 int* found_out, char** report_json_out);

/* ---- process functional ---- */

/* Evaluates the walk's state functional on a cylinder document against the
 * trajectory; the report carries the value, limit-operator convergence, and
 * the unit/marginal consistency residuals at the cylinder's depth. */
oqrw_status oqrw_qmc_evaluate(const oqrw_trajectory* t,
                              const char* cylinder_json, int horizon,
                              double tol, double* re_out, double* im_out,
                              char** report_json_out);

/* ---- reducibility ---- */

/* Runs every applicable criterion to `depth` and reports the verdict with
 * per-criterion details.  A contradiction between criteria returns
 * OQRW_ERROR_INTERNAL while still writing the report. */
oqrw_status oqrw_analyze(const oqrw_model* m, const oqrw_state* rho0,
                         int depth, int n0, int horizon, double tol,
                         uint64_t seed, char** report_json_out);

/* Communicating classes of a classical-kind model. */
oqrw_status oqrw_classical_classes(const oqrw_model* m,
                                   char** report_json_out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* OQRW_OQRW_H_ */
