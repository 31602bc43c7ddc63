/* Copyright 2026 The matconc authors
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

/* C interface to the matconc shared library: opaque handles, integer status
 * codes, and strings owned by the library (release with matconc_string_free).
 * Thread-safe; the last error message is per calling thread. */

#ifndef MATCONC_H
#define MATCONC_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define MATCONC_OK 0
#define MATCONC_ERR_INVALID_INPUT 1
#define MATCONC_ERR_CAPACITY 2
#define MATCONC_ERR_CONTRACT 3
#define MATCONC_ERR_IO 4
#define MATCONC_ERR_CONFIG 5
#define MATCONC_ERR_INTERNAL 6

typedef struct matconc_coeffs_s matconc_coeffs; /* chaos coefficient array */
typedef struct matconc_kernel_s matconc_kernel; /* kernel table + sampling law */

const char* matconc_version(void);

/* Copies the calling thread's last error message into buf (NUL-terminated,
 * truncated to buflen); returns the full message length. */
size_t matconc_last_error(char* buf, size_t buflen);

void matconc_string_free(char* s);

/* --- coefficient directories (A_<i1>_<i2>.mat records) ------------------- */
int matconc_coeffs_load(const char* dir, matconc_coeffs** out);
void matconc_coeffs_free(matconc_coeffs* c);
int matconc_coeffs_shape(const matconc_coeffs* c, int32_t* n, int32_t* d);

/* --- kernel directories (manifest.txt + kernel_<i1>_<i2>/<x>_<y>.mat) ---- */
int matconc_kernel_load(const char* dir, matconc_kernel** out);
void matconc_kernel_free(matconc_kernel* k);
int matconc_kernel_shape(const matconc_kernel* k, int32_t* n, int32_t* d, int32_t* support);

/* Builds a named closed-form instance ("example1", "example2",
 * "polynomial-chaos") and exports it in the directory formats above. */
int matconc_example_export(const char* name, int32_t n, int32_t d, const char* dir);

/* Evaluates a named bound; *record receives one JSON line (library-owned).
 * Kernel bounds: theorem-full | theorem-corollary | theorem-refined |
 * lower-bound | adamczak-full | adamczak-simplified | adamczak-moment |
 * concentration-tail (q_or_t is t). Coefficient bounds: khintchine.
 * overrides: "name=value,name=value" or NULL. */
int matconc_bound_eval_kernel(const matconc_kernel* k, const char* bound, double q_or_t,
                              const char* overrides, char** record);
int matconc_bound_eval_coeffs(const matconc_coeffs* c, const char* bound, double q_or_t,
                              const char* overrides, char** record);

/* Moment oracles. mc_replicas = 0 requests exact enumeration; *record gets a
 * one-line "method=... q=... value=... stderr=... replicas=..." string. */
int matconc_moment_kernel(const matconc_kernel* k, double q, int decoupled, int64_t mc_replicas,
                          uint64_t seed, char** record);
int matconc_moment_coeffs(const matconc_coeffs* c, double q, int64_t mc_replicas, uint64_t seed,
                          char** record);

typedef struct matconc_suite_summary_s {
  int64_t records;
  int64_t verified;
  int64_t estimated;
  int64_t violated;
  double worst_upper_ratio;     /* smallest ratio among upper-bound checks */
  double adamczak_calibrated_c; /* minimal C with every adamczak ratio >= 1 */
  double lower_calibrated_c;
} matconc_suite_summary;

/* Runs a verification suite (khintchine | theorem | adamczak | examples |
 * tools | all). n_list/d_list/q_list are comma-separated ("2,3,4"); NULL or
 * "" picks the suite defaults. out_path may be NULL for no report file.
 * Returns MATCONC_OK even when violations are found; inspect the summary. */
int matconc_verify(const char* suite, uint64_t master_seed, const char* out_path,
                   const char* n_list, const char* d_list, const char* q_list,
                   int32_t instances_per_cell, int64_t mc_replicas, const char* overrides,
                   matconc_suite_summary* summary);

#ifdef __cplusplus
}
#endif

#endif /* MATCONC_H */
