/* SPDX-License-Identifier: Apache-2.0 */
#ifndef TRONTRAIN_TRONTRAIN_H
#define TRONTRAIN_TRONTRAIN_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(TRONTRAIN_BUILDING_LIBRARY)
#    define TT_API __declspec(dllexport)
#  else
#    define TT_API __declspec(dllimport)
#  endif
#else
#  define TT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Values match tt::ErrorCode. */
typedef enum tt_status {
  TT_OK = 0,
  TT_INVALID_ARGUMENT = 1,
  TT_DIMENSION_MISMATCH = 2,
  TT_EMPTY_INPUT = 3,
  TT_HYPOTHESIS = 4,
  TT_NUMERIC = 5,
  TT_IO = 6,
  TT_PARSE = 7,
  TT_ALREADY_CONVERGED = 8,
  TT_TARGET_BELOW_FLOOR = 9,
  TT_INTERNAL = 99
} tt_status;

typedef struct tt_dataset tt_dataset;
typedef struct tt_distribution tt_distribution;
typedef struct tt_moments tt_moments;

/* Message of the last failing call on this thread; "" after success. */
TT_API const char* tt_last_error(void);
TT_API const char* tt_status_name(tt_status s);
TT_API const char* tt_version(void);
/* Frees strings returned through char** out-parameters. NULL is a no-op. */
TT_API void tt_string_free(char* s);

/* Datasets: row-major x (count x dim), labels y (count). */
TT_API tt_status tt_dataset_create(const double* x, const double* y, size_t count, size_t dim, tt_dataset** out);
TT_API tt_status tt_dataset_load_csv(const char* path, tt_dataset** out);
TT_API tt_status tt_dataset_save_csv(const tt_dataset* d, const char* path);
TT_API size_t tt_dataset_size(const tt_dataset* d);
TT_API size_t tt_dataset_dim(const tt_dataset* d);
TT_API tt_status tt_dataset_symmetrize(const tt_dataset* d, tt_dataset** out);
TT_API int tt_dataset_is_symmetric(const tt_dataset* d);
TT_API void tt_dataset_free(tt_dataset* d);

/* "box:LOW:HIGH:N", "gaussian:N:SIGMA", "ball:N" or "sphere:N". */
TT_API tt_status tt_distribution_parse(const char* spec, tt_distribution** out);
TT_API size_t tt_distribution_dim(const tt_distribution* d);
TT_API void tt_distribution_free(tt_distribution* d);

/* beta_spec: "P", "constant:P" or "halfspace:P:v1,v2,...". */
TT_API tt_status tt_moments_estimate(const tt_distribution* dist, const double* w_star, size_t dim, double theta_star,
                                     const char* beta_spec, size_t mc_samples, uint64_t seed, tt_moments** out);
/* Constants, standard errors and provenance as JSON. */
TT_API tt_status tt_moments_to_json(const tt_moments* m, char** json);
/* name: a1..a4, beta1..beta3, lambda1_theta, theta_star. */
TT_API tt_status tt_moments_get(const tt_moments* m, const char* name, double* value);
TT_API void tt_moments_free(tt_moments* m);

/* overrides_json may be NULL; keys: seed, theta_star, beta, batch, eps, delta, repeats.
 * out_dir NULL or "" writes no files. passed receives 1 iff all assertions passed. */
TT_API tt_status tt_run_experiment(const char* config_path, const char* overrides_json, const char* out_dir,
                                   int dry_run, char** summary_json, int* passed);

/* Space-separated criterion ids. */
TT_API tt_status tt_acceptance_list(char** ids);
/* id NULL runs every criterion. report_json is an array of results. */
TT_API tt_status tt_acceptance_run(const char* id, uint64_t seed, double tolerance_scale, char** report_json,
                                   int* all_passed);

/* lemma: recurse1, recurse2 or recurse2lemma6. */
TT_API tt_status tt_verify_recursion(const char* lemma, size_t draws, uint64_t seed, char** report_json,
                                     int* all_certified);

#ifdef __cplusplus
}
#endif

#endif /* TRONTRAIN_TRONTRAIN_H */
