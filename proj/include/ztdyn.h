/* SPDX-License-Identifier: Apache-2.0
 *
 * ztdyn - zero-temperature single-spin-flip dynamics for disordered
 * mean-field Ising models: coupling samplers, the dynamics chain, landscape
 * enumeration and seeded Monte Carlo experiments, behind a C ABI.
 *
 * All functions return zt_status; on failure zt_last_error() carries a
 * message for the calling thread.  Objects returned through out-parameters
 * are owned by the caller and released with the matching *_free function.
 */
#ifndef ZTDYN_H
#define ZTDYN_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  define ZT_API __declspec(dllexport)
#else
#  define ZT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

#define ZT_VERSION_STRING "0.1.0"

typedef enum zt_status {
  ZT_OK = 0,
  ZT_ERR_INVALID_ARGUMENT = 1, /* bad parameters / malformed input */
  ZT_ERR_IO = 2,               /* file could not be read or written */
  ZT_ERR_INTERNAL = 3
} zt_status;

typedef enum zt_family {
  ZT_FAMILY_BERNOULLI = 0,
  ZT_FAMILY_PARETO = 1,
  ZT_FAMILY_CONSTANT = 2,
  ZT_FAMILY_CUSTOM = 3
} zt_family;

typedef enum zt_policy {
  ZT_POLICY_FAIR = 0,
  ZT_POLICY_MINUS = 1,
  ZT_POLICY_PLUS = 2
} zt_policy;

typedef enum zt_run_status {
  ZT_RUN_GROUND_PLUS = 0,
  ZT_RUN_GROUND_MINUS = 1,
  ZT_RUN_STRICT_LOCAL_MIN = 2,
  ZT_RUN_PLATEAU = 3,
  ZT_RUN_BUDGET_EXHAUSTED = 4
} zt_run_status;

typedef enum zt_state_class {
  ZT_CLASS_GROUND_PLUS = 0,
  ZT_CLASS_GROUND_MINUS = 1,
  ZT_CLASS_STRICT_LOCAL_MIN = 2,
  ZT_CLASS_PLATEAU_MEMBER = 3,
  ZT_CLASS_NONE = 4
} zt_state_class;

typedef enum zt_experiment {
  ZT_EXP_SIMULATE = 0,
  ZT_EXP_QD = 1,
  ZT_EXP_MINCUT = 2,
  ZT_EXP_BULLY = 3,
  ZT_EXP_ENUMERATE = 4,
  ZT_EXP_MAG0 = 5,
  ZT_EXP_DRIFT = 6
} zt_experiment;

typedef enum zt_format { ZT_FORMAT_CSV = 0, ZT_FORMAT_JSON = 1 } zt_format;
typedef enum zt_overlap { ZT_OVERLAP_FULL = 0, ZT_OVERLAP_SITE = 1 } zt_overlap;
typedef enum zt_start { ZT_START_UNIFORM = 0, ZT_START_HALF = 1 } zt_start;

ZT_API const char* zt_version(void);
ZT_API const char* zt_last_error(void);
ZT_API void zt_string_free(char* s);

/* ---- coupling matrices -------------------------------------------------- */

typedef struct zt_matrix zt_matrix;

ZT_API zt_status zt_matrix_bernoulli(uint32_t n, double p, uint64_t seed, zt_matrix** out);
ZT_API zt_status zt_matrix_pareto(uint32_t n, double alpha, double scale, uint64_t seed,
                                  zt_matrix** out);
ZT_API zt_status zt_matrix_constant(uint32_t n, double value, zt_matrix** out);
/* entries: row-major n*n, taken as given (use zt_matrix_validate to check). */
ZT_API zt_status zt_matrix_dense(uint32_t n, const double* entries, zt_matrix** out);
ZT_API zt_status zt_matrix_load(const char* path, zt_matrix** out);
ZT_API zt_status zt_matrix_dump(const zt_matrix* m, const char* path);
ZT_API uint32_t zt_matrix_n(const zt_matrix* m);
ZT_API double zt_matrix_entry(const zt_matrix* m, uint32_t i, uint32_t j);
/* ZT_OK when all invariants hold; otherwise ZT_ERR_INVALID_ARGUMENT with the
 * first offense in zt_last_error(). */
ZT_API zt_status zt_matrix_validate(const zt_matrix* m);
ZT_API void zt_matrix_free(zt_matrix* m);

/* ---- dynamics ----------------------------------------------------------- */

/* spins: length n, entries +1/-1. */
ZT_API zt_status zt_uniform_spins(uint32_t n, uint64_t seed, int8_t* spins);
ZT_API zt_status zt_fixed_magnetization_spins(uint32_t n, int64_t m0, uint64_t seed,
                                              int8_t* spins);
ZT_API zt_status zt_energy(const zt_matrix* m, const int8_t* spins, double* out);
ZT_API zt_status zt_is_absorbing(const zt_matrix* m, const int8_t* spins,
                                 zt_state_class* out);

typedef struct zt_run_summary {
  zt_run_status status;
  uint64_t steps;
  uint64_t flips;
  uint64_t strict_flips;
  int64_t final_magnetization;
} zt_run_summary;

/* max_steps 0 selects the default budget of ceil(50 n ln n) steps;
 * final_spins may be NULL. */
ZT_API zt_status zt_run_dynamics(const zt_matrix* m, const int8_t* sigma0, zt_policy policy,
                                 uint64_t max_steps, uint64_t seed, zt_run_summary* out,
                                 int8_t* final_spins);

typedef struct zt_landscape_summary {
  uint32_t n;
  uint64_t ground_states;
  uint64_t strict_local_minima;
  uint64_t plateau_members;
  double min_energy;
} zt_landscape_summary;

/* Exhaustive 2^n census; n is capped at 22. */
ZT_API zt_status zt_enumerate(const zt_matrix* m, zt_landscape_summary* out);

/* ---- experiments -------------------------------------------------------- */

typedef struct zt_config {
  int experiment; /* zt_experiment */
  uint32_t n;
  int family; /* zt_family */
  double p;
  double alpha;
  double scale;
  double value;
  int has_m0;
  int64_t m0;
  int m0_auto; /* m0 = ceil(n^(0.5 - m0_epsilon)), parity-adjusted */
  double m0_epsilon;
  double epsilon; /* mag0 threshold exponent / drift exponent */
  int policy;     /* zt_policy */
  uint64_t seed;
  uint64_t max_steps; /* 0 => default */
  uint64_t max_iters; /* 0 => default */
  uint32_t trials;
  uint32_t replicas;
  int trace;
  uint64_t trace_stride; /* 0 => n/10 */
  uint64_t window;       /* 0 => floor(n^(0.5+3*epsilon)) */
  int overlap;           /* zt_overlap */
  int start;             /* zt_start */
  int threads;           /* 0 => hardware; never part of the output */
  const char* couplings_file; /* may be NULL */
  const char* dump_couplings; /* may be NULL */
} zt_config;

ZT_API void zt_config_init(zt_config* cfg);

/* Resolved-config echo (defaults filled in), including the thread count;
 * newline-free JSON in *json_out, released with zt_string_free. */
ZT_API zt_status zt_config_resolved_json(const zt_config* cfg, char** json_out);

typedef struct zt_result zt_result;

ZT_API zt_status zt_experiment_run(const zt_config* cfg, zt_result** out);
/* Borrowed pointers, valid until zt_result_free. */
ZT_API zt_status zt_result_summary_json(const zt_result* r, const char** json);
ZT_API zt_status zt_result_csv(const zt_result* r, const char** csv);
ZT_API zt_status zt_result_write(const zt_result* r, const char* path, zt_format format,
                                 int append);
ZT_API void zt_result_free(zt_result* r);

#ifdef __cplusplus
}
#endif

#endif /* ZTDYN_H */
