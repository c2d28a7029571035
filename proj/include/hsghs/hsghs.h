/*
 * C interface to the HS-GHS sampler library.
 *
 * Every object is an opaque handle released with its matching *_free
 * function. Functions return an hsghs_status; on failure a description is
 * available from hsghs_last_error() on the calling thread until the next
 * library call on that thread. Matrices cross the boundary as row-major
 * double arrays.
 *
 * Coefficient vectors use vec(B') order: B(i,j) is element i*q + j.
 */
#ifndef HSGHS_H
#define HSGHS_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(HSGHS_BUILDING_LIBRARY)
#    define HSGHS_API __declspec(dllexport)
#  else
#    define HSGHS_API __declspec(dllimport)
#  endif
#else
#  define HSGHS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  HSGHS_OK = 0,
  HSGHS_ERR_INVALID_ARGUMENT = 1,
  HSGHS_ERR_DIMENSION_MISMATCH = 2,
  HSGHS_ERR_NON_FINITE = 3,
  HSGHS_ERR_NOT_POSITIVE_DEFINITE = 4,
  HSGHS_ERR_DEGENERATE_RESIDUAL = 5,
  HSGHS_ERR_NUMERICAL = 6,
  HSGHS_ERR_IO = 7,
  HSGHS_ERR_FORMAT = 8,
  HSGHS_ERR_INTERNAL = 99
} hsghs_status;

typedef struct hsghs_matrix hsghs_matrix;
typedef struct hsghs_samples hsghs_samples;
typedef struct hsghs_simulation hsghs_simulation;

HSGHS_API const char* hsghs_version(void);
HSGHS_API const char* hsghs_last_error(void);
HSGHS_API const char* hsghs_status_name(hsghs_status status);

/* ---- matrices ---------------------------------------------------------- */

/* `row_major` may be NULL for a zero matrix. */
HSGHS_API hsghs_status hsghs_matrix_create(size_t rows, size_t cols, const double* row_major,
                                           hsghs_matrix** out);
HSGHS_API void hsghs_matrix_free(hsghs_matrix* m);
HSGHS_API size_t hsghs_matrix_rows(const hsghs_matrix* m);
HSGHS_API size_t hsghs_matrix_cols(const hsghs_matrix* m);
/* Copies rows*cols values; `capacity` is the length of `row_major`. */
HSGHS_API hsghs_status hsghs_matrix_copy_to(const hsghs_matrix* m, double* row_major,
                                            size_t capacity);
HSGHS_API hsghs_status hsghs_matrix_get(const hsghs_matrix* m, size_t row, size_t col,
                                        double* out);
HSGHS_API hsghs_status hsghs_matrix_read_csv(const char* path, hsghs_matrix** out);
HSGHS_API hsghs_status hsghs_matrix_write_csv(const hsghs_matrix* m, const char* path);

/* ---- simulation -------------------------------------------------------- */

typedef enum {
  HSGHS_STRUCTURE_AR1 = 0,
  HSGHS_STRUCTURE_CLIQUES = 1,
  HSGHS_STRUCTURE_STAR = 2
} hsghs_structure;

typedef enum { HSGHS_COEF_UNIFORM = 0, HSGHS_COEF_CONST5 = 1 } hsghs_coef_dist;

typedef struct {
  size_t n;
  size_t p;
  size_t q;
  size_t n_test; /* 0: same as n */
  hsghs_structure structure;
  hsghs_coef_dist coef;
  double sparsity;
  double design_rho;
  size_t group_size;
  int strict_cliques;
  uint64_t seed;
} hsghs_sim_config;

typedef enum {
  HSGHS_SIM_X = 0,
  HSGHS_SIM_Y = 1,
  HSGHS_SIM_B_TRUE = 2,
  HSGHS_SIM_OMEGA_TRUE = 3,
  HSGHS_SIM_X_TEST = 4,
  HSGHS_SIM_Y_TEST = 5
} hsghs_sim_part;

HSGHS_API void hsghs_sim_config_default(hsghs_sim_config* config);
HSGHS_API hsghs_status hsghs_simulate(const hsghs_sim_config* config, hsghs_simulation** out);
HSGHS_API void hsghs_simulation_free(hsghs_simulation* sim);
HSGHS_API hsghs_status hsghs_simulation_get(const hsghs_simulation* sim, hsghs_sim_part part,
                                            hsghs_matrix** out);
/* Rows left outside any clique (lenient cliques layout). */
HSGHS_API size_t hsghs_simulation_isolated_rows(const hsghs_simulation* sim);

/* ---- fitting ----------------------------------------------------------- */

typedef struct {
  uint64_t burnin;
  uint64_t nmc;
  uint64_t thin;
  uint64_t seed;
  double pd_jitter;
} hsghs_gibbs_config;

typedef void (*hsghs_progress_fn)(uint64_t step, uint64_t total, double loglik, void* user);

/* burnin 1000, nmc 5000, thin 1, seed 0, pd_jitter 0 */
HSGHS_API void hsghs_gibbs_config_default(hsghs_gibbs_config* config);
/* `progress` may be NULL. */
HSGHS_API hsghs_status hsghs_fit(const hsghs_matrix* X, const hsghs_matrix* Y,
                                 const hsghs_gibbs_config* config, hsghs_progress_fn progress,
                                 void* user, hsghs_samples** out);
HSGHS_API void hsghs_samples_free(hsghs_samples* s);
HSGHS_API hsghs_status hsghs_samples_dims(const hsghs_samples* s, uint64_t* n, uint64_t* p,
                                          uint64_t* q, uint64_t* nmc);
HSGHS_API hsghs_status hsghs_samples_write(const hsghs_samples* s, const char* path);
HSGHS_API hsghs_status hsghs_samples_read(const char* path, hsghs_samples** out);
/* Draw `index` as a p x q coefficient matrix and a q x q precision matrix. */
HSGHS_API hsghs_status hsghs_samples_draw(const hsghs_samples* s, uint64_t index,
                                          hsghs_matrix** B, hsghs_matrix** omega);
HSGHS_API double hsghs_samples_seconds(const hsghs_samples* s);
/* Per-step log-likelihood (burn-in included); empty for samples read from disk. */
HSGHS_API size_t hsghs_samples_trace_length(const hsghs_samples* s);
HSGHS_API hsghs_status hsghs_samples_trace(const hsghs_samples* s, double* out, size_t capacity);

typedef struct {
  double mean;
  double sd;
  double geweke_z; /* NaN for traces shorter than 20 values */
  size_t length;
} hsghs_trace_stats;

HSGHS_API hsghs_status hsghs_trace_summary(const double* trace, size_t length,
                                           hsghs_trace_stats* out);

/* ---- posterior summaries ---------------------------------------------- */

typedef enum { HSGHS_TARGET_B = 0, HSGHS_TARGET_OMEGA = 1 } hsghs_target;

typedef struct {
  double cutoff;
  double fpr;
  double tpr; /* NaN when the truth has no positives */
} hsghs_roc_point;

HSGHS_API hsghs_status hsghs_posterior_mean(const hsghs_samples* s, hsghs_matrix** B,
                                            hsghs_matrix** omega);
HSGHS_API hsghs_status hsghs_credible_interval(const hsghs_samples* s, double level,
                                               hsghs_matrix** b_lo, hsghs_matrix** b_hi,
                                               hsghs_matrix** omega_lo, hsghs_matrix** omega_hi);
/* 0/1 masks; the omega mask is symmetric with a zero diagonal. */
HSGHS_API hsghs_status hsghs_select(const hsghs_samples* s, double level, hsghs_matrix** b_mask,
                                    hsghs_matrix** omega_mask);

/* `truth` is the true B (p x q) or Omega (q x q); nonzero entries are
 * positives and the Omega diagonal is ignored. `out` holds `count` points. */
HSGHS_API hsghs_status hsghs_roc_bayes(const hsghs_samples* s, const hsghs_matrix* truth,
                                       hsghs_target target, const double* levels, size_t count,
                                       hsghs_roc_point* out);
HSGHS_API hsghs_status hsghs_roc_threshold(const hsghs_matrix* estimate,
                                           const hsghs_matrix* truth, hsghs_target target,
                                           const double* thresholds, size_t count,
                                           hsghs_roc_point* out);
/* Writes up to `capacity` values and the full grid size to `written`;
 * pass out = NULL to query the size. */
HSGHS_API hsghs_status hsghs_threshold_grid(const hsghs_matrix* estimate, hsghs_target target,
                                            double* out, size_t capacity, size_t* written);

/* ---- metrics ----------------------------------------------------------- */

typedef struct {
  double mse_b;
  double mse_omega;
  double prediction_mse;
  double avg_kl;
  /* NaN when undefined (e.g. precision of an empty selection) */
  double b_sen, b_spe, b_prc;
  double omega_sen, omega_spe, omega_prc;
} hsghs_metrics_report;

HSGHS_API hsghs_status hsghs_metrics(const hsghs_matrix* B_true, const hsghs_matrix* omega_true,
                                     const hsghs_matrix* B_hat, const hsghs_matrix* omega_hat,
                                     const hsghs_matrix* b_select, const hsghs_matrix* omega_select,
                                     const hsghs_matrix* X_train, const hsghs_matrix* X_test,
                                     const hsghs_matrix* Y_test, hsghs_metrics_report* out);
HSGHS_API hsghs_status hsghs_r_squared(const hsghs_matrix* B_hat, const hsghs_matrix* X_test,
                                       const hsghs_matrix* Y_test, double* out, size_t capacity);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* HSGHS_H */
