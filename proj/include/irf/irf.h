/*
 * irf: C interface to the absolute-difference iterated random function
 * x_{k+1} = |theta_{k+1} - x_k|.
 *
 * Conventions
 *   - Every fallible call returns an irf_status. On failure the message is
 *     available from irf_last_error() (thread-local, valid until the next
 *     failing call on the same thread).
 *   - Objects are opaque handles created by *_create / *_build / *_run and
 *     released by the matching *_destroy. Destroy functions accept NULL.
 *   - Strings returned through char** are heap-allocated by the library and
 *     must be released with irf_string_free().
 *   - Handles are immutable after construction and may be shared between
 *     threads.
 */
#ifndef IRF_IRF_H
#define IRF_IRF_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(IRF_BUILDING_LIBRARY)
#    define IRF_API __declspec(dllexport)
#  else
#    define IRF_API __declspec(dllimport)
#  endif
#else
#  define IRF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum irf_status {
  IRF_OK = 0,
  IRF_ERR_INVALID_ARGUMENT = 1,
  IRF_ERR_DOMAIN = 2,
  IRF_ERR_PRECISION = 3,
  IRF_ERR_NOT_FOUND = 4,
  IRF_ERR_LEMMA_VIOLATION = 5,
  IRF_ERR_STRUCTURAL = 6,
  IRF_ERR_OVERFLOW = 7,
  IRF_ERR_INTERNAL = 8
} irf_status;

typedef enum irf_format {
  IRF_FORMAT_JSON = 0,
  IRF_FORMAT_CSV = 1,
  IRF_FORMAT_DOT = 2
} irf_format;

typedef enum irf_vertex_class {
  IRF_VERTEX_SMALL = 0,
  IRF_VERTEX_MEDIUM = 1,
  IRF_VERTEX_LARGE = 2,
  IRF_VERTEX_BOUNDARY = 3
} irf_vertex_class;

/* threads == 0 uses the hardware concurrency. Results never depend on it. */
typedef struct irf_trial_plan {
  uint64_t master_seed;
  uint64_t trials;
  uint64_t steps;
  unsigned threads;
} irf_trial_plan;

IRF_API const char* irf_version(void);
IRF_API const char* irf_status_name(irf_status status);
IRF_API const char* irf_last_error(void);
IRF_API void irf_string_free(char* str);

/* ---- theta distributions ---------------------------------------------- */

typedef struct irf_dist irf_dist;

IRF_API irf_status irf_dist_create(const double* support, const double* weights, size_t count, irf_dist** out);
/* Uniform on {alpha, 1}. */
IRF_API irf_status irf_dist_create_two_point(double alpha, irf_dist** out);
IRF_API void irf_dist_destroy(irf_dist* dist);
/* alpha is NaN unless the distribution is the canonical two-point law. */
IRF_API irf_status irf_dist_info(const irf_dist* dist, double* bound, double* mean, int* canonical, double* alpha);

/* ---- process ----------------------------------------------------------- */

IRF_API irf_status irf_step(double theta, double x, double* out);
/* trajectory must hold count + 1 values. */
IRF_API irf_status irf_iterate_forward(const double* word, size_t count, double x0, double* trajectory);
IRF_API irf_status irf_fold_backward(const double* word, size_t count, double x, double* out);
IRF_API irf_status irf_interval_image(double theta, double lo, double hi, double* out_lo, double* out_hi);
IRF_API irf_status irf_backward_image(const double* word, size_t count, double lo, double hi, double* out_lo,
                                      double* out_hi);

/* ---- stationary law ---------------------------------------------------- */

typedef struct irf_cdf irf_cdf;

IRF_API irf_status irf_stationary_cdf(const irf_dist* dist, irf_cdf** out);
IRF_API void irf_cdf_destroy(irf_cdf* cdf);
IRF_API irf_status irf_cdf_eval(const irf_cdf* cdf, double x, double* out);
IRF_API irf_status irf_cdf_quantile(const irf_cdf* cdf, double u, double* out);
/* JSON or CSV. */
IRF_API irf_status irf_cdf_export(const irf_cdf* cdf, irf_format format, char** out);

IRF_API irf_status irf_large_count(double alpha, uint64_t n, uint64_t* large, uint64_t* large_and_medium,
                                   uint64_t* recurrence);
IRF_API irf_status irf_affine_small_vertex(double alpha, uint64_t n, double* a, double* b);
IRF_API irf_status irf_z_estimate(double alpha, uint64_t n, double* out);

/* ---- orbits ------------------------------------------------------------- */

IRF_API irf_status irf_label_value(double alpha, double x, int64_t n, int eps, double* out);
/* theta_is_alpha selects f_alpha (nonzero) or f_1 (zero). */
IRF_API irf_status irf_apply_theta_label(double alpha, double x, int64_t n, int eps, int theta_is_alpha,
                                         int64_t* out_n, int* out_eps);
IRF_API irf_status irf_classify_vertex(double alpha, double value, irf_vertex_class* out);
IRF_API irf_status irf_is_singular(double alpha, double x, int64_t window, int* out);

typedef struct irf_graph irf_graph;

typedef struct irf_structure_summary {
  uint64_t counted_vertices;
  double small_fraction;
  double medium_fraction;
  double large_fraction;
  int diagonal_runs; /* 1: alpha > 1/2 diagonal-edge runs; 0: box runs */
  uint64_t q;
  double r;
  uint64_t count_q;         /* runs of length q */
  uint64_t count_q_plus_1;  /* runs of length q + 1 */
  uint64_t count_other;     /* runs of any other length */
  double predicted_ratio;   /* limiting count_q / count_q_plus_1 */
} irf_structure_summary;

IRF_API irf_status irf_graph_build(double alpha, double x, int64_t window, irf_graph** out);
IRF_API void irf_graph_destroy(irf_graph* graph);
IRF_API irf_status irf_graph_size(const irf_graph* graph, size_t* out);
IRF_API irf_status irf_graph_vertex(const irf_graph* graph, size_t index, int64_t* n, int* eps, double* value,
                                    irf_vertex_class* cls);
/* target is -1 when the edge leaves the window. */
IRF_API irf_status irf_graph_target(const irf_graph* graph, size_t index, int theta_is_alpha, int64_t* target);
IRF_API irf_status irf_graph_stats(const irf_graph* graph, irf_structure_summary* out);
/* DOT for the graph, JSON for its structure statistics. */
IRF_API irf_status irf_graph_export(const irf_graph* graph, irf_format format, char** out);
/* rho of every vertex (INT64_MIN where uncharted); rho must hold irf_graph_size values. */
IRF_API irf_status irf_graph_rho(const irf_graph* graph, int64_t base_n, int base_eps, int64_t* rho);

/* Writes up to capacity letters; *length receives the full word length. */
IRF_API irf_status irf_shrink_word(double alpha, double beta, double m, double threshold, size_t max_len,
                                   double* word, size_t capacity, size_t* length);

/* ---- continued fractions --------------------------------------------- */

typedef struct irf_convergent {
  int index;
  int64_t a;
  int64_t p;
  int64_t q;
} irf_convergent;

/* Convergents for a_0 .. a_terms; *count receives the number produced. */
IRF_API irf_status irf_contfrac(double alpha, int terms, irf_convergent* out, size_t capacity, size_t* count);
IRF_API irf_status irf_reliable_terms(double alpha, int* out);
/* CSV rows n, a_n, p_n, q_n, 2 q^2 |alpha - p/q|. */
IRF_API irf_status irf_contfrac_export(double alpha, int terms, char** out);
IRF_API irf_status irf_find_close_k(double alpha, double x, int64_t q, int64_t* k, double* value);

/* ---- experiments ------------------------------------------------------- */

/* sorted must hold plan->trials values; receives the sorted law of x_n. */
IRF_API irf_status irf_ensemble_forward(const irf_dist* dist, double x0, uint64_t n, const irf_trial_plan* plan,
                                        double* sorted);
/* JSON summary (with KS distance to the stationary law) or CSV of samples. */
IRF_API irf_status irf_ensemble_export(const irf_dist* dist, double x0, uint64_t n, const irf_trial_plan* plan,
                                       irf_format format, char** out);
IRF_API irf_status irf_ks_to_stationary(const irf_dist* dist, const double* samples, size_t count, double* out);
IRF_API irf_status irf_ks_two_sample(const double* a, size_t na, const double* b, size_t nb, double* out);

IRF_API irf_status irf_stationarity_check(const irf_dist* dist, const irf_trial_plan* plan, double* ks_before,
                                          double* ks_after, char** json);
IRF_API irf_status irf_bvf_check(const irf_dist* dist, double x0, uint64_t n, const irf_trial_plan* plan,
                                 double* ks, char** json);
/* lengths must hold plan->trials values. */
IRF_API irf_status irf_backward_diam_ensemble(const irf_dist* dist, uint64_t n, const irf_trial_plan* plan,
                                              double* lengths);

typedef struct irf_rate_report irf_rate_report;

typedef struct irf_rate_summary {
  double alpha;
  int64_t q_k;
  double epsilon;
  uint64_t horizon;
  uint64_t trials;
  uint64_t success_count;
  double success_fraction;
  int has_implied_c;
  double implied_c;
  double runtime_seconds;
} irf_rate_summary;

IRF_API irf_status irf_rate_horizon(int64_t q, uint64_t* out);
IRF_API irf_status irf_rate_run(double alpha, int64_t q_k, double epsilon, const irf_trial_plan* plan,
                                irf_rate_report** out);
IRF_API void irf_rate_destroy(irf_rate_report* report);
IRF_API irf_status irf_rate_summary_get(const irf_rate_report* report, irf_rate_summary* out);
/* Borrowed pointer, valid while the report lives. */
IRF_API irf_status irf_rate_diameters(const irf_rate_report* report, const double** data, size_t* count);
/* JSON report or per-trial CSV rows. */
IRF_API irf_status irf_rate_export(const irf_rate_report* report, irf_format format, char** out);

IRF_API irf_status irf_walk_confinement(int n, double* out);
/* JSON or CSV table for n in [n_min, n_max]. */
IRF_API irf_status irf_walk_confinement_export(int n_min, int n_max, irf_format format, char** out);

typedef struct irf_rho_audit_summary {
  uint64_t plus_steps;
  uint64_t minus_steps;
  uint64_t nonunit_steps;
  double plus_fraction; /* NaN when no steps were taken */
  uint64_t farsmall_segments;
  uint64_t farsmall_violations;
} irf_rho_audit_summary;

IRF_API irf_status irf_rho_audit(double alpha, double x0, uint64_t steps, const irf_trial_plan* plan,
                                 const int64_t* q_values, size_t q_count, int64_t window,
                                 irf_rho_audit_summary* summary, char** json);

#ifdef __cplusplus
}
#endif

#endif /* IRF_IRF_H */
