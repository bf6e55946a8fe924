/* C interface of the spi shared library.  Every call returns SPI_OK or an
 * error code; spi_last_error() describes the most recent failure on the
 * calling thread.  Strings returned through char** are heap-allocated and
 * must be released with spi_string_free(). */

#ifndef SPI_SPI_H
#define SPI_SPI_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum spi_status {
  SPI_OK = 0,
  SPI_ERR_INVALID_ARGUMENT = 1,
  SPI_ERR_DIMENSION_MISMATCH = 2,
  SPI_ERR_PARSE = 3,
  SPI_ERR_GROUND_SET_TOO_LARGE = 4,
  SPI_ERR_SUBSET_TOO_LARGE = 5,
  SPI_ERR_INSTANCE_TOO_LARGE = 6,
  SPI_ERR_DEGENERATE_WEIGHT = 7,
  SPI_ERR_NOT_MONOTONE = 8,
  SPI_ERR_NOT_IN_POLYTOPE = 9,
  SPI_ERR_MARGINAL_EXCEEDS_DISTRIBUTION = 10,
  SPI_ERR_DUPLICATE_OFFER = 11,
  SPI_ERR_SATURATED_COORDINATE = 12,
  SPI_ERR_INFEASIBLE = 13,
  SPI_ERR_INTERNAL = 14,
  SPI_ERR_UNKNOWN = 15
} spi_status;

const char* spi_status_name(spi_status s);
/* Message of the last failing call on this thread; empty string if none. */
const char* spi_last_error(void);
void spi_string_free(char* s);

typedef struct spi_function spi_function;
typedef struct spi_constraint spi_constraint;
typedef struct spi_instance spi_instance;

/* ----- set functions ----- */
spi_status spi_function_from_json(const char* json, spi_function** out);
void spi_function_free(spi_function* f);
spi_status spi_function_ground_size(const spi_function* f, int* out);
spi_status spi_function_is_monotone(const spi_function* f, int* out);
spi_status spi_function_value(const spi_function* f, const int* elements,
                              int count, double* out);

spi_status spi_multilinear_exact(const spi_function* f, const double* x, int n,
                                 double* out);
spi_status spi_multilinear_mc(const spi_function* f, const double* x, int n,
                              long trials, uint64_t seed, double* estimate,
                              double* std_error);
spi_status spi_concave_closure_value(const spi_function* f, const double* x,
                                     int n, double* out);
/* multilinear / closure, with the convention 1 when the closure is zero. */
spi_status spi_gap_ratio(const spi_function* f, const double* x, int n,
                         double* out);

/* ----- constraints ----- */
spi_status spi_constraint_from_json(const char* json, spi_constraint** out);
void spi_constraint_free(spi_constraint* c);
spi_status spi_constraint_size(const spi_constraint* c, int* out);
spi_status spi_constraint_is_independent(const spi_constraint* c,
                                         const int* elements, int count,
                                         int* out);
spi_status spi_constraint_rank(const spi_constraint* c, const int* elements,
                               int count, int* out);
/* Empirical min-over-elements selectability of the greedy scheme at
 * marginals x inside b times the polytope. */
spi_status spi_selectability_estimate(const spi_constraint* c, double b,
                                      const double* x, int n, long trials,
                                      uint64_t seed, double* min_estimate,
                                      double* min_std_error);

/* ----- instances ----- */
spi_status spi_instance_from_json(const char* json, spi_instance** out);
void spi_instance_free(spi_instance* inst);
spi_status spi_instance_universe(const spi_instance* inst, int* out);
spi_status spi_instance_days(const spi_instance* inst, int* out);
/* Expected best feasible hindsight value; exact enumeration. */
spi_status spi_prophet_opt(const spi_instance* inst, double* out);
spi_status spi_prophet_opt_mc(const spi_instance* inst, long trials,
                              uint64_t seed, double* estimate,
                              double* std_error);

/* ----- closed-form bounds ----- */
spi_status spi_cg_bound(double b, double* out);
spi_status spi_mcg_plain_bound(double b, double* out);
spi_status spi_mcg_bound(double p, double b, double* out);
spi_status spi_star_stats(int n, double p, double* multilinear,
                          double* closure, double* ratio);
/* constraint: "uniform" (k = rank), "matroid", "matching", "knapsack". */
spi_status spi_selectability_formula(const char* constraint, double k, double b,
                                     double* out);
spi_status spi_optimize_ratio(const char* constraint, int monotone, double k,
                              double* b_star, double* ratio);
/* format: "csv" or "json"; finite_k <= 0 omits the finite-rank rows. */
spi_status spi_table(double finite_k, const char* format, char** out);

/* ----- experiments and checks (JSON in, JSON out) ----- */
spi_status spi_simulate(const char* config_json, char** report_json);
spi_status spi_gap_check(const char* config_json, char** report_json);
spi_status spi_verify_lemmas(uint64_t seed, long cases_each,
                             char** report_json);

#ifdef __cplusplus
}
#endif

#endif /* SPI_SPI_H */
