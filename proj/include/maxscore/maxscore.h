/* C API for the maxscore shared library.
 *
 * All functions return ms_status (MS_OK on success); the thread-local
 * message from ms_last_error() describes the most recent failure. Objects
 * are opaque handles owned by the caller and released with the matching
 * *_free function. Handles are immutable after creation and may be shared
 * across threads.
 */

#ifndef MAXSCORE_MAXSCORE_H
#define MAXSCORE_MAXSCORE_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ms_status {
  MS_OK = 0,
  MS_ERR_INVALID_ARGUMENT = 1,
  MS_ERR_IO = 2,
  MS_ERR_NUMERIC = 3,
  MS_ERR_CHECK_FAILED = 4,
  MS_ERR_INTERNAL = 5
} ms_status;

typedef struct ms_dataset ms_dataset;
typedef struct ms_estimate ms_estimate;

const char* ms_version(void);
const char* ms_last_error(void);

/* ---- datasets ---- */

/* CSV with header x1,...,xp,y and labels in {-1,+1}. */
ms_status ms_dataset_read_csv(const char* path, ms_dataset** out);
ms_status ms_dataset_write_csv(const ms_dataset* data, const char* path);

/* dgp_json: the DgpSpec JSON schema documented in the README. */
ms_status ms_dataset_generate(const char* dgp_json, long n, uint64_t master_seed,
                              uint64_t stream_id, ms_dataset** out);

long ms_dataset_rows(const ms_dataset* data);
long ms_dataset_cols(const ms_dataset* data);
void ms_dataset_free(ms_dataset* data);

/* ---- estimation ---- */

typedef struct ms_estimate_options {
  long grid_points;    /* grid method; default 10000 */
  double lambda;       /* l1 penalty for logistic-l1 / svm-l1 (<0: choose by CV) */
  double margin_cost;  /* SVM hinge weight; default 1 */
  int cv_folds;        /* default 2 */
  uint64_t seed;       /* master seed for seeded methods */
} ms_estimate_options;

void ms_estimate_options_init(ms_estimate_options* opts);

/* method: exact-2d | grid | smoothed | logistic | logistic-l1 | svm | svm-l1 */
ms_status ms_estimate_run(const ms_dataset* data, const char* method,
                          const ms_estimate_options* opts, ms_estimate** out);

/* SRM penalized subset selection; max_sparsity 0 selects the default
 * floor(n / (4 log p)); exact_enumeration 0 forces greedy search. */
ms_status ms_srm_run(const ms_dataset* data, double K, double Cn, long max_sparsity,
                     long enumeration_budget, int exact_enumeration, uint64_t seed,
                     ms_estimate** out);

double ms_estimate_score(const ms_estimate* est);
long ms_estimate_dim(const ms_estimate* est);
ms_status ms_estimate_coefficients(const ms_estimate* est, double* buf, long len);
long ms_estimate_support_size(const ms_estimate* est);
ms_status ms_estimate_support(const ms_estimate* est, long* buf, long len);
long ms_estimate_evaluations(const ms_estimate* est);
int ms_estimate_degenerate(const ms_estimate* est);
int ms_estimate_selected_sparsity(const ms_estimate* est);
const char* ms_estimate_method(const ms_estimate* est);
void ms_estimate_free(ms_estimate* est);

/* ---- verification ---- */

/* One row per verification result: check,params,estimate,bound,stderr,pass. */
typedef void (*ms_report_row_fn)(const char* check, const char* params, double estimate,
                                 double bound, double stderr_, int pass, void* user);

/* check_name NULL runs every registered check. failures_out (optional)
 * receives the number of failing rows; the status is MS_ERR_CHECK_FAILED
 * when any row fails. */
ms_status ms_verify_run(const char* check_name, uint64_t master_seed, ms_report_row_fn row_cb,
                        void* user, int* failures_out);

/* Newline-joined check names; returns the required buffer size. */
long ms_verify_list(char* buf, long len);

/* ---- simulation ---- */

/* Runs the experiment described by a JSON config file (see README schema)
 * and writes its CSV/SVG outputs. */
ms_status ms_simulate_run(const char* config_path);

#ifdef __cplusplus
}
#endif

#endif /* MAXSCORE_MAXSCORE_H */
