#ifndef PLATELAB_H
#define PLATELAB_H

/* C interface to the thin-member experiment library. All entry points are
 * thread-compatible: distinct handles may be used concurrently, a single
 * handle must not. Error messages are retrieved per thread. */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pl_status {
  PL_OK = 0,
  PL_ERR_CONFIG = 2,   /* malformed or inconsistent configuration */
  PL_ERR_SOLVER = 3,   /* linear solver failed to converge */
  PL_ERR_IO = 4,       /* filesystem failure writing artifacts */
  PL_ERR_ARGUMENT = 5  /* null handle, bad index, or wrong report kind */
} pl_status;

typedef struct pl_experiment pl_experiment;
typedef struct pl_report pl_report;

/* "platelab <semver>" */
const char* pl_version(void);

/* Message for the calling thread's most recent failure; never NULL. */
const char* pl_last_error(void);

pl_status pl_experiment_from_file(const char* path, pl_experiment** out);
pl_status pl_experiment_from_json(const char* text, pl_experiment** out);
void pl_experiment_free(pl_experiment* exp);

/* Overrides re-validate against the loaded geometry; on failure the
 * experiment is left unchanged. */
pl_status pl_experiment_set_epsilon(pl_experiment* exp, double epsilon);
pl_status pl_experiment_set_kappa(pl_experiment* exp, double kappa);
pl_status pl_experiment_set_output_dir(pl_experiment* exp, const char* dir);

/* Runners write their CSV/JSON artifacts into the configured output
 * directory and hand back a report handle (single row for solve). */
pl_status pl_run_solve(pl_experiment* exp, pl_report** out);
pl_status pl_run_sweep(pl_experiment* exp, pl_report** out);
pl_status pl_run_inertia(pl_experiment* exp, pl_report** out);
void pl_report_free(pl_report* rep);

size_t pl_report_row_count(const pl_report* rep);

/* Solve and sweep reports. Any output pointer may be NULL to skip it. */
pl_status pl_report_row(const pl_report* rep, size_t i, double* epsilon,
                        double* energy, double* e_kl, double* shear,
                        double* rm_res);

/* Inertia reports only. */
pl_status pl_report_inertia_row(const pl_report* rep, size_t i,
                                double* epsilon, double* classical_total,
                                double* classical_inplane,
                                double* modified_total,
                                double* modified_inplane);

/* 1 when every checklist item passed and every rung solved; solve and
 * inertia reports return 1. 0 for a NULL handle. */
int pl_report_all_passed(const pl_report* rep);

/* name is one of "e_kl", "shear", "rm_res". PL_ERR_ARGUMENT when the rate
 * was not computed (fewer than 3 usable ladder points) or the name is not
 * recognized. */
pl_status pl_report_rate(const pl_report* rep, const char* name, double* out);

size_t pl_report_checklist_count(const pl_report* rep);

/* Returned strings stay owned by the report handle. */
pl_status pl_report_checklist_item(const pl_report* rep, size_t i,
                                   const char** name, int* passed,
                                   const char** detail);

#ifdef __cplusplus
}
#endif

#endif /* PLATELAB_H */
