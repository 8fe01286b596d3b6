/*
 * C interface to the causal-loop-diagram toolkit.
 *
 * Every object is an opaque handle released with its *_free function.
 * Functions return a cld_status; on failure a message for the calling
 * thread is available from cld_last_error() until the next call on that
 * thread. Strings returned through char** out-parameters are allocated by
 * the library and released with cld_string_free().
 */
#ifndef CLD_CLD_H
#define CLD_CLD_H

#include <stddef.h>

#if defined(_WIN32)
#  if defined(CLD_BUILDING_LIBRARY)
#    define CLD_API __declspec(dllexport)
#  else
#    define CLD_API __declspec(dllimport)
#  endif
#else
#  define CLD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cld_status {
  CLD_OK = 0,
  CLD_ERR_INVALID_ARGUMENT = 1,
  CLD_ERR_IO = 2,
  CLD_ERR_PARSE = 3,             /* diagnostics carry the details */
  CLD_ERR_DUPLICATE_IN_SEQUENCE = 4,
  CLD_ERR_EDGE_MISSING = 5,
  CLD_ERR_CYCLE_LIMIT = 6,
  CLD_ERR_UNVERIFIED_LOOP = 7,
  CLD_ERR_INCONSISTENT_SOLUTION = 8,
  CLD_ERR_UNKNOWN_POLARITY = 9,
  CLD_ERR_UNKNOWN_REFERENCE = 10,
  CLD_ERR_INVALID_SCENARIO = 11,
  CLD_ERR_NUMERIC_BLOWUP = 12,
  CLD_ERR_CORPUS_CORRUPT = 13,
  CLD_ERR_INTERNAL = 14
} cld_status;

typedef struct cld_model cld_model;
typedef struct cld_scenario cld_scenario;
typedef struct cld_trajectory cld_trajectory;

typedef enum cld_loop_set { CLD_LOOPS_DECLARED = 0, CLD_LOOPS_ENUMERATED = 1 } cld_loop_set;

/* Output options shared by the report functions. max_len 0 means no bound;
 * cycle_cap 0 means the default cap of 1000000 cycles. */
typedef struct cld_report_options {
  int json;
  int color;
  size_t max_len;
  size_t cycle_cap;
} cld_report_options;

CLD_API const char *cld_status_name(cld_status status);
CLD_API const char *cld_last_error(void);
CLD_API void cld_string_free(char *text);

/* ---- models ---------------------------------------------------------- */

/* Parses .cld text. `origin` prefixes formatted diagnostics (may be NULL).
 * *diagnostics receives warnings and errors, one per line, or NULL when there
 * are none; it may be NULL to discard them. Returns CLD_ERR_PARSE when the
 * text has errors. */
CLD_API cld_status cld_model_parse(const char *source, size_t length, const char *origin, cld_model **out,
                                   char **diagnostics);
CLD_API cld_status cld_model_load(const char *path, cld_model **out, char **diagnostics);
CLD_API cld_status cld_model_import_json(const char *text, size_t length, cld_model **out);
CLD_API cld_status cld_model_canonical(cld_model **out);
CLD_API void cld_model_free(cld_model *model);

CLD_API size_t cld_model_variable_count(const cld_model *model);
CLD_API size_t cld_model_link_count(const cld_model *model);
CLD_API size_t cld_model_loop_count(const cld_model *model);
/* '+', '-' or '?', or 0 when the link does not exist. */
CLD_API char cld_model_link_polarity(const cld_model *model, int from, int to);
CLD_API int cld_model_equal(const cld_model *a, const cld_model *b);

/* New model with one link polarity replaced; polarity is '+', '-' or '?'. */
CLD_API cld_status cld_model_with_polarity(const cld_model *model, int from, int to, char polarity, cld_model **out);

/* *violations receives the number of invariant violations; *report one line
 * per violation "CODE location: message". */
CLD_API cld_status cld_model_validate(const cld_model *model, char **report, size_t *violations);
CLD_API cld_status cld_model_emit(const cld_model *model, char **out);
CLD_API cld_status cld_model_export_dot(const cld_model *model, char **out);
CLD_API cld_status cld_model_export_json(const cld_model *model, char **out);

/* ---- loops ----------------------------------------------------------- */

/* Loop table. *count receives the number of rows. */
CLD_API cld_status cld_report_loops(const cld_model *model, cld_loop_set set, const cld_report_options *options,
                                    char **out, size_t *count);
/* Declared-loop verdicts; *all_ok is 1 iff every loop is found with the
 * declared class. */
CLD_API cld_status cld_report_verify(const cld_model *model, const cld_report_options *options, char **out,
                                     int *all_ok);
CLD_API cld_status cld_report_participation(const cld_model *model, cld_loop_set over,
                                            const cld_report_options *options, char **out);

/* Participation count of one variable / link; -1 if absent. */
CLD_API long cld_variable_participation(const cld_model *model, cld_loop_set over, int id);
CLD_API long cld_link_participation(const cld_model *model, cld_loop_set over, int from, int to);

/* ---- signs ----------------------------------------------------------- */

/* Solves the declared-loop parity system for unknown link polarities.
 * *consistent, *rank and *nullspace_dim may each be NULL. With emit the
 * report lists paste-ready link lines. When solved is non-NULL and the
 * system is consistent, *solved receives the model with the inferred
 * polarities applied. */
CLD_API cld_status cld_infer_signs(const cld_model *model, int emit, const cld_report_options *options, char **out,
                                   int *consistent, size_t *rank, size_t *nullspace_dim, cld_model **solved);

/* ---- simulation ------------------------------------------------------ */

CLD_API cld_status cld_scenario_parse(const char *source, size_t length, const char *origin, cld_scenario **out,
                                      char **diagnostics);
CLD_API cld_status cld_scenario_load(const char *path, cld_scenario **out, char **diagnostics);
CLD_API void cld_scenario_free(cld_scenario *scenario);

/* compile + integrate. */
CLD_API cld_status cld_simulate(const cld_model *model, const cld_scenario *scenario, cld_trajectory **out);
CLD_API void cld_trajectory_free(cld_trajectory *trajectory);
CLD_API size_t cld_trajectory_length(const cld_trajectory *trajectory);
CLD_API cld_status cld_trajectory_value(const cld_trajectory *trajectory, int id, size_t step, double *value);
/* CSV of the scenario's output variables (every variable when none given). */
CLD_API cld_status cld_trajectory_csv(const cld_trajectory *trajectory, char **out);
/* One "initial final min max" row per output variable. */
CLD_API cld_status cld_trajectory_summary(const cld_trajectory *trajectory, char **out);

/* Finite-difference check of link signs with every level set to `level`
 * (> 0). *mismatches receives the number of disagreeing links. */
CLD_API cld_status cld_jacobian_check(const cld_model *model, const cld_scenario *scenario, double level, char **out,
                                      size_t *mismatches);

/* ---- corpus ---------------------------------------------------------- */

/* Loads and validates <root>/MANIFEST, then re-runs every golden. With
 * refresh the goldens and hashes are rewritten first. *stale receives the
 * number of goldens that differ from a fresh run. */
CLD_API cld_status cld_corpus_check(const char *root, int refresh, char **report, size_t *stale);

#ifdef __cplusplus
}
#endif

#endif /* CLD_CLD_H */
