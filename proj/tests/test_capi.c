/* Exercises the C interface from C. */
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "cld/cld.h"

static int failures = 0;

#define EXPECT(cond)                                                   \
  do {                                                                 \
    if (!(cond)) {                                                     \
      fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                      \
    }                                                                  \
  } while (0)

static void test_models(void) {
  cld_model *m = NULL, *copy = NULL, *flipped = NULL;
  char *text = NULL, *diag = NULL;
  size_t n = 0;
  int ok = 0;

  EXPECT(cld_model_load(CLD_CORPUS_DIR "/models/hei-ai.cld", &m, &diag) == CLD_OK);
  EXPECT(diag == NULL);
  EXPECT(cld_model_variable_count(m) == 27);
  EXPECT(cld_model_link_count(m) == 45);
  EXPECT(cld_model_loop_count(m) == 18);
  EXPECT(cld_model_link_polarity(m, 19, 8) == '-');
  EXPECT(cld_model_link_polarity(m, 8, 19) == 0);

  EXPECT(cld_model_canonical(&copy) == CLD_OK);
  EXPECT(cld_model_equal(m, copy));

  EXPECT(cld_model_emit(m, &text) == CLD_OK);
  cld_model_free(copy);
  copy = NULL;
  EXPECT(cld_model_parse(text, strlen(text), "emitted", &copy, NULL) == CLD_OK);
  EXPECT(cld_model_equal(m, copy));
  cld_string_free(text);

  EXPECT(cld_model_validate(m, &text, &n) == CLD_OK);
  EXPECT(n == 0);
  cld_string_free(text);

  EXPECT(cld_report_verify(m, NULL, &text, &ok) == CLD_OK);
  EXPECT(ok == 1);
  cld_string_free(text);

  EXPECT(cld_model_with_polarity(m, 19, 8, '+', &flipped) == CLD_OK);
  EXPECT(cld_report_verify(flipped, NULL, &text, &ok) == CLD_OK);
  EXPECT(ok == 0);
  cld_string_free(text);
  EXPECT(cld_model_with_polarity(m, 8, 19, '+', &copy) == CLD_ERR_UNKNOWN_REFERENCE);
  EXPECT(strlen(cld_last_error()) > 0);
  EXPECT(cld_model_with_polarity(m, 19, 8, 'x', &copy) == CLD_ERR_INVALID_ARGUMENT);

  EXPECT(cld_report_loops(m, CLD_LOOPS_ENUMERATED, NULL, &text, &n) == CLD_OK);
  EXPECT(n == 21);
  cld_string_free(text);

  {
    cld_report_options opts = {1, 0, 0, 10};
    EXPECT(cld_report_loops(m, CLD_LOOPS_ENUMERATED, &opts, &text, &n) == CLD_ERR_CYCLE_LIMIT);
  }

  EXPECT(cld_variable_participation(m, CLD_LOOPS_DECLARED, 13) == 12);
  EXPECT(cld_link_participation(m, CLD_LOOPS_DECLARED, 11, 12) == 10);
  EXPECT(cld_variable_participation(m, CLD_LOOPS_DECLARED, 99) == -1);

  EXPECT(cld_model_export_dot(m, &text) == CLD_OK);
  EXPECT(strncmp(text, "digraph", 7) == 0);
  cld_string_free(text);
  EXPECT(cld_model_export_json(m, &text) == CLD_OK);
  EXPECT(cld_model_import_json(text, strlen(text), &copy) == CLD_OK);
  EXPECT(cld_model_equal(m, copy));
  cld_string_free(text);

  cld_model_free(copy);
  cld_model_free(flipped);
  cld_model_free(m);
}

static void test_parse_errors(void) {
  const char *bad = "model \"x\"\nlink 1 -> 1 +\n";
  cld_model *m = NULL;
  char *diag = NULL;
  EXPECT(cld_model_parse(bad, strlen(bad), "bad.cld", &m, &diag) == CLD_ERR_PARSE);
  EXPECT(m == NULL);
  EXPECT(diag != NULL && strstr(diag, "bad.cld:2:") != NULL);
  cld_string_free(diag);
  EXPECT(cld_model_load("/nonexistent.cld", &m, NULL) == CLD_ERR_IO);
  EXPECT(cld_model_parse(NULL, 0, NULL, NULL, NULL) == CLD_ERR_INVALID_ARGUMENT);
  EXPECT(strcmp(cld_status_name(CLD_ERR_NUMERIC_BLOWUP), "NUMERIC_BLOWUP") == 0);
}

static void test_signs(void) {
  cld_model *m = NULL, *solved = NULL, *canon = NULL;
  char *text = NULL;
  int consistent = 0;
  size_t rank = 0, nullity = 0;
  EXPECT(cld_model_load(CLD_FIXTURES_DIR "/hei-ai-unknown.cld", &m, NULL) == CLD_OK);
  EXPECT(cld_infer_signs(m, 0, NULL, &text, &consistent, &rank, &nullity, NULL) == CLD_OK);
  EXPECT(consistent == 1);
  EXPECT(rank == 18);
  EXPECT(nullity == 27);
  cld_string_free(text);

  {
    const int fixes[5][2] = {{5, 9}, {13, 23}, {19, 8}, {20, 19}, {23, 12}};
    int i;
    for (i = 0; i < 5; ++i) {
      cld_model *next = NULL;
      EXPECT(cld_model_with_polarity(m, fixes[i][0], fixes[i][1], '-', &next) == CLD_OK);
      cld_model_free(m);
      m = next;
    }
  }
  EXPECT(cld_infer_signs(m, 1, NULL, &text, &consistent, NULL, NULL, &solved) == CLD_OK);
  EXPECT(consistent == 1);
  EXPECT(cld_model_canonical(&canon) == CLD_OK);
  EXPECT(solved != NULL && cld_model_equal(solved, canon));
  cld_string_free(text);
  cld_model_free(solved);
  cld_model_free(canon);
  cld_model_free(m);
}

static void test_simulation(void) {
  cld_model *m = NULL;
  cld_scenario *s = NULL;
  cld_trajectory *t = NULL;
  char *text = NULL;
  size_t mismatches = 99;
  double v = 0;
  const char *src = "horizon 0.1 step 0.1 integrator euler\ndecay 9 0.5\ndecay 10 0.5\ngain 9 -> 10 0\ngain 10 -> 9 0\n";

  EXPECT(cld_model_load(CLD_CORPUS_DIR "/models/two-cycle.cld", &m, NULL) == CLD_OK);
  EXPECT(cld_scenario_parse(src, strlen(src), "inline", &s, NULL) == CLD_OK);
  EXPECT(cld_simulate(m, s, &t) == CLD_OK);
  EXPECT(cld_trajectory_length(t) == 2);
  EXPECT(cld_trajectory_value(t, 9, 1, &v) == CLD_OK);
  EXPECT(v > 0.9499999 && v < 0.9500001);
  EXPECT(cld_trajectory_value(t, 9, 5, &v) == CLD_ERR_INVALID_ARGUMENT);
  EXPECT(cld_trajectory_value(t, 3, 0, &v) == CLD_ERR_UNKNOWN_REFERENCE);
  EXPECT(cld_trajectory_csv(t, &text) == CLD_OK);
  EXPECT(strncmp(text, "t,9:Student job placement,10:HEI relative reputation\n0,1,1\n", 57) == 0);
  cld_string_free(text);
  EXPECT(cld_trajectory_summary(t, &text) == CLD_OK);
  cld_string_free(text);
  EXPECT(cld_jacobian_check(m, s, 1.0, &text, &mismatches) == CLD_OK);
  EXPECT(mismatches == 0);
  cld_string_free(text);
  cld_trajectory_free(t);
  cld_scenario_free(s);

  EXPECT(cld_scenario_load(CLD_FIXTURES_DIR "/step-too-long.scn", &s, NULL) == CLD_OK);
  EXPECT(cld_simulate(m, s, &t) == CLD_ERR_INVALID_SCENARIO);
  cld_scenario_free(s);
  cld_model_free(m);
}

static void test_corpus(void) {
  char *report = NULL;
  size_t stale = 99;
  EXPECT(cld_corpus_check(CLD_CORPUS_DIR, 0, &report, &stale) == CLD_OK);
  EXPECT(stale == 0);
  cld_string_free(report);
}

int main(void) {
  test_models();
  test_parse_errors();
  test_signs();
  test_simulation();
  test_corpus();
  if (failures) {
    fprintf(stderr, "%d failure(s)\n", failures);
    return 1;
  }
  printf("C interface: all checks passed\n");
  return 0;
}
