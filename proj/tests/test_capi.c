/* Smoke test of the C interface, compiled as C and linked against the shared library. */

#include <nbscope/nbscope.h>

#include <stdio.h>
#include <string.h>

static int failures = 0;

#define EXPECT(cond)                                              \
  do {                                                            \
    if (!(cond)) {                                                \
      fprintf(stderr, "%s:%d: failed: %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                 \
    }                                                             \
  } while (0)

int main(void) {
  nbs_sequence* rs = NULL;
  nbs_sequence* fact = NULL;
  nbs_report* rep = NULL;
  double re = 0, im = 0;
  const int expected[8] = {1, 1, 1, -1, 1, 1, -1, 1};
  int n;

  EXPECT(strlen(nbs_version()) > 0);
  EXPECT(nbs_sequence_from_spec("{\"family\":\"rudin-shapiro\"}", &rs) == NBS_OK);
  for (n = 0; n < 8; ++n) {
    EXPECT(nbs_sequence_eval(rs, n, &re, &im) == NBS_OK);
    EXPECT(re == expected[n] && im == 0.0);
  }
  EXPECT(nbs_sequence_is_exact(rs) == 1);
  EXPECT(nbs_sequence_bound(rs) == 1.0);
  EXPECT(nbs_sequence_extent(rs) < 0);

  EXPECT(nbs_eval_f(rs, 0.0, 0.0, 1e-10, &rep) == NBS_OK);
  EXPECT(strstr(nbs_report_json(rep), "\"schema_version\": 1") != NULL);
  nbs_report_free(rep);

  EXPECT(nbs_sequence_from_spec("{\"family\":\"gap-powers\",\"set\":\"factorials\"}", &fact) == NBS_OK);
  {
    nbs_search_params p;
    nbs_search_params_init(&p);
    p.window = 4;
    p.horizon = 1000;
    p.eps = 0.0;
    p.delta = 0.5;
    EXPECT(nbs_certificate(fact, &p, NBS_CERT_GAP, &rep) == NBS_OK);
    EXPECT(nbs_report_found(rep) == 1);
    EXPECT(strstr(nbs_report_json(rep), "GapZeroFlank") != NULL);
    nbs_report_free(rep);
  }
  {
    nbs_verdict_params v;
    nbs_verdict_params_init(&v);
    v.horizon = 100000;
    EXPECT(nbs_verdict(fact, &v, &rep) == NBS_OK);
    EXPECT(strstr(nbs_report_json(rep), "StrongNaturalBoundaryEvidence") != NULL);
    nbs_report_free(rep);
  }
  {
    const double radii[2] = {0.9, 0.99};
    EXPECT(nbs_probe(fact, 1, 0.0, 0.0, radii, 2, 256, 1e-10, &rep) == NBS_OK);
    EXPECT(nbs_report_csv(rep) != NULL);
    EXPECT(strncmp(nbs_report_csv(rep), "r,integral,quad_err,trunc_err", 29) == 0);
    nbs_report_free(rep);
  }

  /* Error paths. */
  {
    nbs_sequence* bad = NULL;
    EXPECT(nbs_sequence_from_spec("{\"family\":\"nope\"}", &bad) == NBS_INVALID);
    EXPECT(bad == NULL);
    EXPECT(strlen(nbs_last_error()) > 0);
  }
  {
    nbs_sequence* missing = NULL;
    EXPECT(nbs_sequence_load_csv("/nonexistent/path.csv", &missing) == NBS_IO);
    EXPECT(missing == NULL);
  }
  EXPECT(nbs_eval_f(rs, 1.0, 0.0, 1e-10, &rep) == NBS_INVALID);
  {
    nbs_sequence* ones = NULL;
    EXPECT(nbs_sequence_from_spec("{\"family\":\"periodic\",\"pattern\":[1]}", &ones) == NBS_OK);
    EXPECT(nbs_eval_f(ones, 1.0 - 1e-8, 0.0, 1e-12, &rep) == NBS_NUMERIC_CAP);
    nbs_sequence_free(ones);
  }
  {
    const double vre[3] = {0.5, 0.25, 0.0};
    nbs_sequence* v = NULL;
    EXPECT(nbs_sequence_from_values(vre, NULL, 3, &v) == NBS_OK);
    EXPECT(nbs_sequence_extent(v) == 3);
    EXPECT(nbs_sequence_is_exact(v) == 1);
    EXPECT(nbs_sequence_eval(v, 5, &re, &im) == NBS_INVALID);
    nbs_sequence_free(v);
  }
  EXPECT(strcmp(nbs_status_name(NBS_NUMERIC_CAP), "numeric cap exceeded") == 0);

  nbs_sequence_free(rs);
  nbs_sequence_free(fact);
  if (failures) {
    fprintf(stderr, "%d C API check(s) failed\n", failures);
    return 1;
  }
  printf("C API smoke test passed\n");
  return 0;
}
