/* nbscope C interface.
 *
 * Sequences and reports are opaque handles released with their _free
 * function. Every call returns an nbs_status; on failure nbs_last_error()
 * describes the problem (per thread, valid until the next failing call).
 * Reports carry a JSON document and, for boundary probes, a CSV table. */

#ifndef NBSCOPE_H
#define NBSCOPE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(NBSCOPE_BUILDING)
#    define NBS_API __declspec(dllexport)
#  else
#    define NBS_API __declspec(dllimport)
#  endif
#else
#  define NBS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum nbs_status {
  NBS_OK = 0,
  NBS_NOT_FOUND = 1,
  NBS_INVALID = 2,
  NBS_NUMERIC_CAP = 3,
  NBS_IO = 4,
  NBS_INTERNAL = 5
} nbs_status;

typedef struct nbs_sequence nbs_sequence;
typedef struct nbs_report nbs_report;

typedef enum nbs_flank { NBS_FLANK_BACKWARD = 0, NBS_FLANK_FORWARD = 1, NBS_FLANK_BOTH = 2 } nbs_flank;

typedef enum nbs_certificate_mode {
  NBS_CERT_GAP = 1,
  NBS_CERT_PAIR = 2,
  NBS_CERT_ANY = 3
} nbs_certificate_mode;

typedef struct nbs_search_params {
  int64_t window;
  int64_t horizon;
  double eps;   /* negative: 0 for exact input, 0.05 otherwise */
  double delta;
  int64_t min_recurrence;
  nbs_flank flank;
  int has_decay;
  double decay_C;
  double decay_D;
} nbs_search_params;

typedef struct nbs_verdict_params {
  int64_t window;
  int64_t horizon;
  double eps;  /* negative: 0 for exact input, 0.05 otherwise */
  double delta;
  int64_t min_recurrence;
  int64_t p_max;
  int64_t max_period;
  int64_t max_preperiod;
} nbs_verdict_params;

NBS_API const char* nbs_version(void);
NBS_API const char* nbs_last_error(void);
NBS_API const char* nbs_status_name(nbs_status status);

NBS_API void nbs_search_params_init(nbs_search_params* params);
NBS_API void nbs_verdict_params_init(nbs_verdict_params* params);

/* Sequences */
NBS_API nbs_status nbs_sequence_from_spec(const char* spec_json, nbs_sequence** out);
NBS_API nbs_status nbs_sequence_load_csv(const char* path, nbs_sequence** out);
NBS_API nbs_status nbs_sequence_from_values(const double* re, const double* im, size_t count,
                                            nbs_sequence** out);
NBS_API void nbs_sequence_free(nbs_sequence* seq);

NBS_API nbs_status nbs_sequence_eval(const nbs_sequence* seq, int64_t n, double* re, double* im);
NBS_API double nbs_sequence_bound(const nbs_sequence* seq);
NBS_API int nbs_sequence_is_exact(const nbs_sequence* seq);
/* Number of stored values for finite sequences, -1 otherwise. */
NBS_API int64_t nbs_sequence_extent(const nbs_sequence* seq);
NBS_API nbs_status nbs_sequence_save_csv(const nbs_sequence* seq, int64_t count, const char* path);
/* CSV text of the first count values, delivered as a report's csv field. */
NBS_API nbs_status nbs_sequence_csv(const nbs_sequence* seq, int64_t count, nbs_report** out);

/* Evaluation */
NBS_API nbs_status nbs_eval_f(const nbs_sequence* seq, double z_re, double z_im, double tol,
                              nbs_report** out);

/* Analyses. "found" is set when the analysis produced the requested finding. */
NBS_API nbs_status nbs_right_limits(const nbs_sequence* seq, int64_t window, int64_t horizon,
                                    double eps, size_t max_candidates, int64_t min_recurrence,
                                    nbs_report** out);
NBS_API nbs_status nbs_certificate(const nbs_sequence* seq, const nbs_search_params* params,
                                   nbs_certificate_mode mode, nbs_report** out);
NBS_API nbs_status nbs_szego(const nbs_sequence* seq, int64_t p_max, int64_t horizon,
                             nbs_report** out);
NBS_API nbs_status nbs_periodicity(const nbs_sequence* seq, int64_t max_period,
                                   int64_t max_preperiod, int64_t horizon, double tol,
                                   nbs_report** out);
NBS_API nbs_status nbs_verdict(const nbs_sequence* seq, const nbs_verdict_params* params,
                               nbs_report** out);
/* full != 0 selects the whole circle and ignores alpha/beta. */
NBS_API nbs_status nbs_probe(const nbs_sequence* seq, int full, double alpha, double beta,
                             const double* radii, size_t radius_count, int64_t quad_points,
                             double tol, nbs_report** out);
NBS_API nbs_status nbs_reflectionless_periodic(const double* re, const double* im, size_t period,
                                               int full, double alpha, double beta,
                                               nbs_report** out);
/* values b_{-W}..b_{W}; side 0 = positive indices, 1 = negative. */
NBS_API nbs_status nbs_decay_rule(const double* re, const double* im, int64_t window, int side,
                                  double C, double D, double delta, nbs_report** out);
NBS_API nbs_status nbs_montecarlo(const char* process_json, int64_t trials, int64_t window,
                                  int64_t horizon, double eps, double delta, nbs_report** out);

/* Reports */
NBS_API const char* nbs_report_json(const nbs_report* report);
NBS_API const char* nbs_report_csv(const nbs_report* report); /* NULL when absent */
NBS_API int nbs_report_found(const nbs_report* report);
NBS_API void nbs_report_free(nbs_report* report);

#ifdef __cplusplus
}
#endif

#endif
