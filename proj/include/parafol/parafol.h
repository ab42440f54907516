#ifndef PARAFOL_H
#define PARAFOL_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define PARAFOL_API __declspec(dllexport)
#else
#define PARAFOL_API __attribute__((visibility("default")))
#endif

typedef enum {
  PARAFOL_OK = 0,
  PARAFOL_ERR_PARAMETER = 1,
  PARAFOL_ERR_DOMAIN = 2,
  PARAFOL_ERR_DEGENERATE = 3,
  PARAFOL_ERR_LAYOUT = 4,
  PARAFOL_ERR_NOT_A_KNOT = 5,
  PARAFOL_ERR_POSITIVE_DEFINITE = 6,
  PARAFOL_ERR_INTERFACE = 7,
  PARAFOL_ERR_IO = 8,
  PARAFOL_ERR_UNKNOWN_SCENARIO = 9,
  PARAFOL_ERR_RESOURCE = 10,
  PARAFOL_ERR_PARSE = 11,
  PARAFOL_ERR_INTERNAL = 12,
  PARAFOL_ERR_NULL = 13
} parafol_status;

typedef struct parafol_options parafol_options;
typedef struct parafol_report parafol_report;

/* Message for the last failing call on this thread; never NULL. */
PARAFOL_API const char* parafol_last_error_message(void);
PARAFOL_API const char* parafol_version(void);

PARAFOL_API parafol_status parafol_options_create(parafol_options** out);
PARAFOL_API void parafol_options_destroy(parafol_options* opts);
/* Keys: scenario, braid, surgery, n, side, grid ("N" or "NxMxK"), threads,
   seed, corrupt_alpha ("0"/"1"), finite_difference ("0"/"1"), and
   "tol.<name>" for tolerance overrides. */
PARAFOL_API parafol_status parafol_options_set(parafol_options* opts, const char* key, const char* value);

/* Atlas JSON for the configured scenario. Free with parafol_string_free. */
PARAFOL_API parafol_status parafol_build_json(const parafol_options* opts, char** json_out);

PARAFOL_API parafol_status parafol_verify(const parafol_options* opts, parafol_report** out);
PARAFOL_API void parafol_report_destroy(parafol_report* report);
PARAFOL_API int parafol_report_passed(const parafol_report* report);
PARAFOL_API parafol_status parafol_report_json(const parafol_report* report, int include_timing, char** json_out);
PARAFOL_API parafol_status parafol_report_write(const parafol_report* report, const char* path, int include_timing);

/* CSV samples of one field over a 2-D slice such as "t=0". */
PARAFOL_API parafol_status parafol_sample(const parafol_options* opts, const char* chart, const char* field,
                                          const char* slice, int resolution, char** csv_out);

PARAFOL_API void parafol_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif
