/* C interface to the ibody library. All functions are thread-compatible; the
 * last-error message is stored per thread. */
#ifndef IBODY_IBODY_H
#define IBODY_IBODY_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(IBODY_BUILDING_LIBRARY)
#    define IBODY_API __declspec(dllexport)
#  else
#    define IBODY_API __declspec(dllimport)
#  endif
#else
#  define IBODY_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ibody_status {
  IBODY_OK = 0,
  IBODY_ERR_DOMAIN = 1,
  IBODY_ERR_CONFIG = 2,
  IBODY_ERR_RESOURCE = 3,
  IBODY_ERR_CONSTRUCTION = 4,
  IBODY_ERR_IO = 5,
  IBODY_ERR_NULL_ARGUMENT = 6,
  IBODY_ERR_INTERNAL = 7
} ibody_status;

typedef enum ibody_verdict {
  IBODY_VERDICT_INTERSECTION = 0,
  IBODY_VERDICT_NOT_INTERSECTION = 1,
  IBODY_VERDICT_INCONCLUSIVE = 2
} ibody_verdict;

typedef struct ibody_body ibody_body;
typedef struct ibody_result ibody_result;

typedef struct ibody_certificate {
  double min_preimage;
  double residual;
  double residual_scale;
  double max_abs_preimage;
  int rank;
  int argmin_node;
  int verdict; /* ibody_verdict */
} ibody_certificate;

IBODY_API const char* ibody_version(void);
/* Message of the most recent failing call on this thread ("" if none). */
IBODY_API const char* ibody_last_error(void);
IBODY_API const char* ibody_status_string(ibody_status status);

IBODY_API ibody_status ibody_c_n(int n, double* out);
IBODY_API ibody_status ibody_sphere_area(int d, double* out);
/* x0 and x have n entries; x0 is normalized internally. */
IBODY_API ibody_status ibody_bump_eval(int n, const double* x0, double eps, const double* x, double* out);

/* x0 may be NULL (first coordinate axis). eps = 0 gives the ball of radius c_n.
 * grid_resolution <= 0 selects the default. */
IBODY_API ibody_status ibody_body_create(int n, const double* x0, double eps, int grid_resolution, ibody_body** out);
IBODY_API void ibody_body_destroy(ibody_body* body);
IBODY_API ibody_status ibody_body_dim(const ibody_body* body, int* out);
IBODY_API ibody_status ibody_body_radial(const ibody_body* body, const double* x, double* out);
IBODY_API ibody_status ibody_body_norm(const ibody_body* body, const double* x, double* out);
IBODY_API ibody_status ibody_body_extremes(const ibody_body* body, double* rho_min, double* rho_max);
IBODY_API ibody_status ibody_body_grid_size(const ibody_body* body, size_t* out);
/* cache_dir may be NULL (no operator cache). */
IBODY_API ibody_status ibody_body_certificate(const ibody_body* body, const char* cache_dir, ibody_certificate* out);
IBODY_API ibody_status ibody_body_convexity(const ibody_body* body, int num_planes, int m_angles, uint64_t seed,
                                            double* j_min);

/* command: "verify", "scan-epsilon", "asymptotics" or "export-body".
 * config_json: JSON object merged over the defaults (may be NULL). */
IBODY_API ibody_status ibody_run(const char* command, const char* config_json, ibody_result** out);
IBODY_API int ibody_result_exit_code(const ibody_result* result);
IBODY_API const char* ibody_result_report(const ibody_result* result);
IBODY_API const char* ibody_result_summary(const ibody_result* result);
IBODY_API void ibody_result_destroy(ibody_result* result);

/* Resolved configuration as JSON; free with ibody_string_free. */
IBODY_API ibody_status ibody_config_resolve(const char* config_json, char** out);
IBODY_API void ibody_string_free(char* text);

#ifdef __cplusplus
}
#endif

#endif
