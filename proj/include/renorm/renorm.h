#ifndef RENORM_RENORM_H
#define RENORM_RENORM_H

/* C interface to the renormalized volume and area engine. Every call that can
 * fail returns an rn_status; the message of the last failure on the calling
 * thread is available from rn_last_error(). Strings returned by the library
 * stay valid until the owning handle is freed (or, for rn_last_error, until the
 * next failing call on the same thread). */

#include <stddef.h>

#if defined(_WIN32)
#define RN_API __declspec(dllexport)
#else
#define RN_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rn_status {
    RN_OK = 0,
    RN_INVALID_ARGUMENT = 1,
    RN_SINGULAR_METRIC,
    RN_DIMENSION_UNSUPPORTED,
    RN_SHAPE_MISMATCH,
    RN_INDETERMINACY,
    RN_INSUFFICIENT_ORDER,
    RN_GAUGE_BREAKDOWN,
    RN_DOMAIN,
    RN_INVERSION,
    RN_RESOLUTION,
    RN_FIT_DEGENERACY,
    RN_DEGENERATE_ENDPOINTS,
    RN_NO_CONVERGENCE,
    RN_SYMMETRY,
    RN_IMMERSION,
    RN_PARSE,
    RN_INTERNAL = 100
} rn_status;

typedef struct rn_config rn_config;
typedef struct rn_report rn_report;
typedef struct rn_graph rn_graph;

RN_API const char* rn_version(void);
RN_API const char* rn_status_name(rn_status status);
RN_API const char* rn_last_error(void);

/* Run configuration: keys are the long flag names ("model", "eps-lo", ...). */
RN_API rn_status rn_config_create(rn_config** out);
RN_API void rn_config_free(rn_config* config);
RN_API rn_status rn_config_set(rn_config* config, const char* key, const char* value);
/* Current value as text; empty when unset. */
RN_API rn_status rn_config_get(const rn_config* config, const char* key, const char** value);
RN_API rn_status rn_config_validate(const rn_config* config);
RN_API size_t rn_config_key_count(void);
RN_API const char* rn_config_key(size_t index);

typedef struct rn_row {
    const char* quantity;
    double value;
    double crosscheck; /* NaN without a cross-check */
    double abs_err;
    double rel_err;
    double tol;
    int has_crosscheck;
    int relative; /* tolerance applies to the relative error */
    int pass;
} rn_row;

RN_API rn_status rn_run(const rn_config* config, rn_report** out);
RN_API void rn_report_free(rn_report* report);
RN_API const char* rn_report_title(const rn_report* report);
RN_API size_t rn_report_note_count(const rn_report* report);
RN_API const char* rn_report_note(const rn_report* report, size_t index);
RN_API size_t rn_report_row_count(const rn_report* report);
RN_API rn_status rn_report_row(const rn_report* report, size_t index, rn_row* out);
RN_API int rn_report_passed(const rn_report* report);

/* Direct entry points. */
RN_API rn_status rn_hyperbolic_reference(int n, double* out);
/* V and, for even n, L (has_L set to 1) of hyperbolic space at default resolution. */
RN_API rn_status rn_renormalized_volume_hyperbolic(int n, double* V, double* L, int* has_L);

RN_API rn_status rn_graph_totally_geodesic(int k, int n, rn_graph** out);
/* p and q hold n chart coordinates each. */
RN_API rn_status rn_graph_geodesic(int n, const double* p, const double* q, rn_graph** out);
RN_API rn_status rn_graph_latitude(double theta0, rn_graph** out);
RN_API rn_status rn_graph_coaxial_torus(double a, rn_graph** out);
RN_API void rn_graph_free(rn_graph* graph);
RN_API int rn_graph_dimension(const rn_graph* graph);
RN_API rn_status rn_renormalized_area(const rn_graph* graph, double* A, double* K, int* has_K);
/* gauge_change is NaN (has_gauge 0) when the gauge route does not apply. */
RN_API rn_status rn_area_anomaly(const rn_graph* graph, const char* upsilon, double* anomaly, double* gauge_change,
                                 int* has_gauge);

#ifdef __cplusplus
}
#endif

#endif
