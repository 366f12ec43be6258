/* C interface to the fibercz library. All objects are opaque handles owned
 * by the caller and released with the matching *_destroy function. Strings
 * returned through char** out-parameters are released with fcz_string_free.
 * On failure a function returns a non-zero status and fcz_last_error()
 * describes the problem; out-parameters are left untouched. */
#ifndef FIBERCZ_H
#define FIBERCZ_H

#include <stddef.h>
#include <stdint.h>

#if defined(FIBERCZ_BUILDING_LIBRARY)
#define FCZ_API __attribute__((visibility("default")))
#else
#define FCZ_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fcz_status {
    FCZ_OK = 0,
    FCZ_INVALID_ARGUMENT = 1,
    FCZ_PARSE_ERROR = 2,
    FCZ_IO_ERROR = 3,
    FCZ_INTERNAL_ERROR = 4
} fcz_status;

typedef enum fcz_axis { FCZ_AXIS_X = 0, FCZ_AXIS_Y = 1 } fcz_axis;

typedef struct fcz_signal fcz_signal; /* sampled 1D function */
typedef struct fcz_tensor fcz_tensor; /* finite sum of fiber x row-set terms */
typedef struct fcz_dense fcz_dense;   /* 2D samples, row-major, one row per y */
typedef struct fcz_config fcz_config; /* filters and scale ladder */

/* Message of the last failure on the calling thread ("" if none). */
FCZ_API const char* fcz_last_error(void);
FCZ_API const char* fcz_version(void);
FCZ_API void fcz_string_free(char* s);

/* 1D signals */
FCZ_API fcz_status fcz_signal_create(double origin, double step, size_t count, const double* values,
                                     fcz_signal** out);
FCZ_API fcz_status fcz_signal_from_json(const char* json, fcz_signal** out);
FCZ_API fcz_status fcz_signal_to_json(const fcz_signal* s, char** out);
/* "x,value" lines. */
FCZ_API fcz_status fcz_signal_to_csv(const fcz_signal* s, char** out);
FCZ_API size_t fcz_signal_size(const fcz_signal* s);
FCZ_API const double* fcz_signal_values(const fcz_signal* s);
FCZ_API void fcz_signal_destroy(fcz_signal* s);

/* Tensor functions */
FCZ_API fcz_status fcz_tensor_from_json(const char* json, fcz_tensor** out);
FCZ_API fcz_status fcz_tensor_to_json(const fcz_tensor* t, char** out);
FCZ_API fcz_status fcz_tensor_to_dense(const fcz_tensor* t, fcz_dense** out);
FCZ_API double fcz_tensor_l1_norm(const fcz_tensor* t);
FCZ_API void fcz_tensor_destroy(fcz_tensor* t);

/* Dense 2D functions. values holds count_y rows of count_x samples. */
FCZ_API fcz_status fcz_dense_create(double origin_x, double step_x, size_t count_x, double origin_y, double step_y,
                                    size_t count_y, const double* values, fcz_dense** out);
/* Accepts dense and tensor documents. */
FCZ_API fcz_status fcz_dense_from_json(const char* json, fcz_dense** out);
FCZ_API fcz_status fcz_dense_to_json(const fcz_dense* d, char** out);
FCZ_API fcz_status fcz_dense_to_csv(const fcz_dense* d, char** out);
FCZ_API size_t fcz_dense_count_x(const fcz_dense* d);
FCZ_API size_t fcz_dense_count_y(const fcz_dense* d);
FCZ_API const double* fcz_dense_values(const fcz_dense* d);
FCZ_API void fcz_dense_destroy(fcz_dense* d);

/* Operator configuration; strict puts psi in both slots of T. */
FCZ_API fcz_status fcz_config_default(int strict, fcz_config** out);
FCZ_API fcz_status fcz_config_from_json(const char* json, fcz_config** out);
FCZ_API void fcz_config_destroy(fcz_config* c);

/* Decompositions, reported as JSON. invariants_ok may be NULL. */
FCZ_API fcz_status fcz_decompose_1d(const fcz_signal* f, double gamma, char** json, int* invariants_ok);
FCZ_API fcz_status fcz_fiberwise_decompose(const fcz_tensor* f, double gamma, unsigned threads, char** json);

/* Operators. A NULL config means the default configuration. */
FCZ_API fcz_status fcz_apply_pi(const fcz_signal* f, const fcz_signal* g, const fcz_config* c, fcz_signal** out);
FCZ_API fcz_status fcz_apply_T(const fcz_dense* f, const fcz_dense* g, const fcz_config* c, unsigned threads,
                               fcz_dense** out);
FCZ_API fcz_status fcz_apply_T_fiberwise(const fcz_tensor* f, const fcz_dense* g, const fcz_config* c,
                                         unsigned threads, fcz_dense** out);
FCZ_API fcz_status fcz_apply_T1(const fcz_dense* h, const fcz_dense* g, const fcz_config* c, fcz_dense** out);
FCZ_API fcz_status fcz_apply_T2(const fcz_dense* f, const fcz_dense* h, const fcz_config* c, fcz_dense** out);
FCZ_API fcz_status fcz_maximal_axis(const fcz_dense* g, fcz_axis axis, fcz_dense** out);
FCZ_API fcz_status fcz_inner_product(const fcz_dense* a, const fcz_dense* b, double* out);
/* p = INFINITY gives the sup norm. */
FCZ_API fcz_status fcz_lp_norm(const fcz_dense* f, double p, double* out);

/* "x,value" CSV of the mother ("psi" or "phi") dilated by t (t = 1: the mother). */
FCZ_API fcz_status fcz_filter_profile_csv(const char* kind, const fcz_config* c, double t, char** csv);

/* Invariant suites: "czd", "filters", "operators", "norms" or "all". */
FCZ_API fcz_status fcz_verify(const char* suite, uint64_t seed, unsigned threads, char** report, int* passed);
/* Experiments by name with an ExperimentConfig JSON ("{}" for defaults).
 * csv receives plot data and may be NULL. */
FCZ_API fcz_status fcz_sweep(const char* name, const char* config_json, unsigned threads, char** report, char** csv,
                             int* passed);

#ifdef __cplusplus
}
#endif

#endif
