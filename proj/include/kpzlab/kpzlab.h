/* C interface to kpzlab. All functions return a kpz_status; on failure the
 * message is available from kpz_last_error() on the calling thread. Strings
 * returned through char** are owned by the caller and released with
 * kpz_string_free. */
#ifndef KPZLAB_H
#define KPZLAB_H

#include <stddef.h>
#include <stdint.h>

#if defined(KPZ_BUILDING_LIBRARY)
#define KPZ_API __attribute__((visibility("default")))
#else
#define KPZ_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum kpz_status {
  KPZ_OK = 0,
  KPZ_E_INVALID_ARGUMENT = 1,
  KPZ_E_INVALID_ORDERING = 2,
  KPZ_E_WINDOW_TOO_SMALL = 3,
  KPZ_E_WINDOW_ESCAPE = 4,
  KPZ_E_OUT_OF_RANGE = 5,
  KPZ_E_STATE_SPACE_TOO_LARGE = 6,
  KPZ_E_POLE_PROXIMITY = 7,
  KPZ_E_NO_CONVERGENCE = 8,
  KPZ_E_COLLIDED_ROOTS = 9,
  KPZ_E_NULL_VECTOR = 10,
  KPZ_E_CACHE_MISS = 11,
  KPZ_E_ESSENTIAL_SINGULARITY = 12,
  KPZ_E_CHART_SINGULARITY = 13,
  KPZ_E_GRID_COVERAGE = 14,
  KPZ_E_BLOW_UP = 15,
  KPZ_E_EMPTY_SAMPLE = 16,
  KPZ_E_CONFIG = 17,
  KPZ_E_IO = 18,
  KPZ_E_INTERNAL = 99
} kpz_status;

KPZ_API const char* kpz_version(void);
KPZ_API const char* kpz_last_error(void);
KPZ_API const char* kpz_status_name(kpz_status status);
KPZ_API void kpz_string_free(char* s);

/* Runs a CLI subcommand (or "run-experiment") with JSON parameters; the
 * report is a JSON object with at least "pass" and "checks". */
KPZ_API kpz_status kpz_run_command(const char* name, const char* params_json, char** report_json);

/* Tracy-Widom F2 table. */
typedef struct kpz_tw kpz_tw;
KPZ_API kpz_status kpz_tw_create(double s_min, double s_max, double step, kpz_tw** out);
KPZ_API kpz_status kpz_tw_cdf(const kpz_tw* tw, double s, double* out);
KPZ_API kpz_status kpz_tw_pdf(const kpz_tw* tw, double s, double* out);
KPZ_API kpz_status kpz_tw_moments(const kpz_tw* tw, double* mean, double* variance);
KPZ_API void kpz_tw_destroy(kpz_tw* tw);

/* ASEP trajectory with its event log. p is the left-jump probability. */
typedef struct kpz_trajectory kpz_trajectory;
KPZ_API kpz_status kpz_simulate_step(double p, double t_end, uint64_t seed, kpz_trajectory** out);
KPZ_API kpz_status kpz_simulate_ring(const long* sites, size_t n, long length, double p, double t_end, uint64_t seed,
                                     kpz_trajectory** out);
KPZ_API kpz_status kpz_trajectory_events(const kpz_trajectory* traj, size_t* count);
KPZ_API kpz_status kpz_trajectory_height(const kpz_trajectory* traj, double t, long x, long* out);
KPZ_API void kpz_trajectory_destroy(kpz_trajectory* traj);

/* Exact transition probability P_y(x; t) for n <= 3 particles on Z. */
KPZ_API kpz_status kpz_transition_probability(const long* y, const long* x, size_t n, double t, double p, double* out);

/* Ascending eigenvalues of one GUE draw; out must hold n doubles. */
KPZ_API kpz_status kpz_gue_eigenvalues(int n, uint64_t seed, double* out);

/* Topological recursion cache. */
typedef struct kpz_recursion kpz_recursion;
KPZ_API kpz_status kpz_recursion_create(kpz_recursion** out);
KPZ_API kpz_status kpz_recursion_json(kpz_recursion* rec, int g, int k, char** out);
/* Moment-normalised expansion coefficients c_0..c_order of W_{g,1} as
 * doubles; out must hold order + 1 values. */
KPZ_API kpz_status kpz_recursion_expand(kpz_recursion* rec, int g, int order, double* out);
KPZ_API void kpz_recursion_destroy(kpz_recursion* rec);

#ifdef __cplusplus
}
#endif

#endif
