/* C interface to the k3h library: canonical heights on the boundary of the
 * ample cone of Wehler K3 surfaces.
 *
 * Every function returns a k3h_status; on failure k3h_last_error() holds a
 * message for the calling thread. Objects are opaque and owned by the caller
 * (free with the matching *_free). Strings returned through char** are
 * heap-allocated and released with k3h_string_free.
 */
#ifndef K3H_H
#define K3H_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(__GNUC__)
#define K3H_API __attribute__((visibility("default")))
#else
#define K3H_API
#endif

typedef enum k3h_status {
  K3H_OK = 0,
  K3H_INVALID_ARGUMENT = 1,
  K3H_DIMENSION_MISMATCH = 2,
  K3H_NOT_ISOMETRY = 3,
  K3H_NO_INTEGRAL_FIXED_NULL_VECTOR = 4,
  K3H_NON_PARABOLIC_INPUT = 5,
  K3H_XI_NOT_ORTHOGONAL_TO_E = 6,
  K3H_NON_POSITIVE_VECTOR = 7,
  K3H_MAX_LETTERS_EXCEEDED = 8,
  K3H_NOT_REDUCIBLE = 9,
  K3H_DEGENERATE_FIBER = 10,
  K3H_BIT_GUARD_EXCEEDED = 11,
  K3H_NOT_ON_SURFACE = 12,
  K3H_NON_CONVERGED_SAMPLES = 13,
  K3H_PARSE_ERROR = 14,
  K3H_IO_ERROR = 15,
  K3H_INTERNAL = 99
} k3h_status;

typedef struct k3h_surface k3h_surface;
typedef struct k3h_point k3h_point;
typedef struct k3h_engine k3h_engine;
typedef struct k3h_starset k3h_starset;

typedef struct k3h_options {
  double tol;          /* default 1e-4 */
  size_t max_letters;  /* default 60 */
  size_t guard_bits;   /* default 200000 */
} k3h_options;

typedef struct k3h_height {
  double value;
  double err;
  size_t n;
  int converged;
} k3h_height;

typedef struct k3h_integral {
  double value;
  double err;
  double quadrature_err;
  size_t non_converged;
  size_t failed;
  int flagged; /* more than 5% of the grid unconverged or failed */
} k3h_integral;

typedef struct k3h_shape {
  int positive;
  int continuous;
  double max_jump;
  double median_jump;
} k3h_shape;

K3H_API const char* k3h_version(void);
K3H_API const char* k3h_last_error(void);
K3H_API const char* k3h_status_name(k3h_status status);
K3H_API void k3h_string_free(char* s);
K3H_API void k3h_options_default(k3h_options* out);

/* Surfaces: {"coeffs": 3x3x3 nested "p/q" strings}. */
K3H_API k3h_status k3h_surface_default(k3h_surface** out);
K3H_API k3h_status k3h_surface_from_json(const char* json, k3h_surface** out);
K3H_API void k3h_surface_free(k3h_surface* s);
K3H_API k3h_status k3h_surface_to_json(const k3h_surface* s, char** json);
K3H_API k3h_status k3h_surface_hash(const k3h_surface* s, uint64_t* out);
/* Membership and involution sanity on the points of height <= bound. */
K3H_API k3h_status k3h_surface_check(const k3h_surface* s, long bound, char** json);

/* Points: {"x":["a","b"],"y":["c","d"],"z":["e","f"]}. */
K3H_API k3h_status k3h_point_from_json(const char* json, k3h_point** out);
K3H_API k3h_status k3h_point_to_json(const k3h_point* p, char** json);
K3H_API void k3h_point_free(k3h_point* p);
/* Named points of the default surface: "generic" (index < count),
 * "fixed", "order_two", "periodic". */
K3H_API k3h_status k3h_point_default(const char* name, size_t index, k3h_point** out);
K3H_API size_t k3h_default_generic_count(void);
K3H_API k3h_status k3h_surface_contains(const k3h_surface* s, const k3h_point* p, int* on_surface);
K3H_API k3h_status k3h_involution(const k3h_surface* s, int axis, const k3h_point* p, k3h_point** out);
/* JSON array of points with x, y of height <= bound. */
K3H_API k3h_status k3h_find_points(const k3h_surface* s, long bound, char** json);
/* {"status":..., "repeat_step":..., "period":..., "heights":[...], "points":[...]} */
K3H_API k3h_status k3h_orbit(const k3h_surface* s, const k3h_point* p, const int* letters, size_t n_letters,
                             size_t guard_bits, char** json);
/* Isometry class of the NS action of a word: {"kind":..., ...}. */
K3H_API k3h_status k3h_classify_word(const int* letters, size_t n_letters, char** json);

/* Engines own a copy of the surface and an orbit cache (persisted when
 * cache_dir is non-NULL). Engines are safe to share across threads. */
K3H_API k3h_status k3h_engine_new(const k3h_surface* s, const char* cache_dir, k3h_engine** out);
K3H_API void k3h_engine_free(k3h_engine* e);
K3H_API k3h_status k3h_engine_cache_stats(const k3h_engine* e, size_t* hits, size_t* misses);

/* Heights. json (nullable) receives {"value","err","n","converged","note"}. */
K3H_API k3h_status k3h_height_irrational(const k3h_engine* e, const k3h_point* p, const double* dir, size_t len,
                                         const k3h_options* opt, k3h_height* out, char** json);
K3H_API k3h_status k3h_height_angle(const k3h_engine* e, const k3h_point* p, double theta, const k3h_options* opt,
                                    k3h_height* out, char** json);
K3H_API k3h_status k3h_height_cusp(const k3h_engine* e, const k3h_point* p, const int64_t* fixed_null, size_t len,
                                   double scale, const k3h_options* opt, k3h_height* out, char** json);
K3H_API k3h_status k3h_vcan(const k3h_engine* e, const k3h_point* p, const int* letters, size_t n_letters,
                            size_t n_max, const k3h_options* opt, k3h_height* out, char** json);
K3H_API k3h_status k3h_hyperbolic_height(const k3h_engine* e, const k3h_point* p, const int* letters,
                                         size_t n_letters, int sign, const k3h_options* opt, k3h_height* out,
                                         char** json);

/* Star sets on the uniform grid theta_offset + 2 pi k / samples. */
K3H_API k3h_status k3h_starset_new(const k3h_engine* e, const k3h_point* p, size_t samples, double theta_offset,
                                   unsigned threads, const k3h_options* opt, k3h_starset** out);
K3H_API void k3h_starset_free(k3h_starset* s);
K3H_API k3h_status k3h_starset_csv(const k3h_starset* s, char** csv);
K3H_API k3h_status k3h_starset_total(const k3h_starset* s, k3h_integral* out);
K3H_API k3h_status k3h_starset_volume(const k3h_starset* s, k3h_integral* out);
K3H_API k3h_status k3h_starset_shape(const k3h_starset* s, k3h_shape* out);

/* Total heights over gamma P for reduced words of length <= depth. */
K3H_API k3h_status k3h_invariance_report(const k3h_engine* e, const k3h_point* p, size_t depth, size_t samples,
                                         unsigned threads, const k3h_options* opt, double* max_deviation,
                                         char** json);

/* Property suites: "lattice", "hyperbolic", "wehler", "heights",
 * "invariants" or "all". lattice_json (nullable) replaces the Wehler form in
 * the lattice suite. *passed is 1 iff every property held. */
K3H_API k3h_status k3h_verify(const char* suite, const char* lattice_json, uint64_t seed, const k3h_options* opt,
                              int* passed, char** report_json);

#ifdef __cplusplus
}
#endif

#endif /* K3H_H */
