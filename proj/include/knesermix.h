/* knesermix C API: mixing-time analysis of simple random walks on Kneser
 * graphs K(2n+k, n). Opaque handles own the computed reports; every call
 * returns a km_status and the last failure message is available per thread
 * via km_last_error(). Rendered reports are heap strings released with
 * km_string_free(). */

#ifndef KNESERMIX_H
#define KNESERMIX_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum km_status {
  KM_OK = 0,
  KM_ERR_INVALID_ARGUMENT = 1, /* bad parameters (n < 1, k < 1, eps out of range, ...) */
  KM_ERR_SIZE_LIMIT = 2,       /* oracle instance above the enumeration cap */
  KM_ERR_MEMORY_LIMIT = 3,     /* dense kernel too large; rerun with row streaming */
  KM_ERR_NOMEM = 4,
  KM_ERR_INTERNAL = 5
} km_status;

typedef enum km_format { KM_FORMAT_CSV = 0, KM_FORMAT_JSON = 1 } km_format;

typedef enum km_sim_mode { KM_SIM_EXPLICIT = 0, KM_SIM_LUMPED = 1 } km_sim_mode;

const char* km_version(void);

/* Message for the most recent failing call on this thread; empty if none. */
const char* km_last_error(void);

void km_string_free(char* s);

/* Quick parameter validation: n >= 1, k >= 1. */
km_status km_params_validate(int64_t n, int64_t k);

/* ---- profile: per-step exact d(t), bounds and statistic moments ---- */

typedef struct km_profile km_profile;

typedef struct km_profile_row {
  int64_t t;
  /* absent values (bounds-only mode, inapplicable g bound) are NaN */
  double d_exact;
  double spectral_upper;
  double g_bound;
  double wilson_lower_exact;
  double wilson_lower_analytic;
  double ef_t;
  double varf_t;
} km_profile_row;

km_status km_profile_run(int64_t n, int64_t k, int64_t t_max, int bounds_only,
                         int stream_rows, km_profile** out);
int64_t km_profile_row_count(const km_profile* p);
km_status km_profile_get_row(const km_profile* p, int64_t index, km_profile_row* out);
km_status km_profile_render(const km_profile* p, km_format format,
                            const char* config_json, char** out);
void km_profile_free(km_profile* p);

/* ---- mix: mixing times, cutoff location and window diagnostics ---- */

typedef struct km_mix km_mix;

km_status km_mix_run(int64_t n, int64_t k, const double* eps, size_t eps_count,
                     int stream_rows, km_mix** out);
double km_mix_t_star(const km_mix* m);
double km_mix_window_scale(const km_mix* m);
double km_mix_cutoff_ratio(const km_mix* m);
km_status km_mix_time(const km_mix* m, double eps, int64_t* out);
km_status km_mix_render(const km_mix* m, km_format format, const char* config_json,
                        char** out);
void km_mix_free(km_mix* m);

/* ---- window: d at floor(t* + c n/k) over a grid of c ---- */

typedef struct km_window km_window;

km_status km_window_run(int64_t n, int64_t k, const double* c_grid, size_t count,
                        int exact_mode, int stream_rows, km_window** out);
km_status km_window_render(const km_window* w, km_format format,
                           const char* config_json, char** out);
void km_window_free(km_window* w);

/* ---- spectrum: eigenvalues and multiplicities of the walk ---- */

typedef struct km_spectrum km_spectrum;

km_status km_spectrum_run(int64_t n, int64_t k, km_spectrum** out);
int64_t km_spectrum_entry_count(const km_spectrum* s);
km_status km_spectrum_get(const km_spectrum* s, int64_t index, double* eigenvalue,
                          double* log_multiplicity);
km_status km_spectrum_render(const km_spectrum* s, km_format format,
                             const char* config_json, char** out);
void km_spectrum_free(km_spectrum* s);

/* ---- simulate: seeded Monte Carlo cross-validation of the moments ---- */

typedef struct km_sim km_sim;

km_status km_simulate_run(int64_t n, int64_t k, int64_t walks, int64_t horizon,
                          uint64_t seed, km_sim_mode mode, int threads,
                          km_sim** out);
km_status km_sim_render(const km_sim* s, km_format format, const char* config_json,
                        char** out);
void km_sim_free(km_sim* s);

/* ---- oracle-check: brute-force certification on tiny instances ---- */

typedef struct km_oracle_check km_oracle_check;

km_status km_oracle_check_run(int64_t n, int64_t k, int64_t t_max,
                              km_oracle_check** out);
int km_oracle_check_passed(const km_oracle_check* c);
km_status km_oracle_check_render(const km_oracle_check* c, km_format format,
                                 const char* config_json, char** out);
void km_oracle_check_free(km_oracle_check* c);

#ifdef __cplusplus
}
#endif

#endif /* KNESERMIX_H */
