/* mutfront: delayed two-species mutualistic reaction-diffusion solver with
 * two moving habitat fronts.
 *
 * All entry points return mf_status; every other output travels through
 * pointers.  On failure, mf_last_error() returns a thread-local message for
 * the most recent failing call on this thread.  Handles are opaque; free them
 * with their matching *_free, which all accept NULL.
 */
#ifndef MUTFRONT_H
#define MUTFRONT_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mf_status {
  MF_OK = 0,
  MF_ERR_INVALID = 1,    /* bad argument, parameter, or profile */
  MF_ERR_PARSE = 2,      /* malformed config or file contents */
  MF_ERR_SCHEMA = 3,     /* unsupported schema / format version */
  MF_ERR_VALIDATION = 4, /* well-formed but inconsistent configuration */
  MF_ERR_IO = 5,         /* filesystem failure */
  MF_ERR_UNSTABLE = 6,   /* solver lost finiteness and could not recover */
  MF_ERR_REGIME = 7,     /* operation not meaningful for these coefficients */
  MF_ERR_NOMEM = 8,
  MF_ERR_INTERNAL = 9
} mf_status;

const char* mf_version(void);
const char* mf_status_name(mf_status s);
const char* mf_last_error(void);

/* ---- parameters and closed-form analysis ------------------------------- */

typedef struct mf_params {
  double d1, d2;     /* diffusivities */
  double a1, a2;     /* intrinsic growth rates */
  double b1, b2;     /* self-limitation of u / feedback of u onto v */
  double c1, c2;     /* feedback of v onto u / self-limitation of v */
  double mu;         /* front response to the boundary gradient of u */
  double b;          /* initial habitat half-width */
  double tau1, tau2; /* delays: v seen by u, u seen by v */
} mf_params;

mf_status mf_params_validate(const mf_params* p);

/* value = b1 c2 - b2 c1; label: +1 weak, -1 strong, 0 critical */
mf_status mf_regime_discriminant(const mf_params* p, double* value, int* label);

/* d_i (pi / (2 b))^2 for species 1 or 2 */
mf_status mf_spreading_threshold(const mf_params* p, int species, double* out);

/* Weak-regime invariant ceilings, inflation m > 1 */
mf_status mf_bounds(const mf_params* p, double m, double* k1, double* k2);

/* Principal Dirichlet eigenvalue of -d1 f'' - drift f' on (-b, b) */
mf_status mf_shifted_eigenvalue(const mf_params* p, double drift, double* out);

typedef struct mf_supersolution {
  double k, b0, beta, gamma, delta, v_bar;
  int admissible; /* nonzero iff b <= b0 */
} mf_supersolution;

mf_status mf_fast_supersolution(const mf_params* p, double k, mf_supersolution* out);

/* ---- configuration ------------------------------------------------------ */

typedef struct mf_config mf_config;

mf_status mf_config_from_file(const char* path, mf_config** out);
mf_status mf_config_from_text(const char* json_text, mf_config** out);
mf_status mf_config_from_preset(const char* name, mf_config** out);
mf_status mf_config_set_mode(mf_config* c, const char* mode);
mf_status mf_config_set_out_dir(mf_config* c, const char* dir);
const char* mf_config_mode(const mf_config* c);
void mf_config_free(mf_config* c);

/* ---- single simulation -------------------------------------------------- */

typedef struct mf_sim mf_sim;
typedef struct mf_result mf_result;

mf_status mf_sim_create(const mf_config* c, mf_sim** out);
mf_status mf_sim_run(mf_sim* s, mf_result** out);
/* u/v at physical x for the current state (u is 0 outside the habitat) */
mf_status mf_sim_sample(const mf_sim* s, double x, double* u, double* v);
double mf_sim_time(const mf_sim* s);
mf_status mf_sim_front(const mf_sim* s, double* g, double* h, double* g_dot, double* h_dot);
void mf_sim_free(mf_sim* s);

/* "Blowup", "GlobalFast", "GlobalSlow", or "Undetermined" */
const char* mf_result_classification(const mf_result* r);
/* returns 1 and fills t_blow when the run blew up, else 0 */
int mf_result_blowup(const mf_result* r, double* t_blow);
mf_status mf_result_front_final(const mf_result* r, double* g, double* h,
                                double* g_dot, double* h_dot);
/* full report; free with mf_string_free.  with_timestamp = 0 gives
 * byte-stable output for identical runs. */
mf_status mf_result_report_json(const mf_result* r, int with_timestamp, char** out);
mf_status mf_result_write_timeseries(const mf_result* r, const char* path);
void mf_result_free(mf_result* r);
void mf_string_free(char* s);

/* ---- whole experiments (what the CLI drives) ---------------------------- */

/* Runs the configured experiment (run / compare / certify-fast / sweep /
 * convergence), writing artifacts under out_dir (NULL: config's own dir).
 * threads <= 0 picks a default; only sweeps parallelize.  summary receives
 * the main report JSON; free with mf_string_free (NULL to skip). */
mf_status mf_experiment_execute(const mf_config* c, const char* out_dir, int threads,
                                int with_timestamp, char** summary);

/* Continues a snapshot to its stored horizon, or to t_end_override if it is a
 * finite number beyond the snapshot time (pass NaN to keep the stored one). */
mf_status mf_experiment_resume(const char* snapshot_path, const char* out_dir,
                               double t_end_override, int with_timestamp,
                               char** summary);

#ifdef __cplusplus
}
#endif

#endif /* MUTFRONT_H */
