/* mwsplit - matter-wave splitting toolkit: Landau-Zener cascades, Bloch
 * band structure, depth-schedule synthesis and a split-step wave solver
 * behind a C interface with opaque handles and status codes.
 *
 * Every function returns MWS_OK (0) on success; on failure it returns a
 * status code and mws_last_error() gives a thread-local message. Output
 * parameters are written only on success.
 */
#ifndef MWSPLIT_H
#define MWSPLIT_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define MWS_API __declspec(dllexport)
#else
#define MWS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mws_status {
  MWS_OK = 0,
  MWS_ERR_INVALID = 2,  /* bad arguments or validation failure */
  MWS_ERR_ACCURACY = 3, /* numerical accuracy check failed */
  MWS_ERR_IO = 4,       /* file system problem */
  MWS_ERR_RANGE = 5,    /* target outside the achievable range */
  MWS_ERR_INTERNAL = 6
} mws_status;

MWS_API const char* mws_last_error(void);
MWS_API const char* mws_version(void);

/* ---- recoil frame ------------------------------------------------ */

typedef struct mws_frame mws_frame;

MWS_API mws_status mws_frame_create(double wavelength_m, double mass_kg,
                                    mws_frame** out);
MWS_API mws_status mws_frame_default(mws_frame** out);
MWS_API void mws_frame_free(mws_frame* f);

/* name: one of wavelength, mass, k_r, E_r, v_r, t_r, a_r */
MWS_API mws_status mws_frame_constant(const mws_frame* f, const char* name,
                                      double* out);

typedef enum mws_kind {
  MWS_KIND_LENGTH = 0,
  MWS_KIND_TIME = 1,
  MWS_KIND_VELOCITY = 2,
  MWS_KIND_ACCELERATION = 3,
  MWS_KIND_ENERGY = 4
} mws_kind;

MWS_API mws_status mws_to_recoil(const mws_frame* f, mws_kind kind,
                                 double si_value, double* out);
MWS_API mws_status mws_from_recoil(const mws_frame* f, mws_kind kind,
                                   double recoil_value, double* out);

/* ---- band structure ---------------------------------------------- */

typedef struct mws_bands mws_bands;

/* q = NULL selects the default 257-point grid on [-1, 1]; truncation <= 0
 * selects the default (L = 12). */
MWS_API mws_status mws_bands_compute(double depth_er, int n_bands,
                                     const double* q, size_t nq,
                                     int truncation, mws_bands** out);
MWS_API void mws_bands_free(mws_bands* b);
MWS_API mws_status mws_bands_size(const mws_bands* b, int* n_bands,
                                  size_t* nq);
MWS_API mws_status mws_bands_energy(const mws_bands* b, int band, size_t iq,
                                    double* out);
MWS_API mws_status mws_bands_gap(const mws_bands* b, int n, double* out);
MWS_API mws_status mws_bands_write_csv(const mws_bands* b, const char* path);

/* Single-gap convenience: Delta_n(depth) in E_r. */
MWS_API mws_status mws_band_gap_at(double depth_er, int n, double* out);

/* ---- Landau-Zener quantities -------------------------------------- */

MWS_API mws_status mws_lz_probability(const mws_frame* f, double gap_er,
                                      int n, double accel, double* out);
MWS_API mws_status mws_lz_critical_acceleration(const mws_frame* f,
                                                double gap_er, int n,
                                                double* out);
MWS_API mws_status mws_bloch_period(const mws_frame* f, double accel,
                                    double* out);
MWS_API mws_status mws_depth_for_probability(const mws_frame* f,
                                             double p_target, int n,
                                             double accel, double* out);
/* out must hold m-1 entries */
MWS_API mws_status mws_equal_split_probabilities(int m, double* out);
MWS_API mws_status mws_fractions_to_probabilities(const double* fractions,
                                                  size_t m, double* out);
MWS_API mws_status mws_bragg_pulse_time(const mws_frame* f, int order,
                                        double trap_freq_hz,
                                        double amplitude_m, double* out);
MWS_API mws_status mws_local_acceleration(double trap_freq_hz,
                                          double amplitude_m, double t,
                                          double* out);

/* ---- scenarios ----------------------------------------------------- */

typedef struct mws_scenario mws_scenario;

MWS_API mws_status mws_scenario_parse_file(const char* path,
                                           mws_scenario** out);
MWS_API mws_status mws_scenario_parse_string(const char* text,
                                             mws_scenario** out);
MWS_API mws_status mws_scenario_preset(const char* name, mws_scenario** out);
MWS_API void mws_scenario_free(mws_scenario* s);

/* "key = value" override in the scenario file grammar */
MWS_API mws_status mws_scenario_set(mws_scenario* s, const char* assignment);
MWS_API mws_status mws_scenario_name(const mws_scenario* s, char* buf,
                                     size_t cap, size_t* needed);
MWS_API mws_status mws_scenario_serialize(const mws_scenario* s, char* buf,
                                          size_t cap, size_t* needed);
MWS_API mws_status mws_scenario_save(const mws_scenario* s,
                                     const char* path);

/* newline-separated preset names */
MWS_API mws_status mws_preset_names(char* buf, size_t cap, size_t* needed);

/* Writes the synthesized per-cycle schedule CSV of a preset (or of an
 * equal-split / fractions / bragg goal). */
MWS_API mws_status mws_schedule_equal_split_csv(const mws_frame* f, int m,
                                                const char* csv_path);
MWS_API mws_status mws_schedule_fractions_csv(const mws_frame* f,
                                              const double* fractions,
                                              size_t m, const char* csv_path);
MWS_API mws_status mws_schedule_bragg_csv(const mws_frame* f, int order,
                                          double pulse_length_s,
                                          const char* csv_path);

/* ---- running ------------------------------------------------------- */

typedef enum mws_engine {
  MWS_ENGINE_EVENT = 0,
  MWS_ENGINE_WAVE = 1,
  MWS_ENGINE_BOTH = 2
} mws_engine;

typedef struct mws_run_options {
  mws_engine engine;
  int jobs;
  int verbose;
} mws_run_options;

MWS_API void mws_run_options_init(mws_run_options* opts);

/* Runs the scenario and writes CSV outputs plus manifest.txt into
 * out_dir (created if needed). */
MWS_API mws_status mws_run(const mws_scenario* s,
                           const mws_run_options* opts, const char* out_dir);

/* ---- analysis ------------------------------------------------------ */

/* Reads a density CSV (columns t,x,density; the last time block is
 * analyzed), writes the packet CSV, and returns the plain-text summary. */
MWS_API mws_status mws_analyze_density_csv(const char* density_csv,
                                           double threshold_frac,
                                           double min_separation,
                                           const char* packets_csv,
                                           char* summary, size_t cap,
                                           size_t* needed);

/* ---- wavefunction checkpoints -------------------------------------- */

typedef struct mws_wavefunction mws_wavefunction;

MWS_API mws_status mws_wavefunction_load(const char* path,
                                         mws_wavefunction** out);
MWS_API mws_status mws_wavefunction_save(const mws_wavefunction* w,
                                         const char* path);
MWS_API mws_status mws_wavefunction_info(const mws_wavefunction* w,
                                         uint64_t* n_points, double* x_min_m,
                                         double* x_max_m, double* time_s,
                                         double* norm);
/* re/im interleaved, 2*n_points doubles */
MWS_API mws_status mws_wavefunction_amplitudes(const mws_wavefunction* w,
                                               double* out);
MWS_API void mws_wavefunction_free(mws_wavefunction* w);

#ifdef __cplusplus
}
#endif

#endif /* MWSPLIT_H */
