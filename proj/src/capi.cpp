#include "mwsplit.h"

#include <cstring>
#include <string>

#include "mws/analysis.hpp"
#include "mws/bands.hpp"
#include "mws/cascade.hpp"
#include "mws/csv_read.hpp"
#include "mws/errors.hpp"
#include "mws/landau_zener.hpp"
#include "mws/presets.hpp"
#include "mws/recoil_frame.hpp"
#include "mws/runner.hpp"
#include "mws/scenario_io.hpp"
#include "mws/wavefunction.hpp"

struct mws_frame {
  mws::RecoilFrame f;
};
struct mws_bands {
  mws::BandStructure b;
};
struct mws_scenario {
  mws::Scenario s;
};
struct mws_wavefunction {
  mws::Wavefunction w;
};

namespace {

thread_local std::string g_last_error;

mws_status set_error(mws_status code, const char* what) {
  g_last_error = what ? what : "unknown error";
  return code;
}

template <typename Fn>
mws_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const mws::ValidationError& e) {
    return set_error(MWS_ERR_INVALID, e.what());
  } catch (const mws::DomainError& e) {
    return set_error(MWS_ERR_INVALID, e.what());
  } catch (const mws::RangeError& e) {
    return set_error(MWS_ERR_RANGE, e.what());
  } catch (const mws::AccuracyError& e) {
    return set_error(MWS_ERR_ACCURACY, e.what());
  } catch (const mws::IoError& e) {
    return set_error(MWS_ERR_IO, e.what());
  } catch (const std::exception& e) {
    return set_error(MWS_ERR_INTERNAL, e.what());
  } catch (...) {
    return set_error(MWS_ERR_INTERNAL, "unknown exception");
  }
}

mws_status require(bool cond, const char* what) {
  return cond ? MWS_OK : set_error(MWS_ERR_INVALID, what);
}

mws_status fill_buffer(const std::string& text, char* buf, size_t cap,
                       size_t* needed) {
  if (needed) *needed = text.size() + 1;
  if (!buf || cap == 0) return MWS_OK;  // size query
  if (cap < text.size() + 1)
    return set_error(MWS_ERR_INVALID, "buffer too small");
  std::memcpy(buf, text.c_str(), text.size() + 1);
  return MWS_OK;
}

}  // namespace

extern "C" {

const char* mws_last_error(void) { return g_last_error.c_str(); }
const char* mws_version(void) { return mws::version_string(); }

/* ---- frame ---- */

mws_status mws_frame_create(double wavelength_m, double mass_kg,
                            mws_frame** out) {
  if (auto r = require(out != nullptr, "out is null")) return r;
  return guarded([&] {
    *out = new mws_frame{mws::make_recoil_frame(wavelength_m, mass_kg)};
    return MWS_OK;
  });
}

mws_status mws_frame_default(mws_frame** out) {
  if (auto r = require(out != nullptr, "out is null")) return r;
  return guarded([&] {
    *out = new mws_frame{mws::default_frame()};
    return MWS_OK;
  });
}

void mws_frame_free(mws_frame* f) { delete f; }

mws_status mws_frame_constant(const mws_frame* f, const char* name,
                              double* out) {
  if (auto r = require(f && name && out, "null argument")) return r;
  const std::string n = name;
  if (n == "wavelength") *out = f->f.wavelength;
  else if (n == "mass") *out = f->f.mass;
  else if (n == "k_r") *out = f->f.k_r;
  else if (n == "E_r") *out = f->f.E_r;
  else if (n == "v_r") *out = f->f.v_r;
  else if (n == "t_r") *out = f->f.t_r;
  else if (n == "a_r") *out = f->f.a_r;
  else return set_error(MWS_ERR_INVALID, "unknown constant name");
  return MWS_OK;
}

static mws_status to_quantity(mws_kind kind, mws::Quantity* q) {
  switch (kind) {
    case MWS_KIND_LENGTH: *q = mws::Quantity::Length; return MWS_OK;
    case MWS_KIND_TIME: *q = mws::Quantity::Time; return MWS_OK;
    case MWS_KIND_VELOCITY: *q = mws::Quantity::Velocity; return MWS_OK;
    case MWS_KIND_ACCELERATION:
      *q = mws::Quantity::Acceleration;
      return MWS_OK;
    case MWS_KIND_ENERGY: *q = mws::Quantity::Energy; return MWS_OK;
  }
  return set_error(MWS_ERR_INVALID, "unknown quantity kind");
}

mws_status mws_to_recoil(const mws_frame* f, mws_kind kind, double si_value,
                         double* out) {
  if (auto r = require(f && out, "null argument")) return r;
  mws::Quantity q;
  if (auto r = to_quantity(kind, &q)) return r;
  return guarded([&] {
    *out = mws::to_recoil(si_value, q, f->f);
    return MWS_OK;
  });
}

mws_status mws_from_recoil(const mws_frame* f, mws_kind kind,
                           double recoil_value, double* out) {
  if (auto r = require(f && out, "null argument")) return r;
  mws::Quantity q;
  if (auto r = to_quantity(kind, &q)) return r;
  return guarded([&] {
    *out = mws::from_recoil(recoil_value, q, f->f);
    return MWS_OK;
  });
}

/* ---- bands ---- */

mws_status mws_bands_compute(double depth_er, int n_bands, const double* q,
                             size_t nq, int truncation, mws_bands** out) {
  if (auto r = require(out != nullptr, "out is null")) return r;
  return guarded([&] {
    std::vector<double> grid =
        q ? std::vector<double>(q, q + nq) : mws::default_q_grid();
    const int L = truncation > 0 ? truncation : mws::kDefaultTruncation;
    *out = new mws_bands{
        mws::compute_bands(depth_er, n_bands, std::move(grid), L)};
    return MWS_OK;
  });
}

void mws_bands_free(mws_bands* b) { delete b; }

mws_status mws_bands_size(const mws_bands* b, int* n_bands, size_t* nq) {
  if (auto r = require(b != nullptr, "bands is null")) return r;
  if (n_bands) *n_bands = b->b.n_bands();
  if (nq) *nq = b->b.q_grid.size();
  return MWS_OK;
}

mws_status mws_bands_energy(const mws_bands* b, int band, size_t iq,
                            double* out) {
  if (auto r = require(b && out, "null argument")) return r;
  if (band < 0 || band >= b->b.n_bands() || iq >= b->b.q_grid.size())
    return set_error(MWS_ERR_INVALID, "band or q index out of range");
  *out = b->b.energies(band, static_cast<Eigen::Index>(iq));
  return MWS_OK;
}

mws_status mws_bands_gap(const mws_bands* b, int n, double* out) {
  if (auto r = require(b && out, "null argument")) return r;
  return guarded([&] {
    *out = mws::band_gap(b->b, n);
    return MWS_OK;
  });
}

mws_status mws_bands_write_csv(const mws_bands* b, const char* path) {
  if (auto r = require(b && path, "null argument")) return r;
  return guarded([&] {
    mws::write_band_csv(b->b, path);
    return MWS_OK;
  });
}

mws_status mws_band_gap_at(double depth_er, int n, double* out) {
  if (auto r = require(out != nullptr, "out is null")) return r;
  return guarded([&] {
    *out = mws::band_gap_at(depth_er, n);
    return MWS_OK;
  });
}

/* ---- Landau-Zener ---- */

mws_status mws_lz_probability(const mws_frame* f, double gap_er, int n,
                              double accel, double* out) {
  if (auto r = require(f && out, "null argument")) return r;
  return guarded([&] {
    *out = mws::tunneling_probability(gap_er, n, accel, f->f);
    return MWS_OK;
  });
}

mws_status mws_lz_critical_acceleration(const mws_frame* f, double gap_er,
                                        int n, double* out) {
  if (auto r = require(f && out, "null argument")) return r;
  return guarded([&] {
    *out = mws::critical_acceleration(gap_er, n, f->f);
    return MWS_OK;
  });
}

mws_status mws_bloch_period(const mws_frame* f, double accel, double* out) {
  if (auto r = require(f && out, "null argument")) return r;
  return guarded([&] {
    *out = mws::bloch_period(accel, f->f);
    return MWS_OK;
  });
}

mws_status mws_depth_for_probability(const mws_frame* f, double p_target,
                                     int n, double accel, double* out) {
  if (auto r = require(f && out, "null argument")) return r;
  return guarded([&] {
    *out = mws::depth_for_probability(p_target, n, accel, f->f);
    return MWS_OK;
  });
}

mws_status mws_equal_split_probabilities(int m, double* out) {
  if (auto r = require(out != nullptr || m == 1, "out is null")) return r;
  return guarded([&] {
    const auto p = mws::equal_split_probabilities(m);
    for (size_t i = 0; i < p.size(); ++i) out[i] = p[i];
    return MWS_OK;
  });
}

mws_status mws_fractions_to_probabilities(const double* fractions, size_t m,
                                          double* out) {
  if (auto r = require(fractions && (out || m == 1), "null argument"))
    return r;
  return guarded([&] {
    const auto p = mws::fractions_to_probabilities(
        std::vector<double>(fractions, fractions + m));
    for (size_t i = 0; i < p.size(); ++i) out[i] = p[i];
    return MWS_OK;
  });
}

mws_status mws_bragg_pulse_time(const mws_frame* f, int order,
                                double trap_freq_hz, double amplitude_m,
                                double* out) {
  if (auto r = require(f && out, "null argument")) return r;
  return guarded([&] {
    *out = mws::bragg_pulse_time(order, 2.0 * M_PI * trap_freq_hz,
                                 amplitude_m, f->f);
    return MWS_OK;
  });
}

mws_status mws_local_acceleration(double trap_freq_hz, double amplitude_m,
                                  double t, double* out) {
  if (auto r = require(out != nullptr, "out is null")) return r;
  return guarded([&] {
    *out = mws::local_acceleration(2.0 * M_PI * trap_freq_hz, amplitude_m, t);
    return MWS_OK;
  });
}

/* ---- scenarios ---- */

mws_status mws_scenario_parse_file(const char* path, mws_scenario** out) {
  if (auto r = require(path && out, "null argument")) return r;
  return guarded([&] {
    *out = new mws_scenario{mws::load_scenario(path)};
    return MWS_OK;
  });
}

mws_status mws_scenario_parse_string(const char* text, mws_scenario** out) {
  if (auto r = require(text && out, "null argument")) return r;
  return guarded([&] {
    *out = new mws_scenario{mws::parse_scenario(text)};
    return MWS_OK;
  });
}

mws_status mws_scenario_preset(const char* name, mws_scenario** out) {
  if (auto r = require(name && out, "null argument")) return r;
  return guarded([&] {
    *out = new mws_scenario{mws::make_preset(name).scenario};
    return MWS_OK;
  });
}

void mws_scenario_free(mws_scenario* s) { delete s; }

mws_status mws_scenario_set(mws_scenario* s, const char* assignment) {
  if (auto r = require(s && assignment, "null argument")) return r;
  return guarded([&] {
    mws::apply_override(s->s, assignment);
    return MWS_OK;
  });
}

mws_status mws_scenario_name(const mws_scenario* s, char* buf, size_t cap,
                             size_t* needed) {
  if (auto r = require(s != nullptr, "scenario is null")) return r;
  return fill_buffer(s->s.name, buf, cap, needed);
}

mws_status mws_scenario_serialize(const mws_scenario* s, char* buf,
                                  size_t cap, size_t* needed) {
  if (auto r = require(s != nullptr, "scenario is null")) return r;
  return guarded([&] {
    return fill_buffer(mws::serialize_scenario(s->s), buf, cap, needed);
  });
}

mws_status mws_scenario_save(const mws_scenario* s, const char* path) {
  if (auto r = require(s && path, "null argument")) return r;
  return guarded([&] {
    mws::save_scenario(s->s, path);
    return MWS_OK;
  });
}

mws_status mws_preset_names(char* buf, size_t cap, size_t* needed) {
  std::string text;
  for (const auto& n : mws::preset_names()) {
    text += n;
    text += '\n';
  }
  return fill_buffer(text, buf, cap, needed);
}

mws_status mws_schedule_equal_split_csv(const mws_frame* f, int m,
                                        const char* csv_path) {
  if (auto r = require(csv_path != nullptr, "path is null")) return r;
  return guarded([&] {
    const auto syn = mws::synthesize_probability_schedule(
        mws::equal_split_probabilities(m),
        f ? f->f : mws::default_frame());
    mws::write_schedule_csv(syn.rows, csv_path);
    return MWS_OK;
  });
}

mws_status mws_schedule_fractions_csv(const mws_frame* f,
                                      const double* fractions, size_t m,
                                      const char* csv_path) {
  if (auto r = require(fractions && csv_path, "null argument")) return r;
  return guarded([&] {
    const auto syn = mws::synthesize_split_scenario(
        std::vector<double>(fractions, fractions + m),
        f ? f->f : mws::default_frame());
    mws::write_schedule_csv(syn.rows, csv_path);
    return MWS_OK;
  });
}

mws_status mws_schedule_bragg_csv(const mws_frame* f, int order,
                                  double pulse_length_s,
                                  const char* csv_path) {
  if (auto r = require(csv_path != nullptr, "path is null")) return r;
  return guarded([&] {
    mws::BraggOptions opts;
    if (pulse_length_s > 0.0) opts.pulse_length = pulse_length_s;
    const auto syn = mws::synthesize_bragg_scenario(
        order, f ? f->f : mws::default_frame(), opts);
    mws::write_schedule_csv(syn.rows, csv_path);
    return MWS_OK;
  });
}

/* ---- running ---- */

void mws_run_options_init(mws_run_options* opts) {
  if (!opts) return;
  opts->engine = MWS_ENGINE_BOTH;
  opts->jobs = 1;
  opts->verbose = 0;
}

mws_status mws_run(const mws_scenario* s, const mws_run_options* opts,
                   const char* out_dir) {
  if (auto r = require(s && out_dir, "null argument")) return r;
  return guarded([&] {
    mws::RunOptions ro;
    if (opts) {
      ro.engine = opts->engine == MWS_ENGINE_EVENT
                      ? mws::Engine::Event
                      : opts->engine == MWS_ENGINE_WAVE ? mws::Engine::Wave
                                                        : mws::Engine::Both;
      ro.jobs = opts->jobs > 0 ? opts->jobs : 1;
      ro.verbose = opts->verbose != 0;
    }
    mws::run_to_directory(s->s, ro, out_dir);
    return MWS_OK;
  });
}

/* ---- analysis ---- */

mws_status mws_analyze_density_csv(const char* density_csv,
                                   double threshold_frac,
                                   double min_separation,
                                   const char* packets_csv, char* summary,
                                   size_t cap, size_t* needed) {
  if (auto r = require(density_csv != nullptr, "density path is null"))
    return r;
  return guarded([&] {
    const auto profile = mws::read_density_csv(density_csv);
    const auto ps = mws::detect_packets(
        profile.density, profile.x, mws::Axis::Position,
        threshold_frac > 0.0 ? threshold_frac : mws::kDefaultThresholdFrac,
        min_separation > 0.0 ? min_separation
                             : mws::kDefaultMinSeparationPos);
    if (packets_csv) mws::write_packet_csv(ps, packets_csv);
    return fill_buffer(mws::packet_summary(ps), summary, cap, needed);
  });
}

/* ---- wavefunction checkpoints ---- */

mws_status mws_wavefunction_load(const char* path, mws_wavefunction** out) {
  if (auto r = require(path && out, "null argument")) return r;
  return guarded([&] {
    *out = new mws_wavefunction{mws::load_checkpoint(path)};
    return MWS_OK;
  });
}

mws_status mws_wavefunction_save(const mws_wavefunction* w,
                                 const char* path) {
  if (auto r = require(w && path, "null argument")) return r;
  return guarded([&] {
    mws::save_checkpoint(w->w, path);
    return MWS_OK;
  });
}

mws_status mws_wavefunction_info(const mws_wavefunction* w,
                                 uint64_t* n_points, double* x_min_m,
                                 double* x_max_m, double* time_s,
                                 double* norm) {
  if (auto r = require(w != nullptr, "wavefunction is null")) return r;
  if (n_points) *n_points = static_cast<uint64_t>(w->w.n());
  if (x_min_m) *x_min_m = w->w.x_min / w->w.frame.k_r;
  if (x_max_m) *x_max_m = w->w.x_max / w->w.frame.k_r;
  if (time_s) *time_s = w->w.time_si();
  if (norm) *norm = w->w.norm();
  return MWS_OK;
}

mws_status mws_wavefunction_amplitudes(const mws_wavefunction* w,
                                       double* out) {
  if (auto r = require(w && out, "null argument")) return r;
  for (int i = 0; i < w->w.n(); ++i) {
    out[2 * i] = w->w.psi[i].real();
    out[2 * i + 1] = w->w.psi[i].imag();
  }
  return MWS_OK;
}

void mws_wavefunction_free(mws_wavefunction* w) { delete w; }

}  // extern "C"
