#include "mws/propagator.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <mutex>

#include "mws/bands.hpp"
#include "mws/errors.hpp"

namespace mws {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

SpectralEngine::SpectralEngine(int n) : n_(n) {
  if (n < 2 || (n & (n - 1)) != 0)
    throw DomainError("spectral grid size must be a power of two");
  buf_ = static_cast<std::complex<double>*>(
      fftw_malloc(sizeof(fftw_complex) * n));
  if (!buf_) throw std::bad_alloc();
  std::lock_guard<std::mutex> lock(planner_mutex());
  auto* raw = reinterpret_cast<fftw_complex*>(buf_);
  plan_fwd_ = fftw_plan_dft_1d(n, raw, raw, FFTW_FORWARD, FFTW_MEASURE);
  plan_bwd_ = fftw_plan_dft_1d(n, raw, raw, FFTW_BACKWARD, FFTW_MEASURE);
}

SpectralEngine::~SpectralEngine() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
  fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
  fftw_free(buf_);
}

void SpectralEngine::load(const std::vector<std::complex<double>>& src) {
  if (static_cast<int>(src.size()) != n_)
    throw DomainError("spectral engine size mismatch");
  std::copy(src.begin(), src.end(), buf_);
}

void SpectralEngine::store(std::vector<std::complex<double>>& dst) const {
  dst.assign(buf_, buf_ + n_);
}

void SpectralEngine::forward() {
  fftw_execute(static_cast<fftw_plan>(plan_fwd_));
}

void SpectralEngine::backward() {
  fftw_execute(static_cast<fftw_plan>(plan_bwd_));
}

SplitStepPropagator::SplitStepPropagator(const PotentialProgram& program,
                                         int n_points)
    : program_(&program), engine_(n_points) {}

void SplitStepPropagator::apply_kick(std::complex<double>* a,
                                     const Wavefunction& wf,
                                     const PotentialProgram::Snapshot& snap,
                                     double half_dt_rec) {
  const bool nonlinear = snap.g1d > 0.0;
  const bool reusable =
      kick_valid_ && !nonlinear && kick_dt_ == half_dt_rec &&
      kick_snap_.depth == snap.depth && kick_snap_.trap_on == snap.trap_on &&
      kick_snap_.center_rec == snap.center_rec &&
      kick_snap_.omega_rec == snap.omega_rec &&
      kick_snap_.gravity_slope == snap.gravity_slope;
  const int n = wf.n();
  if (!reusable) {
    kick_.resize(n);
    for (int i = 0; i < n; ++i) {
      double v = PotentialProgram::value(snap, wf.x(i));
      if (nonlinear) v += snap.g1d * std::norm(a[i]);
      kick_[i] = std::polar(1.0, -v * half_dt_rec);
    }
    kick_snap_ = snap;
    kick_dt_ = half_dt_rec;
    kick_valid_ = !nonlinear;
  }
  for (int i = 0; i < n; ++i) a[i] *= kick_[i];
}

void SplitStepPropagator::check_spectrum(
    const Wavefunction& wf, const std::complex<double>* a) const {
  const int n = wf.n();
  const int edge = std::max(2, n / 256);
  double peak = 0.0;
  for (int j = 0; j < n; ++j) peak = std::max(peak, std::norm(a[j]));
  double rim = 0.0;
  for (int j = n / 2 - edge; j <= n / 2 + edge; ++j)
    rim = std::max(rim, std::norm(a[j]));
  if (peak > 0.0 && rim > 1e-8 * peak) {
    char msg[144];
    std::snprintf(msg, sizeof(msg),
                  "momentum grid overflow (aliasing): density %.3e of peak "
                  "at the Nyquist edge at t = %.6g ms",
                  rim / peak, wf.time_si() * 1e3);
    throw AccuracyError(msg);
  }
}

void SplitStepPropagator::check_boundary(
    const Wavefunction& wf, const std::complex<double>* a) const {
  const int n = wf.n();
  const int edge = std::max(2, n / 256);
  double peak = 0.0;
  for (int i = 0; i < n; ++i) peak = std::max(peak, std::norm(a[i]));
  double rim = 0.0;
  for (int i = 0; i < edge; ++i) {
    rim = std::max(rim, std::norm(a[i]));
    rim = std::max(rim, std::norm(a[n - 1 - i]));
  }
  if (peak > 0.0 && rim > 1e-8 * peak) {
    char msg[128];
    std::snprintf(msg, sizeof(msg),
                  "grid overflow: boundary density %.3e of peak at t = %.6g ms",
                  rim / peak, wf.time_si() * 1e3);
    throw AccuracyError(msg);
  }
}

void SplitStepPropagator::evolve(
    Wavefunction& wf, double dt_si, double t_end_si,
    const std::function<void(const Wavefunction&)>& observer) {
  const RecoilFrame& frame = program_->frame();
  if (!(dt_si > 0.0)) throw DomainError("dt must be > 0");
  if (dt_si >= 0.1 * frame.t_r)
    throw DomainError("dt too coarse: require dt < 0.1 t_r");
  if (wf.n() != engine_.size())
    throw DomainError("wavefunction grid does not match propagator");

  const double t_end = t_end_si / frame.t_r;
  if (t_end <= wf.time) return;
  const double dt = dt_si / frame.t_r;

  engine_.load(wf.psi);
  std::complex<double>* a = engine_.data();
  const int n = wf.n();

  double cached_dt = 0.0;
  auto kinetic_factors = [&](double step) {
    if (kinetic_.size() != static_cast<std::size_t>(n) || cached_dt != step) {
      kinetic_.resize(n);
      for (int j = 0; j < n; ++j) kinetic_[j] = wf.p(j) * wf.p(j);
      cached_dt = step;
      kin_phase_.resize(n);
      const double inv_n = 1.0 / n;
      for (int j = 0; j < n; ++j)
        kin_phase_[j] = std::polar(inv_n, -kinetic_[j] * step);
    }
  };

  long step_count = 0;
  while (wf.time < t_end - 1e-12) {
    const double step = std::min(dt, t_end - wf.time);
    const auto snap = program_->at((wf.time + 0.5 * step) * frame.t_r);

    apply_kick(a, wf, snap, 0.5 * step);
    engine_.forward();
    if (step_count % 256 == 0) check_spectrum(wf, a);
    kinetic_factors(step);
    for (int j = 0; j < n; ++j) a[j] *= kin_phase_[j];
    engine_.backward();
    apply_kick(a, wf, snap, 0.5 * step);

    wf.time += step;
    ++step_count;
    if (step_count % 128 == 0) check_boundary(wf, a);
    if (observer) {
      engine_.store(wf.psi);
      observer(wf);
    }
  }
  check_boundary(wf, a);
  engine_.store(wf.psi);
}

double SplitStepPropagator::energy(const Wavefunction& wf) {
  const auto snap = program_->at(wf.time_si());
  const int n = wf.n();
  double pot = 0.0;
  for (int i = 0; i < n; ++i) {
    const double d = std::norm(wf.psi[i]);
    pot += d * PotentialProgram::value(snap, wf.x(i));
    if (snap.g1d > 0.0) pot += 0.5 * snap.g1d * d * d;
  }
  pot *= wf.dx();

  // kinetic part in momentum space
  engine_.load(wf.psi);
  engine_.forward();
  const std::complex<double>* a = engine_.data();
  double kin = 0.0, weight = 0.0;
  for (int j = 0; j < n; ++j) {
    const double d = std::norm(a[j]);
    kin += d * wf.p(j) * wf.p(j);
    weight += d;
  }
  // weighted mean of p^2 over the spectrum, scaled to the norm
  const double nrm = wf.norm();
  if (weight > 0.0) kin *= nrm / weight;
  return kin + pot;
}

void SplitStepPropagator::relax_to_ground_state(Wavefunction& wf,
                                                double dt_si, double tol,
                                                int max_steps) {
  const RecoilFrame& frame = program_->frame();
  const double dt = dt_si / frame.t_r;
  const auto snap = program_->at(wf.time_si());
  const int n = wf.n();

  double e_prev = energy(wf);
  engine_.load(wf.psi);
  std::complex<double>* a = engine_.data();
  std::vector<double> kin(n);
  for (int j = 0; j < n; ++j) kin[j] = wf.p(j) * wf.p(j);

  const double inv_n = 1.0 / n;
  for (int s = 0; s < max_steps; ++s) {
    // e^{-V dt/2} e^{-T dt} e^{-V dt/2} with renormalization
    for (int i = 0; i < n; ++i) {
      double v = PotentialProgram::value(snap, wf.x(i));
      if (snap.g1d > 0.0) v += snap.g1d * std::norm(a[i]);
      a[i] *= std::exp(-0.5 * v * dt);
    }
    engine_.forward();
    for (int j = 0; j < n; ++j) a[j] *= std::exp(-kin[j] * dt) * inv_n;
    engine_.backward();
    for (int i = 0; i < n; ++i) {
      double v = PotentialProgram::value(snap, wf.x(i));
      if (snap.g1d > 0.0) v += snap.g1d * std::norm(a[i]);
      a[i] *= std::exp(-0.5 * v * dt);
    }
    double nn = 0.0;
    for (int i = 0; i < n; ++i) nn += std::norm(a[i]);
    nn = std::sqrt(nn * wf.dx());
    for (int i = 0; i < n; ++i) a[i] /= nn;

    if (s % 16 == 15) {
      engine_.store(wf.psi);
      const double e = energy(wf);  // clobbers the engine buffer
      engine_.load(wf.psi);
      if (std::abs(e - e_prev) < 16.0 * tol * std::max(1.0, std::abs(e))) {
        return;
      }
      e_prev = e;
    }
  }
  engine_.store(wf.psi);
  throw AccuracyError("imaginary-time relaxation did not converge");
}

Wavefunction ground_state(const PotentialProgram& program, double x_min_si,
                          double x_max_si, int n_points, double dt_si) {
  const auto snap = program.at(0.0);
  if (!snap.trap_on)
    throw DomainError("ground_state requires a confining trap at t = 0");
  const RecoilFrame& frame = program.frame();

  // Oscillator Gaussian around the (gravity-sagged) trap minimum.
  const double omega_si = snap.omega_rec / frame.t_r;
  double center_rec = snap.center_rec;
  if (snap.gravity_slope > 0.0)
    center_rec -= 2.0 * snap.gravity_slope / (snap.omega_rec * snap.omega_rec);
  const double a_si = std::sqrt(constants::hbar / (frame.mass * omega_si));
  Wavefunction wf =
      gaussian_state(frame, x_min_si, x_max_si, n_points,
                     center_rec / frame.k_r, a_si, 0.0);
  if (program.g1d() > 0.0) {
    SplitStepPropagator prop(program, n_points);
    prop.relax_to_ground_state(
        wf, dt_si > 0.0 ? dt_si : 0.01 * frame.t_r);
  }
  return wf;
}

Wavefunction bloch_wavepacket(const RecoilFrame& frame, double x_min_si,
                              double x_max_si, int n_points, double x0_si,
                              double envelope_sigma_si, double depth,
                              int band, double q) {
  Wavefunction wf = make_wavefunction(frame, x_min_si, x_max_si, n_points);
  const Eigen::VectorXd c = bloch_coefficients(depth, q, band);
  const int L = (static_cast<int>(c.size()) - 1) / 2;
  const double x0 = x0_si * frame.k_r;
  const double sig = envelope_sigma_si * frame.k_r;
  for (int i = 0; i < wf.n(); ++i) {
    const double u = (wf.x(i) - x0) / sig;
    std::complex<double> bloch = 0.0;
    for (int l = -L; l <= L; ++l)
      bloch += c(l + L) * std::polar(1.0, (q + 2.0 * l) * wf.x(i));
    wf.psi[i] = std::exp(-0.5 * u * u) * bloch;
  }
  wf.normalize();
  return wf;
}

namespace {

// Interval holding all but `tail` of the weight in each direction.
std::pair<double, double> support(const std::vector<double>& w,
                                  const std::vector<double>& axis,
                                  double tail) {
  double total = 0.0;
  for (double v : w) total += v;
  if (total <= 0.0) return {axis.front(), axis.back()};
  double acc = 0.0;
  double lo = axis.front(), hi = axis.back();
  for (std::size_t i = 0; i < w.size(); ++i) {
    acc += w[i];
    if (acc > tail * total) {
      lo = axis[i];
      break;
    }
  }
  acc = 0.0;
  for (std::size_t i = w.size(); i-- > 0;) {
    acc += w[i];
    if (acc > tail * total) {
      hi = axis[i];
      break;
    }
  }
  return {lo, hi};
}

}  // namespace

Wavefunction free_expand(const Wavefunction& wf, double t_tof_si,
                         bool gravity) {
  if (t_tof_si < 0.0) throw DomainError("time of flight must be >= 0");
  Wavefunction out = wf;
  if (t_tof_si == 0.0) return out;
  const RecoilFrame& frame = wf.frame;
  const double t = t_tof_si / frame.t_r;
  const double slope = gravity ? constants::gravity / frame.a_r : 0.0;

  // Predict the final support and zero-pad until it fits.
  {
    std::vector<double> xw(wf.n()), xs(wf.n());
    for (int i = 0; i < wf.n(); ++i) {
      xw[i] = std::norm(wf.psi[i]);
      xs[i] = wf.x(i);
    }
    auto [xlo, xhi] = support(xw, xs, 1e-12);

    SpectralEngine eng(wf.n());
    eng.load(wf.psi);
    eng.forward();
    std::vector<double> pw(wf.n()), ps(wf.n());
    for (int j = 0; j < wf.n(); ++j) {
      pw[j] = std::norm(eng.data()[j]);
      ps[j] = wf.p(j);
    }
    // sort by momentum for the support scan
    std::vector<std::size_t> idx(pw.size());
    for (std::size_t k = 0; k < idx.size(); ++k) idx[k] = k;
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return ps[a] < ps[b]; });
    std::vector<double> pw_s(pw.size()), ps_s(ps.size());
    for (std::size_t k = 0; k < idx.size(); ++k) {
      pw_s[k] = pw[idx[k]];
      ps_s[k] = ps[idx[k]];
    }
    auto [plo, phi] = support(pw_s, ps_s, 1e-12);

    const double margin = 32.0 * out.dx();
    double need_lo =
        xlo + 2.0 * plo * t - slope * t * t - margin;
    double need_hi = xhi + 2.0 * phi * t - slope * t * t + margin;
    need_lo = std::min(need_lo, xlo - margin);
    need_hi = std::max(need_hi, xhi + margin);

    while (need_lo < out.x_min || need_hi > out.x_max) {
      if (out.n() >= (1 << 22))
        throw AccuracyError(
            "free_expand: expanded cloud exceeds the maximum grid (2^22)");
      const double span = out.x_max - out.x_min;
      const int n_old = out.n();
      if (need_lo < out.x_min) {
        out.psi.insert(out.psi.begin(), n_old, {0.0, 0.0});
        out.x_min -= span;
      } else {
        out.psi.insert(out.psi.end(), n_old, {0.0, 0.0});
        out.x_max += span;
      }
    }
  }

  // Exact kick-drift-kick: linear potential commutators close, so one
  // Strang step is exact up to a global phase.
  const int n = out.n();
  SpectralEngine eng(n);
  eng.load(out.psi);
  std::complex<double>* a = eng.data();
  if (slope != 0.0) {
    for (int i = 0; i < n; ++i)
      a[i] *= std::polar(1.0, -slope * out.x(i) * 0.5 * t);
  }
  eng.forward();
  const double inv_n = 1.0 / n;
  for (int j = 0; j < n; ++j)
    a[j] *= std::polar(inv_n, -out.p(j) * out.p(j) * t);
  eng.backward();
  if (slope != 0.0) {
    for (int i = 0; i < n; ++i)
      a[i] *= std::polar(1.0, -slope * out.x(i) * 0.5 * t);
  }
  eng.store(out.psi);
  out.time += t;
  return out;
}

}  // namespace mws
