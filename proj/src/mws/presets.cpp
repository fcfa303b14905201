#include "mws/presets.hpp"

#include <algorithm>
#include <cmath>

#include "mws/bands.hpp"
#include "mws/errors.hpp"
#include "mws/landau_zener.hpp"

namespace mws {

namespace {

// Extends x_max so the grid spans a whole number of lattice periods
// (length a multiple of pi in recoil units); keeps band projection and
// the periodic lattice exact on the FFT domain.
double snap_span(double x_min, double x_max, double k_r) {
  const double span_rec = (x_max - x_min) * k_r;
  const double snapped = M_PI * std::ceil(span_rec / M_PI - 1e-9);
  return x_min + snapped / k_r;
}

int grid_points_for(double x_min, double x_max, double k_r,
                    double max_dx_rec = 0.33) {
  const double span = (x_max - x_min) * k_r;
  int n = 1024;
  while (n * max_dx_rec < span && n < (1 << 21)) n *= 2;
  return n;
}

double default_split_sigma(const RecoilFrame& frame) {
  // width of the 38.4 Hz release trap
  return std::sqrt(constants::hbar /
                   (frame.mass * 2.0 * M_PI * 38.4));
}

}  // namespace

Synthesis synthesize_probability_schedule(
    const std::vector<double>& per_cycle_targets, const RecoilFrame& frame,
    const SplitOptions& opts, const std::string& name) {
  for (double p : per_cycle_targets)
    if (!(p >= 0.0 && p < 1.0))
      throw DomainError("per-cycle targets must lie in [0, 1)");

  const double g = constants::gravity;
  const double tau_b = bloch_period(g, frame);
  const double p0 = frame.mass * opts.initial_velocity /
                    (constants::hbar * frame.k_r);
  const double t_c1 = (p0 + 1.0) * 0.5 * tau_b;
  const double half = 0.5 * opts.plateau_fraction * tau_b;
  const double margin = opts.turn_on_margin * tau_b;
  const int cycles = static_cast<int>(per_cycle_targets.size());

  Synthesis syn;
  Scenario& s = syn.scenario;
  s.name = name;
  s.wavelength = frame.wavelength;
  s.mass = frame.mass;
  s.gravity = true;
  s.initial.kind = InitialState::Kind::Gaussian;
  s.initial.position = 0.0;
  s.initial.velocity = opts.initial_velocity;
  s.initial.sigma = opts.sigma > 0.0 ? opts.sigma : default_split_sigma(frame);

  // depth per cycle (suppression depth on blocked cycles)
  std::vector<double> depths(cycles);
  for (int k = 0; k < cycles; ++k) {
    depths[k] = per_cycle_targets[k] > 0.0
                    ? depth_for_probability(per_cycle_targets[k], 1, g, frame)
                    : opts.suppression_depth;
  }

  auto& segs = s.schedule.segments;
  const double first_depth = cycles > 0 ? depths[0] : opts.suppression_depth;
  const double t_load_end = t_c1 - half - margin;
  segs.push_back({t_load_end - opts.load_ramp, t_load_end, RampShape::SCurve,
                  0.0, opts.suppression_depth});
  segs.push_back({t_load_end, t_c1 - half, RampShape::SCurve,
                  opts.suppression_depth, first_depth});

  double t_off = t_c1 + half;  // overwritten below when cycles > 0
  for (int k = 0; k < cycles; ++k) {
    const double t_k = t_c1 + k * tau_b;
    segs.push_back(
        {t_k - half, t_k + half, RampShape::Hold, depths[k], depths[k]});
    if (k + 1 < cycles) {
      segs.push_back({t_k + half, t_k + tau_b - half, RampShape::SCurve,
                      depths[k], depths[k + 1]});
    } else {
      segs.push_back({t_k + half, t_k + half + opts.off_ramp,
                      RampShape::SCurve, depths[k], 0.0});
      t_off = t_k + half + opts.off_ramp;
    }
    syn.rows.push_back({k + 1, per_cycle_targets[k], depths[k], t_k - half,
                        t_k + half});
  }
  if (cycles == 0) {
    // no splitting: release immediately after loading
    segs.push_back({t_c1 - half, t_c1 - half + opts.off_ramp,
                    RampShape::SCurve, first_depth, 0.0});
    t_off = t_c1 - half + opts.off_ramp;
  }
  s.schedule.events.push_back({t_off, EventKind::LatticeOff, 0.0});
  s.t_end = t_off + opts.settle;

  // grid: cover the deepest fall with margin; released packets leave the
  // first crossing at -v_r and fall from there
  // the leading edge is the slight band-2 contamination falling from
  // -2 v_r since the load ramp, ahead of the first released packet
  const double fall = s.t_end - t_c1;
  const double x_low =
      -2.0 * frame.v_r * fall - 0.5 * g * fall * fall - 140e-6;
  const double apex = opts.initial_velocity > 0.0
                          ? opts.initial_velocity * opts.initial_velocity /
                                (2.0 * g)
                          : 0.0;
  const double x_high = apex + 120e-6;
  s.grid.x_min = x_low;
  s.grid.x_max = snap_span(x_low, x_high, frame.k_r);
  // momentum reach: fastest packet falls from the first crossing; keep the
  // spectral Nyquist above it plus lattice sidebands
  const double p_reach =
      1.15 * (1.0 + g * fall / frame.v_r) + 4.0;
  s.grid.n_points =
      grid_points_for(s.grid.x_min, s.grid.x_max, frame.k_r, M_PI / p_reach);
  s.validate();
  return syn;
}

Synthesis synthesize_split_scenario(const std::vector<double>& fractions,
                                    const RecoilFrame& frame,
                                    const SplitOptions& opts,
                                    const std::string& name) {
  return synthesize_probability_schedule(fractions_to_probabilities(fractions),
                                         frame, opts, name);
}

Synthesis synthesize_bragg_scenario(int order, const RecoilFrame& frame,
                                    const BraggOptions& opts) {
  if (order < 1 || order > 3)
    throw DomainError("Bragg order must be 1, 2 or 3");
  const double omega = 2.0 * M_PI * opts.trap_frequency;
  const double t_n = bragg_pulse_time(order, omega, opts.amplitude, frame);
  static const double kDefaultDepths[3] = {1.1, 5.0, 13.5};
  const double depth =
      opts.depth > 0.0 ? opts.depth : kDefaultDepths[order - 1];

  double t_on = t_n - opts.lead;
  double t_off = t_on + opts.pulse_length;
  if (opts.early_off) {
    if (order < 2)
      throw DomainError("early lattice-off needs order >= 2");
    // end before the transmitted packet reaches the next gap
    const double t_next =
        bragg_pulse_time(order - 1, omega, opts.amplitude, frame);
    t_off = t_next - 0.1e-3;
    if (t_off <= t_on + 2.0 * opts.edge)
      throw DomainError("early lattice-off window too short");
  }

  Synthesis syn;
  Scenario& s = syn.scenario;
  s.name = "bragg-order-" + std::to_string(order) +
           (opts.early_off ? "-early" : "");
  s.wavelength = frame.wavelength;
  s.mass = frame.mass;
  s.gravity = false;
  s.trap.present = true;
  s.trap.frequency = opts.trap_frequency;
  s.trap.center = opts.amplitude;  // displaced to 0 at t = 0
  s.initial.kind = InitialState::Kind::Gaussian;
  s.initial.position = opts.amplitude;
  s.initial.velocity = 0.0;
  s.initial.sigma = 0.0;  // trap ground-state width
  s.fast_forward = true;

  s.schedule.events.push_back({0.0, EventKind::TrapDisplace, 0.0});
  s.schedule.segments.push_back(
      {t_on, t_on + opts.edge, RampShape::SCurve, 0.0, depth});
  s.schedule.segments.push_back(
      {t_on + opts.edge, t_off - opts.edge, RampShape::Hold, depth, depth});
  s.schedule.segments.push_back(
      {t_off - opts.edge, t_off, RampShape::SCurve, depth, 0.0});

  const double t_release = t_off + 0.05e-3;
  s.schedule.events.push_back({t_release, EventKind::Release, 0.0});
  s.t_end = t_release + 0.05e-3;
  s.outputs.tof = opts.tof;
  s.outputs.snapshots.push_back(t_release);

  s.grid.x_min = -0.26e-3;
  s.grid.x_max = snap_span(-0.26e-3, 0.34e-3, frame.k_r);
  s.grid.n_points =
      grid_points_for(s.grid.x_min, s.grid.x_max, frame.k_r, 0.26);

  const double a_loc = local_acceleration(omega, opts.amplitude, t_n);
  const double p_t =
      tunneling_probability(band_gap_at(depth, order), order, a_loc, frame);
  syn.rows.push_back({1, p_t, depth, t_on, t_off});
  s.validate();
  return syn;
}

namespace {

Synthesis make_fig1() {
  const RecoilFrame frame = default_frame();
  Synthesis syn;
  Scenario& s = syn.scenario;
  s.name = "fig1-lz-curve";
  s.gravity = true;
  s.initial.kind = InitialState::Kind::Bloch;
  s.initial.band = 0;
  s.initial.q = 0.0;
  s.initial.position = 0.0;
  s.initial.sigma = 3e-6;
  const double tau_b = bloch_period(constants::gravity, frame);
  s.t_end = 0.75 * tau_b;
  s.schedule.segments.push_back(
      {0.0, s.t_end, RampShape::Hold, 1.0, 1.0});  // depth set per scan point
  s.scan_depths = {0.3, 0.6, 0.9, 1.2, 1.6, 2.0, 2.4};
  s.grid.x_min = -45e-6;
  s.grid.x_max = snap_span(-45e-6, 45e-6, frame.k_r);
  s.grid.n_points = 2048;
  s.validate();
  return syn;
}

Synthesis make_fig2() {
  Synthesis syn = synthesize_split_scenario(
      std::vector<double>(6, 1.0 / 6.0), default_frame(), {},
      "fig2-equal-split");
  return syn;
}

Synthesis make_fig3(int middle_cycle = 4) {
  // three equal packets within six cycles: tunneling on cycles 1 and
  // middle_cycle, suppression elsewhere, remnant released in cycle 6
  std::vector<double> targets(5, 0.0);
  targets[0] = 1.0 / 3.0;
  targets[middle_cycle - 1] = 0.5;
  return synthesize_probability_schedule(targets, default_frame(), {},
                                         "fig3-selective");
}

Synthesis make_fig4(int order, bool early) {
  BraggOptions opts;
  opts.early_off = early;
  Synthesis syn = synthesize_bragg_scenario(order, default_frame(), opts);
  syn.scenario.name = "fig4-bragg-order-" + std::to_string(order) +
                      (early ? "-early" : "");
  return syn;
}

// Two short partial mirrors: one before the first turning point, one at
// the moment both clouds re-overlap with opposite momenta near the second.
Synthesis make_fig8() {
  const RecoilFrame frame = default_frame();
  const double f_hz = 51.2, r_max = 89.6e-6;
  const double omega = 2.0 * M_PI * f_hz;
  const double period = 2.0 * M_PI / omega;
  const double t1 = bragg_pulse_time(1, omega, r_max, frame);
  const double t_x = period / 2.0 - t1;  // time from |p|=1 to the turning point
  const double t_meet = period - (0.5 * period - t1);  // = T - t_x'
  const double a_loc = local_acceleration(omega, r_max, t1);
  const double depth = depth_for_probability(0.5, 1, a_loc, frame);
  const double edge = 50e-6, lead = 0.20e-3, tail = 0.25e-3;

  Synthesis syn;
  Scenario& s = syn.scenario;
  s.name = "fig8-array";
  s.gravity = false;
  s.trap.present = true;
  s.trap.frequency = f_hz;
  s.trap.center = r_max;
  s.initial.position = r_max;
  s.initial.sigma = 0.0;
  s.fast_forward = true;
  s.schedule.events.push_back({0.0, EventKind::TrapDisplace, 0.0});

  auto pulse = [&](double ta, double tb) {
    s.schedule.segments.push_back(
        {ta, ta + edge, RampShape::SCurve, 0.0, depth});
    s.schedule.segments.push_back(
        {ta + edge, tb - edge, RampShape::Hold, depth, depth});
    s.schedule.segments.push_back(
        {tb - edge, tb, RampShape::SCurve, depth, 0.0});
  };
  pulse(t1 - lead, t1 + tail);
  pulse(t_meet - lead, t_meet + tail);
  syn.rows.push_back({1, 0.5, depth, t1 - lead, t1 + tail});
  syn.rows.push_back({2, 0.5, depth, t_meet - lead, t_meet + tail});

  const double t_release = t_meet + t_x + 2e-3;  // 2 ms past the turning point
  s.schedule.events.push_back({t_release, EventKind::Release, 0.0});
  s.t_end = t_release + 0.05e-3;
  s.outputs.tof = 12e-3;
  s.grid.x_min = -0.35e-3;
  s.grid.x_max = snap_span(-0.35e-3, 0.35e-3, frame.k_r);
  s.grid.n_points =
      grid_points_for(s.grid.x_min, s.grid.x_max, frame.k_r, 0.30);
  s.validate();
  return syn;
}

// Long partial mirrors around both turning points: a four-cloud train from
// the first pulse, then one new escaping row per cavity period from the
// second, 1 + 2 + 2 + ... packets.
Synthesis make_fig9(int p1_cycles = 3, int p2_cycles = 4) {
  const RecoilFrame frame = default_frame();
  const double f_hz = 51.2, r_max = 89.6e-6;
  const double omega = 2.0 * M_PI * f_hz;
  const double period = 2.0 * M_PI / omega;
  const double t1 = bragg_pulse_time(1, omega, r_max, frame);
  const double t_x = 0.5 * period - t1;  // crossing-to-turning-point time
  const double delta = 2.0 * t_x;        // cavity round trip
  const double a_loc = local_acceleration(omega, r_max, t1);
  const double depth = depth_for_probability(0.5, 1, a_loc, frame);
  const double edge = 50e-6, lead = 0.15e-3, tail = 0.25e-3;

  // the first escape reaches the far-side crossing after the symmetric
  // sweep through the trap center
  const double t_arr1 = 2.0 * t1 - t_x;

  Synthesis syn;
  Scenario& s = syn.scenario;
  s.name = "fig9-pyramid";
  s.gravity = false;
  s.trap.present = true;
  s.trap.frequency = f_hz;
  s.trap.center = r_max;
  s.initial.position = r_max;
  s.initial.sigma = 0.0;
  s.fast_forward = true;
  s.schedule.events.push_back({0.0, EventKind::TrapDisplace, 0.0});

  auto pulse = [&](double ta, double tb, int cycle) {
    s.schedule.segments.push_back(
        {ta, ta + edge, RampShape::SCurve, 0.0, depth});
    s.schedule.segments.push_back(
        {ta + edge, tb - edge, RampShape::Hold, depth, depth});
    s.schedule.segments.push_back(
        {tb - edge, tb, RampShape::SCurve, depth, 0.0});
    syn.rows.push_back({cycle, 0.5, depth, ta, tb});
  };
  pulse(t1 - lead, t1 + (p1_cycles - 1) * delta + tail, 1);
  pulse(t_arr1 - lead, t_arr1 + (p2_cycles - 1) * delta + tail, 2);

  const double t_release = t_arr1 + (p2_cycles - 1) * delta + tail + 0.3e-3;
  s.schedule.events.push_back({t_release, EventKind::Release, 0.0});
  s.t_end = t_release + 0.1e-3;
  s.grid.x_min = -0.35e-3;
  s.grid.x_max = snap_span(-0.35e-3, 0.35e-3, frame.k_r);
  s.grid.n_points =
      grid_points_for(s.grid.x_min, s.grid.x_max, frame.k_r, 0.30);
  s.validate();
  return syn;
}

}  // namespace

Synthesis make_preset(const std::string& name) {
  if (name == "fig1-lz-curve") return make_fig1();
  if (name == "fig2-equal-split") return make_fig2();
  if (name == "fig3-selective") return make_fig3();
  if (name == "fig4-bragg-order-1") return make_fig4(1, false);
  if (name == "fig4-bragg-order-2") return make_fig4(2, false);
  if (name == "fig4-bragg-order-3") return make_fig4(3, false);
  if (name == "fig4-bragg-order-2-early") return make_fig4(2, true);
  if (name == "fig4-bragg-order-3-early") return make_fig4(3, true);
  if (name == "fig8-array") return make_fig8();
  if (name == "fig9-pyramid") return make_fig9();
  throw DomainError("unknown preset '" + name + "'");
}

std::vector<std::string> preset_names() {
  return {"fig1-lz-curve",          "fig2-equal-split",
          "fig3-selective",         "fig4-bragg-order-1",
          "fig4-bragg-order-2",     "fig4-bragg-order-3",
          "fig4-bragg-order-2-early", "fig4-bragg-order-3-early",
          "fig8-array",             "fig9-pyramid"};
}

}  // namespace mws
