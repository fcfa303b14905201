#ifndef MWS_PRESETS_HPP
#define MWS_PRESETS_HPP

#include <string>
#include <vector>

#include "mws/scenario.hpp"
#include "mws/schedule.hpp"

namespace mws {

struct Synthesis {
  Scenario scenario;
  std::vector<ScheduleCsvRow> rows;  // one per tunneling cycle / pulse
};

struct SplitOptions {
  double initial_velocity = 9e-3;   // m/s, upward release kick
  double suppression_depth = 2.4;   // E_r, blocks tunneling
  double load_ramp = 200e-6;        // s
  double turn_on_margin = 0.1;      // fraction of tau_B
  double plateau_fraction = 0.5;    // plateau width in tau_B
  double off_ramp = 200e-6;         // s
  double settle = 5.5e-3;           // s of free fall after release
  double sigma = 0.0;               // m; 0 = width of a 38.4 Hz trap
};

/// Gravity-cascade schedule from per-cycle tunneling targets (0 = blocked
/// cycle at the suppression depth). Plateaus are centered on the predicted
/// zone-edge crossings; the remnant is released by an s-curve turn-off
/// half a cycle after the last crossing.
Synthesis synthesize_probability_schedule(
    const std::vector<double>& per_cycle_targets, const RecoilFrame& frame,
    const SplitOptions& opts = {}, const std::string& name = "split");

/// Splitting-fraction interface: fractions -> probabilities -> schedule.
Synthesis synthesize_split_scenario(const std::vector<double>& fractions,
                                    const RecoilFrame& frame,
                                    const SplitOptions& opts = {},
                                    const std::string& name = "split");

struct BraggOptions {
  double trap_frequency = 51.2;   // Hz
  double amplitude = 89.6e-6;     // m
  double pulse_length = 1e-3;     // s
  double lead = 0.15e-3;          // pulse starts this early before the crossing
  double edge = 50e-6;            // s-curve pulse edges
  double depth = 0.0;             // E_r; 0 = default for the order
  bool early_off = false;         // end before the next-gap reflection
  double tof = 12e-3;             // s
};

/// Harmonically oscillating cloud, one lattice pulse timed at the order-n
/// zone crossing before the first turning point.
Synthesis synthesize_bragg_scenario(int order, const RecoilFrame& frame,
                                    const BraggOptions& opts = {});

/// Named presets; throws DomainError for unknown names.
Synthesis make_preset(const std::string& name);
std::vector<std::string> preset_names();

}  // namespace mws

#endif
