#ifndef MWS_POTENTIAL_HPP
#define MWS_POTENTIAL_HPP

#include <cmath>

#include "mws/recoil_frame.hpp"
#include "mws/scenario.hpp"

namespace mws {

/// Time-dependent potential of a scenario, evaluated in recoil units:
/// V(x, t)/E_r = depth(t) sin^2(x) + (a/a_r) x + (omega t_r)^2/4 (x - c)^2
/// with x in 1/k_r. Trap state (on/off, center) follows the schedule's
/// trap_displace / trap_off / release events.
class PotentialProgram {
 public:
  PotentialProgram(const Scenario& scn, const RecoilFrame& frame);

  struct Snapshot {
    double depth = 0.0;        // E_r
    bool trap_on = false;
    double omega_rec = 0.0;    // 1/t_r
    double center_rec = 0.0;   // 1/k_r
    double gravity_slope = 0.0;  // E_r per 1/k_r, = g/a_r
    double g1d = 0.0;
  };

  /// Potential parameters at SI time t.
  Snapshot at(double t_si) const;

  /// V(x)/E_r for one grid point given a snapshot.
  static double value(const Snapshot& s, double x_rec) {
    const double sn = std::sin(x_rec);
    double v = s.depth * sn * sn + s.gravity_slope * x_rec;
    if (s.trap_on) {
      const double u = x_rec - s.center_rec;
      v += 0.25 * s.omega_rec * s.omega_rec * u * u;
    }
    return v;
  }

  bool confining_at(double t_si) const { return at(t_si).trap_on; }
  const RecoilFrame& frame() const { return frame_; }
  double g1d() const { return scn_->g1d; }

 private:
  const Scenario* scn_;
  RecoilFrame frame_;
};

}  // namespace mws

#endif
