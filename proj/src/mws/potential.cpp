#include "mws/potential.hpp"

#include <cmath>

namespace mws {

PotentialProgram::PotentialProgram(const Scenario& scn,
                                   const RecoilFrame& frame)
    : scn_(&scn), frame_(frame) {}

PotentialProgram::Snapshot PotentialProgram::at(double t_si) const {
  Snapshot s;
  s.depth = scn_->schedule.depth(t_si);
  s.g1d = scn_->g1d;
  if (scn_->gravity)
    s.gravity_slope = constants::gravity / frame_.a_r;

  bool trap_on = scn_->trap.present;
  double center = scn_->trap.center;
  for (const auto& ev : scn_->schedule.events) {
    if (ev.time > t_si) continue;
    switch (ev.kind) {
      case EventKind::TrapDisplace:
        center = ev.payload;
        break;
      case EventKind::TrapOff:
      case EventKind::Release:
        trap_on = false;
        break;
      case EventKind::LatticeOff:
        break;
    }
  }
  s.trap_on = trap_on;
  if (trap_on) {
    s.omega_rec = 2.0 * M_PI * scn_->trap.frequency * frame_.t_r;
    s.center_rec = center * frame_.k_r;
  }
  return s;
}

}  // namespace mws
