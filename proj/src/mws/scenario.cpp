#include "mws/scenario.hpp"

#include <cmath>

#include "mws/errors.hpp"

namespace mws {

double Scenario::initial_sigma() const {
  if (initial.sigma > 0.0) return initial.sigma;
  if (trap.present && trap.frequency > 0.0) {
    const double omega = 2.0 * M_PI * trap.frequency;
    return std::sqrt(constants::hbar / (mass * omega));
  }
  throw DomainError(
      "initial.sigma unset and no trap present to derive it from");
}

void Scenario::validate() const {
  std::vector<ValidationIssue> issues;
  auto add = [&issues](const std::string& m) { issues.push_back({0, m}); };

  if (!(wavelength > 0.0)) add("frame.wavelength must be > 0");
  if (!(mass > 0.0)) add("frame.mass must be > 0");
  if (!(t_end > 0.0)) add("run.t_end must be > 0");

  if (!(grid.x_max > grid.x_min)) add("solver.grid: x_max must exceed x_min");
  if (grid.n_points < 16 || (grid.n_points & (grid.n_points - 1)) != 0)
    add("solver.grid.points must be a power of two >= 16");
  if (dt < 0.0) add("solver.dt must be >= 0");
  if (g1d < 0.0) add("solver.g1d must be >= 0");

  if (trap.present && !(trap.frequency > 0.0))
    add("trap.frequency must be > 0 when a trap is present");
  if (!std::isfinite(initial.velocity)) add("initial.velocity must be finite");
  if (initial.sigma < 0.0) add("initial.sigma must be >= 0");
  if (initial.sigma == 0.0 && !trap.present)
    add("initial.sigma required when no trap is present");
  if (initial.kind == InitialState::Kind::Bloch) {
    if (initial.band < 0) add("initial.band must be >= 0");
    if (std::abs(initial.q) > 1.0) add("initial.q must lie in [-1, 1]");
  }

  try {
    DepthSchedule copy = schedule;
    copy.normalize_and_validate();
  } catch (const ValidationError& e) {
    for (const auto& it : e.issues()) issues.push_back(it);
  }
  for (std::size_t i = 0; i < schedule.segments.size(); ++i) {
    const auto& s = schedule.segments[i];
    if (s.t_start < 0.0 || s.t_end > t_end)
      add("schedule.segment[" + std::to_string(i) +
          "] lies outside [0, t_end]");
  }
  for (std::size_t i = 0; i < schedule.events.size(); ++i) {
    const auto& ev = schedule.events[i];
    if (ev.time < 0.0 || ev.time > t_end)
      add("schedule.event[" + std::to_string(i) +
          "] lies outside [0, t_end]");
  }

  if (outputs.tof > 0.0) {
    const double t_off = schedule.lattice_off_time();
    if (!(t_off <= t_end) && !schedule.segments.empty() &&
        schedule.segments.back().t_end > t_end)
      add("output.tof requires the lattice to be off by t_end");
    bool trap_released = !trap.present;
    for (const auto& ev : schedule.events)
      if (ev.kind == EventKind::TrapOff || ev.kind == EventKind::Release)
        trap_released = true;
    if (!trap_released)
      add("output.tof requires a trap_off or release event");
  }
  if (outputs.density_stride < 0.0) add("output.density_stride must be >= 0");
  if (outputs.momentum_stride < 0.0)
    add("output.momentum_stride must be >= 0");

  if (!(unbound_threshold > 0.5 && unbound_threshold <= 1.0))
    add("cascade.unbound_threshold must lie in (0.5, 1]");
  for (double d : scan_depths)
    if (!(d >= 0.0 && d <= kMaxDepth))
      add("scan depth outside [0, 30] E_r");

  if (!issues.empty()) throw ValidationError(std::move(issues));
}

}  // namespace mws
