#ifndef MWS_SCHEDULE_HPP
#define MWS_SCHEDULE_HPP

#include <string>
#include <vector>

namespace mws {

inline constexpr double kMaxDepth = 30.0;  // hardware range, E_r

enum class RampShape { Hold, Linear, SCurve };

/// One piece of the lattice-depth program. Over [t_start, t_end) the depth
/// runs from depth_start to depth_end with the given shape; Hold keeps
/// depth_start. Times in seconds, depths in E_r.
struct Segment {
  double t_start = 0.0;
  double t_end = 0.0;
  RampShape shape = RampShape::Hold;
  double depth_start = 0.0;
  double depth_end = 0.0;
};

enum class EventKind { TrapDisplace, TrapOff, LatticeOff, Release };

struct ScheduleEvent {
  double time = 0.0;
  EventKind kind = EventKind::Release;
  double payload = 0.0;  // TrapDisplace: new trap center in meters
};

/// Piecewise time program of the lattice depth plus discrete trap/lattice
/// events. Gaps between segments evaluate to depth 0. Evaluation is
/// right-continuous at segment boundaries. A LatticeOff event clamps the
/// depth to 0 from its time onward regardless of remaining segments.
struct DepthSchedule {
  std::vector<Segment> segments;      // kept time-ordered
  std::vector<ScheduleEvent> events;  // kept time-ordered

  double depth(double t) const;
  double lattice_off_time() const;  // +inf when no LatticeOff/Release event
  bool lattice_on(double t) const { return depth(t) > 0.0; }

  /// Time-orders segments and events; throws ValidationError on overlap,
  /// negative spans or out-of-range depths.
  void normalize_and_validate();
};

const char* to_string(RampShape s);
const char* to_string(EventKind k);
RampShape ramp_shape_from_string(const std::string& s);
EventKind event_kind_from_string(const std::string& s);

/// Smoothstep 3u^2 - 2u^3 used for all s-shaped ramps.
double s_curve(double u);

struct ScheduleCsvRow {
  int cycle_index;
  double probability;
  double depth_er;
  double t_start;
  double t_end;
};

/// Writes "cycle_index,probability,depth_E_r,t_start,t_end".
void write_schedule_csv(const std::vector<ScheduleCsvRow>& rows,
                        const std::string& path);

}  // namespace mws

#endif
