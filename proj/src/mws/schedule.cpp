#include "mws/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "mws/errors.hpp"

namespace mws {

double s_curve(double u) {
  u = std::clamp(u, 0.0, 1.0);
  return u * u * (3.0 - 2.0 * u);
}

double DepthSchedule::depth(double t) const {
  if (t >= lattice_off_time()) return 0.0;
  for (const auto& seg : segments) {
    if (t < seg.t_start) break;
    if (t >= seg.t_start && t < seg.t_end) {
      switch (seg.shape) {
        case RampShape::Hold:
          return seg.depth_start;
        case RampShape::Linear: {
          const double u = (t - seg.t_start) / (seg.t_end - seg.t_start);
          return seg.depth_start + u * (seg.depth_end - seg.depth_start);
        }
        case RampShape::SCurve: {
          const double u = (t - seg.t_start) / (seg.t_end - seg.t_start);
          return seg.depth_start +
                 s_curve(u) * (seg.depth_end - seg.depth_start);
        }
      }
    }
  }
  return 0.0;
}

double DepthSchedule::lattice_off_time() const {
  double t_off = std::numeric_limits<double>::infinity();
  for (const auto& ev : events)
    if (ev.kind == EventKind::LatticeOff || ev.kind == EventKind::Release)
      t_off = std::min(t_off, ev.time);
  return t_off;
}

void DepthSchedule::normalize_and_validate() {
  std::sort(segments.begin(), segments.end(),
            [](const Segment& a, const Segment& b) {
              return a.t_start < b.t_start;
            });
  std::stable_sort(events.begin(), events.end(),
                   [](const ScheduleEvent& a, const ScheduleEvent& b) {
                     return a.time < b.time;
                   });

  std::vector<ValidationIssue> issues;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const auto& s = segments[i];
    if (!(s.t_end > s.t_start))
      issues.push_back({0, "segment " + std::to_string(i) +
                               ": t_end must exceed t_start"});
    auto in_range = [](double d) { return d >= 0.0 && d <= kMaxDepth; };
    if (!in_range(s.depth_start) || !in_range(s.depth_end))
      issues.push_back({0, "segment " + std::to_string(i) +
                               ": depth outside [0, 30] E_r"});
    if (i + 1 < segments.size() &&
        segments[i + 1].t_start < s.t_end - 1e-15) {
      issues.push_back({0, "segments " + std::to_string(i) + " and " +
                               std::to_string(i + 1) + " overlap"});
    }
  }
  if (!issues.empty()) throw ValidationError(std::move(issues));
}

const char* to_string(RampShape s) {
  switch (s) {
    case RampShape::Hold:
      return "hold";
    case RampShape::Linear:
      return "linear";
    case RampShape::SCurve:
      return "s-curve";
  }
  return "?";
}

const char* to_string(EventKind k) {
  switch (k) {
    case EventKind::TrapDisplace:
      return "trap_displace";
    case EventKind::TrapOff:
      return "trap_off";
    case EventKind::LatticeOff:
      return "lattice_off";
    case EventKind::Release:
      return "release";
  }
  return "?";
}

RampShape ramp_shape_from_string(const std::string& s) {
  if (s == "hold") return RampShape::Hold;
  if (s == "linear") return RampShape::Linear;
  if (s == "s-curve") return RampShape::SCurve;
  throw DomainError("unknown ramp shape '" + s + "'");
}

EventKind event_kind_from_string(const std::string& s) {
  if (s == "trap_displace") return EventKind::TrapDisplace;
  if (s == "trap_off") return EventKind::TrapOff;
  if (s == "lattice_off") return EventKind::LatticeOff;
  if (s == "release") return EventKind::Release;
  throw DomainError("unknown event kind '" + s + "'");
}

void write_schedule_csv(const std::vector<ScheduleCsvRow>& rows,
                        const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << "cycle_index,probability,depth_E_r,t_start,t_end\n";
  char buf[160];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%d,%.12g,%.12g,%.12g,%.12g\n",
                  r.cycle_index, r.probability, r.depth_er, r.t_start,
                  r.t_end);
    out << buf;
  }
  if (!out) throw IoError("write failed for " + path);
}

}  // namespace mws
