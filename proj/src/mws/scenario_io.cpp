#include "mws/scenario_io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "mws/errors.hpp"

namespace mws {

namespace {

enum class Dim {
  Length,
  Time,
  TimeOrRecoil,  // accepts "tr" (resolved against the frame)
  Velocity,
  Energy,
  Frequency,
  Plain,
  Flag,
  Word
};

struct RawLine {
  int line;
  std::string key;
  std::string value;  // full right-hand side, trimmed
};

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  std::size_t e = s.find_last_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}

// splits "schedule.segment[3].t_start" into base "schedule.segment", index
// 3 and tail "t_start"; index = -1 when there is no bracket.
struct KeyParts {
  std::string base;
  int index = -1;
  std::string tail;
};

KeyParts split_key(const std::string& key) {
  KeyParts kp;
  const std::size_t lb = key.find('[');
  if (lb == std::string::npos) {
    kp.base = key;
    return kp;
  }
  const std::size_t rb = key.find(']', lb);
  if (rb == std::string::npos) {
    kp.base = key;
    return kp;
  }
  kp.base = key.substr(0, lb);
  try {
    kp.index = std::stoi(key.substr(lb + 1, rb - lb - 1));
  } catch (...) {
    kp.index = -2;
  }
  if (rb + 1 < key.size() && key[rb + 1] == '.')
    kp.tail = key.substr(rb + 2);
  return kp;
}

struct UnitEntry {
  const char* name;
  double factor;
};

const UnitEntry kLength[] = {{"m", 1.0},    {"mm", 1e-3}, {"um", 1e-6},
                             {"\xce\xbcm", 1e-6}, {"nm", 1e-9}};
const UnitEntry kTime[] = {{"s", 1.0},  {"ms", 1e-3}, {"us", 1e-6},
                           {"\xce\xbcs", 1e-6}, {"ns", 1e-9}};
const UnitEntry kVelocity[] = {{"m/s", 1.0}, {"mm/s", 1e-3}, {"um/s", 1e-6}};
const UnitEntry kFrequency[] = {{"Hz", 1.0}, {"kHz", 1e3}};

class Parser {
 public:
  explicit Parser(const std::string& text) { tokenize(text); }

  Scenario run() {
    // The frame must be known first: "tr" and "vr"/"Er" suffixes resolve
    // against it.
    for (const auto& rl : raw_) {
      if (rl.key == "frame.wavelength")
        scn_.wavelength = number(rl, Dim::Length);
      else if (rl.key == "frame.mass")
        scn_.mass = plain_number(rl);  // kg
    }
    if (scn_.wavelength > 0.0 && scn_.mass > 0.0)
      frame_ = make_recoil_frame(scn_.wavelength, scn_.mass);

    for (const auto& rl : raw_) apply(rl);

    if (!issues_.empty()) throw ValidationError(std::move(issues_));
    scn_.schedule.normalize_and_validate();
    scn_.validate();
    return scn_;
  }

 private:
  void tokenize(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int no = 0;
    while (std::getline(in, line)) {
      ++no;
      const std::size_t hash = line.find('#');
      if (hash != std::string::npos) line = line.substr(0, hash);
      line = trim(line);
      if (line.empty()) continue;
      const std::size_t eq = line.find('=');
      if (eq == std::string::npos) {
        issues_.push_back({no, "expected 'key = value'"});
        continue;
      }
      RawLine rl;
      rl.line = no;
      rl.key = trim(line.substr(0, eq));
      rl.value = trim(line.substr(eq + 1));
      if (rl.key.empty() || rl.value.empty()) {
        issues_.push_back({no, "empty key or value"});
        continue;
      }
      raw_.push_back(rl);
    }
  }

  void fail(const RawLine& rl, const std::string& msg) {
    issues_.push_back({rl.line, rl.key + ": " + msg});
  }

  double plain_number(const RawLine& rl) {
    char* end = nullptr;
    const double v = std::strtod(rl.value.c_str(), &end);
    if (end == rl.value.c_str()) {
      fail(rl, "not a number: '" + rl.value + "'");
      return 0.0;
    }
    const std::string rest = trim(std::string(end));
    if (!rest.empty() && rest != "kg")
      fail(rl, "unexpected unit '" + rest + "'");
    return v;
  }

  double number(const RawLine& rl, Dim dim) {
    char* end = nullptr;
    const double v = std::strtod(rl.value.c_str(), &end);
    if (end == rl.value.c_str()) {
      fail(rl, "not a number: '" + rl.value + "'");
      return 0.0;
    }
    const std::string unit = trim(std::string(end));
    return convert(rl, v, unit, dim);
  }

  double convert(const RawLine& rl, double v, const std::string& unit,
                 Dim dim) {
    auto lookup = [&](const UnitEntry* table, std::size_t n,
                      const char* what) -> double {
      if (unit.empty()) return v;  // SI base unit
      for (std::size_t i = 0; i < n; ++i)
        if (unit == table[i].name) return v * table[i].factor;
      fail(rl, "unknown " + std::string(what) + " unit '" + unit + "'");
      return v;
    };
    switch (dim) {
      case Dim::Length:
        return lookup(kLength, std::size(kLength), "length");
      case Dim::Time:
        return lookup(kTime, std::size(kTime), "time");
      case Dim::TimeOrRecoil:
        if (unit == "tr") {
          if (!frame_) {
            fail(rl, "'tr' needs a valid frame");
            return v;
          }
          return v * frame_->t_r;
        }
        return lookup(kTime, std::size(kTime), "time");
      case Dim::Velocity:
        if (unit == "vr") {
          if (!frame_) {
            fail(rl, "'vr' needs a valid frame");
            return v;
          }
          return v * frame_->v_r;
        }
        return lookup(kVelocity, std::size(kVelocity), "velocity");
      case Dim::Energy:
        if (unit.empty() || unit == "Er") return v;  // depths are in E_r
        if (unit == "J") {
          if (!frame_) {
            fail(rl, "'J' needs a valid frame");
            return v;
          }
          return v / frame_->E_r;
        }
        fail(rl, "unknown energy unit '" + unit + "'");
        return v;
      case Dim::Frequency:
        return lookup(kFrequency, std::size(kFrequency), "frequency");
      default:
        if (!unit.empty()) fail(rl, "unexpected unit '" + unit + "'");
        return v;
    }
  }

  bool flag(const RawLine& rl) {
    if (rl.value == "on" || rl.value == "true" || rl.value == "1")
      return true;
    if (rl.value == "off" || rl.value == "false" || rl.value == "0")
      return false;
    fail(rl, "expected on/off");
    return false;
  }

  template <typename T>
  T& element(std::vector<T>& v, int index, const RawLine& rl) {
    static T dummy;
    if (index < 0 || index > 4096) {
      fail(rl, "bad index");
      return dummy;
    }
    if (static_cast<int>(v.size()) <= index) v.resize(index + 1);
    return v[static_cast<std::size_t>(index)];
  }

  void apply(const RawLine& rl) {
    const KeyParts kp = split_key(rl.key);
    const std::string& k = rl.key;

    if (k == "name") {
      scn_.name = rl.value;
    } else if (k == "frame.wavelength" || k == "frame.mass") {
      // handled in the first pass
    } else if (k == "gravity") {
      scn_.gravity = flag(rl);
    } else if (k == "trap.frequency") {
      scn_.trap.frequency = number(rl, Dim::Frequency);
      scn_.trap.present = scn_.trap.frequency > 0.0;
    } else if (k == "trap.center") {
      scn_.trap.center = number(rl, Dim::Length);
    } else if (k == "initial.kind") {
      if (rl.value == "gaussian")
        scn_.initial.kind = InitialState::Kind::Gaussian;
      else if (rl.value == "bloch")
        scn_.initial.kind = InitialState::Kind::Bloch;
      else
        fail(rl, "expected gaussian|bloch");
    } else if (k == "initial.position") {
      scn_.initial.position = number(rl, Dim::Length);
    } else if (k == "initial.velocity") {
      scn_.initial.velocity = number(rl, Dim::Velocity);
    } else if (k == "initial.sigma") {
      scn_.initial.sigma = number(rl, Dim::Length);
    } else if (k == "initial.band") {
      scn_.initial.band = static_cast<int>(number(rl, Dim::Plain));
    } else if (k == "initial.q") {
      scn_.initial.q = number(rl, Dim::Plain);
    } else if (kp.base == "schedule.segment") {
      Segment& seg = element(scn_.schedule.segments, kp.index, rl);
      if (kp.tail == "t_start")
        seg.t_start = number(rl, Dim::Time);
      else if (kp.tail == "t_end")
        seg.t_end = number(rl, Dim::Time);
      else if (kp.tail == "shape") {
        try {
          seg.shape = ramp_shape_from_string(rl.value);
        } catch (const DomainError& e) {
          fail(rl, e.what());
        }
      } else if (kp.tail == "depth_start")
        seg.depth_start = number(rl, Dim::Energy);
      else if (kp.tail == "depth_end")
        seg.depth_end = number(rl, Dim::Energy);
      else
        fail(rl, "unknown segment field '" + kp.tail + "'");
    } else if (kp.base == "schedule.event") {
      ScheduleEvent& ev = element(scn_.schedule.events, kp.index, rl);
      if (kp.tail == "time")
        ev.time = number(rl, Dim::Time);
      else if (kp.tail == "kind") {
        try {
          ev.kind = event_kind_from_string(rl.value);
        } catch (const DomainError& e) {
          fail(rl, e.what());
        }
      } else if (kp.tail == "payload")
        ev.payload = number(rl, Dim::Length);
      else
        fail(rl, "unknown event field '" + kp.tail + "'");
    } else if (k == "run.t_end") {
      scn_.t_end = number(rl, Dim::Time);
    } else if (k == "solver.grid.x_min") {
      scn_.grid.x_min = number(rl, Dim::Length);
    } else if (k == "solver.grid.x_max") {
      scn_.grid.x_max = number(rl, Dim::Length);
    } else if (k == "solver.grid.points") {
      scn_.grid.n_points = static_cast<int>(number(rl, Dim::Plain));
    } else if (k == "solver.dt") {
      scn_.dt = number(rl, Dim::TimeOrRecoil);
    } else if (k == "solver.g1d") {
      scn_.g1d = number(rl, Dim::Plain);
    } else if (k == "solver.fast_forward") {
      scn_.fast_forward = flag(rl);
    } else if (k == "cascade.merge") {
      scn_.merge_packets = flag(rl);
    } else if (k == "cascade.unbound_threshold") {
      scn_.unbound_threshold = number(rl, Dim::Plain);
    } else if (k == "output.density_stride") {
      scn_.outputs.density_stride = number(rl, Dim::Time);
    } else if (k == "output.momentum_stride") {
      scn_.outputs.momentum_stride = number(rl, Dim::Time);
    } else if (kp.base == "output.snapshot") {
      element(scn_.outputs.snapshots, kp.index, rl) = number(rl, Dim::Time);
    } else if (k == "output.tof") {
      scn_.outputs.tof = number(rl, Dim::Time);
    } else if (kp.base == "scan.depth") {
      element(scn_.scan_depths, kp.index, rl) = number(rl, Dim::Energy);
    } else {
      fail(rl, "unknown key");
    }
  }

  Scenario scn_;
  std::optional<RecoilFrame> frame_;
  std::vector<RawLine> raw_;
  std::vector<ValidationIssue> issues_;
};

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
  return Parser(text).run();
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scenario file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

std::string serialize_scenario(const Scenario& s) {
  std::ostringstream o;
  o << "name = " << s.name << "\n";
  o << "frame.wavelength = " << num(s.wavelength * 1e9) << " nm\n";
  o << "frame.mass = " << num(s.mass) << " kg\n";
  o << "gravity = " << (s.gravity ? "on" : "off") << "\n";
  if (s.trap.present) {
    o << "trap.frequency = " << num(s.trap.frequency) << " Hz\n";
    o << "trap.center = " << num(s.trap.center * 1e6) << " um\n";
  }
  o << "initial.kind = "
    << (s.initial.kind == InitialState::Kind::Gaussian ? "gaussian" : "bloch")
    << "\n";
  o << "initial.position = " << num(s.initial.position * 1e6) << " um\n";
  o << "initial.velocity = " << num(s.initial.velocity * 1e3) << " mm/s\n";
  o << "initial.sigma = " << num(s.initial.sigma * 1e6) << " um\n";
  if (s.initial.kind == InitialState::Kind::Bloch) {
    o << "initial.band = " << s.initial.band << "\n";
    o << "initial.q = " << num(s.initial.q) << "\n";
  }
  for (std::size_t i = 0; i < s.schedule.segments.size(); ++i) {
    const auto& g = s.schedule.segments[i];
    const std::string p = "schedule.segment[" + std::to_string(i) + "].";
    o << p << "t_start = " << num(g.t_start * 1e3) << " ms\n";
    o << p << "t_end = " << num(g.t_end * 1e3) << " ms\n";
    o << p << "shape = " << to_string(g.shape) << "\n";
    o << p << "depth_start = " << num(g.depth_start) << " Er\n";
    o << p << "depth_end = " << num(g.depth_end) << " Er\n";
  }
  for (std::size_t i = 0; i < s.schedule.events.size(); ++i) {
    const auto& e = s.schedule.events[i];
    const std::string p = "schedule.event[" + std::to_string(i) + "].";
    o << p << "time = " << num(e.time * 1e3) << " ms\n";
    o << p << "kind = " << to_string(e.kind) << "\n";
    if (e.kind == EventKind::TrapDisplace)
      o << p << "payload = " << num(e.payload * 1e6) << " um\n";
  }
  o << "run.t_end = " << num(s.t_end * 1e3) << " ms\n";
  o << "solver.grid.x_min = " << num(s.grid.x_min * 1e6) << " um\n";
  o << "solver.grid.x_max = " << num(s.grid.x_max * 1e6) << " um\n";
  o << "solver.grid.points = " << s.grid.n_points << "\n";
  o << "solver.dt = " << num(s.dt * 1e6) << " us\n";
  if (s.g1d != 0.0) o << "solver.g1d = " << num(s.g1d) << "\n";
  o << "solver.fast_forward = " << (s.fast_forward ? "on" : "off") << "\n";
  o << "cascade.merge = " << (s.merge_packets ? "on" : "off") << "\n";
  o << "cascade.unbound_threshold = " << num(s.unbound_threshold) << "\n";
  if (s.outputs.density_stride > 0.0)
    o << "output.density_stride = " << num(s.outputs.density_stride * 1e3)
      << " ms\n";
  if (s.outputs.momentum_stride > 0.0)
    o << "output.momentum_stride = " << num(s.outputs.momentum_stride * 1e3)
      << " ms\n";
  for (std::size_t i = 0; i < s.outputs.snapshots.size(); ++i)
    o << "output.snapshot[" << i
      << "] = " << num(s.outputs.snapshots[i] * 1e3) << " ms\n";
  if (s.outputs.tof > 0.0)
    o << "output.tof = " << num(s.outputs.tof * 1e3) << " ms\n";
  for (std::size_t i = 0; i < s.scan_depths.size(); ++i)
    o << "scan.depth[" << i << "] = " << num(s.scan_depths[i]) << " Er\n";
  return o.str();
}

void save_scenario(const Scenario& scn, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << serialize_scenario(scn);
  if (!out) throw IoError("write failed for " + path);
}

void apply_override(Scenario& scn, const std::string& assignment) {
  // Round-trip through the text form with the override appended last.
  std::string text = serialize_scenario(scn) + assignment + "\n";
  scn = parse_scenario(text);
}

}  // namespace mws
