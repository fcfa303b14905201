#include "mws/cascade.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <fstream>
#include <limits>

#include "mws/bands.hpp"
#include "mws/errors.hpp"
#include "mws/landau_zener.hpp"

namespace mws {

namespace {

constexpr double kBranchFloor = 1e-9;  // below: pure Bragg reflection
constexpr double kInf = std::numeric_limits<double>::infinity();

struct Live {
  int node;  // index into result.packets
  double x = 0.0;
  double v = 0.0;
  double fraction = 1.0;
  double last_event = -1.0;  // time of the crossing that produced this state
};

// Environment state as of the last processed schedule event.
struct Env {
  bool gravity = false;
  double g = constants::gravity;
  bool trap = false;
  double omega = 0.0;
  double trap_center = 0.0;
};

// Advances (x, v) by dt under the current environment. With the trap on,
// gravity only shifts the harmonic center; both cases are closed form.
void advance(const Env& env, double dt, double& x, double& v) {
  if (dt == 0.0) return;
  if (env.trap) {
    const double c = env.trap_center -
                     (env.gravity ? env.g / (env.omega * env.omega) : 0.0);
    const double u = x - c;
    const double cs = std::cos(env.omega * dt), sn = std::sin(env.omega * dt);
    x = c + u * cs + (v / env.omega) * sn;
    v = v * cs - u * env.omega * sn;
  } else if (env.gravity) {
    x += v * dt - 0.5 * env.g * dt * dt;
    v -= env.g * dt;
  } else {
    x += v * dt;
  }
}

// Earliest time t in (t_from + guard, t_limit] at which |v| passes
// n * v_r for any n in [1, n_max]. Returns +inf if none. The packet state
// (x, v) is taken at t_from; the environment is assumed constant.
double next_crossing_time(const Env& env, double x, double v, double v_r,
                          int n_max, double t_from, double t_limit,
                          double guard) {
  double best = kInf;
  if (env.trap) {
    const double c = env.trap_center -
                     (env.gravity ? env.g / (env.omega * env.omega) : 0.0);
    const double u = x - c;
    const double amp = std::hypot(v, u * env.omega);
    const double phi = std::atan2(u * env.omega, v);
    const double period = 2.0 * M_PI / env.omega;
    for (int n = 1; n <= n_max; ++n) {
      const double vn = n * v_r;
      if (vn > amp) break;
      // v(tau) = amp * cos(omega*tau + phi); roots of cos = +-vn/amp
      const double th = std::acos(std::clamp(vn / amp, -1.0, 1.0));
      for (double theta : {th, -th, M_PI - th, th - M_PI}) {
        double tau = (theta - phi) / env.omega;
        tau -= std::floor(tau / period) * period;
        if (tau <= guard) tau += period;
        const double t = t_from + tau;
        if (t <= t_limit && t < best) best = t;
      }
    }
  } else if (env.gravity) {
    for (int n = 1; n <= n_max; ++n) {
      const double vn = n * v_r;
      for (double target : {vn, -vn}) {
        const double tau = (v - target) / env.g;
        if (tau > guard && t_from + tau <= t_limit)
          best = std::min(best, t_from + tau);
      }
    }
  }
  return best;
}

std::string fmt(const char* format, ...) {
  char buf[192];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return buf;
}

class CascadeEngine {
 public:
  explicit CascadeEngine(const Scenario& scn)
      : scn_(scn), frame_(scn.frame()) {
    env_.gravity = scn.gravity;
    env_.trap = scn.trap.present;
    env_.omega = 2.0 * M_PI * scn.trap.frequency;
    env_.trap_center = scn.trap.center;
  }

  CascadeResult run() {
    PacketNode root;
    root.id = 0;
    root.parent_id = -1;
    root.fraction = 1.0;
    root.status = initial_status();
    root.position = scn_.initial.position;
    root.velocity = scn_.initial.velocity;
    result_.packets.push_back(root);
    live_.push_back({0, scn_.initial.position, scn_.initial.velocity, 1.0});

    auto events = scn_.schedule.events;
    std::stable_sort(events.begin(), events.end(),
                     [](const ScheduleEvent& a, const ScheduleEvent& b) {
                       return a.time < b.time;
                     });
    std::size_t next_event = 0;

    double t = 0.0;
    int safety = 0;
    while (t < scn_.t_end) {
      if (++safety > 200000)
        throw AccuracyError("cascade event loop failed to terminate");
      double t_next = scn_.t_end;
      bool have_crossing = false;
      for (const auto& p : live_) {
        const double tc = next_branchable_crossing(p, t, t_next);
        if (tc < t_next) {
          t_next = tc;
          have_crossing = true;
        }
      }
      const bool schedule_due =
          next_event < events.size() &&
          (events[next_event].time < t_next ||
           (!have_crossing && events[next_event].time <= t_next));
      if (schedule_due) t_next = events[next_event].time;

      advance_all(t_next - t);
      t = t_next;
      if (t >= scn_.t_end) break;

      if (schedule_due) {
        process_schedule_event(events[next_event]);
        ++next_event;
        continue;
      }

      // Process every packet sitting at a crossing right now (simultaneous
      // arrivals from different directions), then coalesce.
      for (std::size_t i = 0; i < live_.size(); ++i) {
        if (live_[i].last_event == t) continue;  // child born this instant
        if (is_at_crossing(live_[i], t)) process_crossing(i, t);
      }
      merge_pass(t);
    }

    finalize(scn_.t_end);
    return std::move(result_);
  }

 private:
  PacketStatus initial_status() const {
    if (env_.trap) return PacketStatus::TrappedOscillating;
    if (env_.gravity) return PacketStatus::ReleasedFalling;
    return PacketStatus::Free;
  }

  void advance_all(double dt) {
    for (auto& p : live_) advance(env_, dt, p.x, p.v);
  }

  // Next crossing of p (state at time t) with the lattice actually on.
  double next_branchable_crossing(const Live& p, double t,
                                  double t_limit) const {
    const double guard = 1e-10;
    double from = t;
    double x = p.x, v = p.v;
    int safety = 0;
    while (from < t_limit && ++safety < 4096) {
      const double tc = next_crossing_time(env_, x, v, frame_.v_r, n_max_,
                                           from, t_limit, guard);
      if (tc == kInf) return kInf;
      if (scn_.schedule.depth(tc) > 1e-12) return tc;
      advance(env_, tc - from, x, v);
      from = tc;  // lattice off at that root; keep scanning
    }
    return kInf;
  }

  bool is_at_crossing(const Live& p, double t) const {
    if (scn_.schedule.depth(t) <= 1e-12) return false;
    const double r = std::abs(p.v) / frame_.v_r;
    const double n = std::round(r);
    return n >= 1.0 && n <= n_max_ && std::abs(r - n) < 1e-7;
  }

  // Landau-Zener branching of live packet i at time t.
  void process_crossing(std::size_t i, double t) {
    const double x = live_[i].x;
    const double v = live_[i].v;
    const double f = live_[i].fraction;
    const int node = live_[i].node;
    const int n = static_cast<int>(std::round(std::abs(v) / frame_.v_r));
    if (n < 1 || n > n_max_) return;

    const double depth = scn_.schedule.depth(t);
    const double gap = band_gap_at(depth, n);
    const double a_signed = accel_signed(x);
    if (a_signed == 0.0) return;  // no force: no sweep through the crossing
    const double a_loc = std::abs(a_signed);
    const double prob = tunneling_probability(gap, n, a_loc, frame_);

    // |v| increasing means the packet enters from the band below.
    const bool increasing = v * a_signed > 0.0;
    const int band_before = increasing ? n - 1 : n;
    const int band_diabatic = increasing ? n : n - 1;

    if (prob >= scn_.unbound_threshold) {
      live_[i].last_event = t;  // free flight through an invisible gap
      return;
    }
    if (prob <= kBranchFloor) {
      live_[i].v = -v;  // full Bragg reflection
      live_[i].last_event = t;
      result_.timeline.push_back(
          {t, fmt("bragg reflection (n=%d, P=%.2e) packet #%d", n, prob,
                  result_.packets[node].id)});
      return;
    }

    ++cycle_;
    result_.per_cycle_probabilities.push_back(prob);

    {
      PacketNode& parent = result_.packets[node];
      parent.leaf = false;
      stamp(parent, t, x, v);
    }
    const int parent_id = result_.packets[node].id;

    const int dia = new_node(parent_id, f * prob, band_diabatic, t, x, v);
    const int adi =
        new_node(parent_id, f * (1.0 - prob), band_before, t, x, -v);
    classify(result_.packets[dia], depth, true);
    classify(result_.packets[adi], depth, false);

    result_.timeline.push_back(
        {t, fmt("crossing %d: n=%d depth=%.4g a=%.4g P=%.6g #%d -> #%d "
                "(tunnel) + #%d (reflect)",
                cycle_, n, depth, a_loc, prob, parent_id,
                result_.packets[dia].id, result_.packets[adi].id)});

    live_[i] = Live{dia, x, v, f * prob, t};
    live_.push_back(Live{adi, x, -v, f * (1.0 - prob), t});
  }

  double accel_signed(double x) const {
    double a = 0.0;
    if (env_.trap) a -= env_.omega * env_.omega * (x - env_.trap_center);
    if (env_.gravity) a -= env_.g;
    return a;
  }

  int new_node(int parent_id, double fraction, int band, double t, double x,
               double v) {
    PacketNode n;
    n.id = static_cast<int>(result_.packets.size());
    n.parent_id = parent_id;
    n.fraction = fraction;
    n.band = band;
    n.release_cycle = cycle_;
    n.release_time = t;
    n.birth_time = t;
    stamp(n, t, x, v);
    result_.packets.push_back(n);
    return n.id;
  }

  void classify(PacketNode& node, double depth, bool diabatic) {
    if (env_.trap) {
      node.status = PacketStatus::TrappedOscillating;
      return;
    }
    if (!diabatic) {  // Bragg reflected: continues the trapped lineage
      node.status = PacketStatus::TrappedOscillating;
      node.release_cycle.reset();
      return;
    }
    // Gravity: the tunneled part is released once its band is unbound at
    // this depth (gap to the next band essentially transparent).
    const double gap_up = band_gap_at(depth, node.band + 1);
    const double p_up =
        tunneling_probability(gap_up, node.band + 1, env_.g, frame_);
    node.status = p_up > scn_.unbound_threshold
                      ? PacketStatus::ReleasedFalling
                      : PacketStatus::TrappedOscillating;
  }

  static void stamp(PacketNode& n, double t, double x, double v) {
    n.position = x;
    n.velocity = v;
    n.stamp_time = t;
  }

  // Coalesces co-located live packets that both still face a branching
  // crossing; see header comment.
  void merge_pass(double t) {
    if (!scn_.merge_packets) return;
    for (std::size_t i = 0; i < live_.size(); ++i) {
      for (std::size_t j = i + 1; j < live_.size(); ++j) {
        if (std::abs(live_[i].x - live_[j].x) > 1e-10 ||
            std::abs(live_[i].v - live_[j].v) > 1e-10)
          continue;
        if (result_.packets[live_[i].node].band !=
            result_.packets[live_[j].node].band)
          continue;
        if (!has_pending_branching(live_[i], t) ||
            !has_pending_branching(live_[j], t))
          continue;

        const int keep =
            live_[i].fraction >= live_[j].fraction ? live_[i].node
                                                   : live_[j].node;
        PacketNode merged;
        merged.id = static_cast<int>(result_.packets.size());
        merged.parent_id = result_.packets[keep].id;
        merged.fraction = live_[i].fraction + live_[j].fraction;
        merged.band = result_.packets[live_[i].node].band;
        merged.status = result_.packets[live_[i].node].status;
        merged.release_cycle = cycle_;
        merged.release_time = t;
        merged.birth_time = t;
        stamp(merged, t, live_[i].x, live_[i].v);
        result_.timeline.push_back(
            {t, fmt("merge #%d + #%d -> #%d (co-located, both branch again)",
                    result_.packets[live_[i].node].id,
                    result_.packets[live_[j].node].id, merged.id)});
        result_.packets[live_[i].node].leaf = false;
        result_.packets[live_[j].node].leaf = false;
        result_.packets.push_back(merged);
        live_[i] =
            Live{merged.id, live_[i].x, live_[i].v, merged.fraction, t};
        live_.erase(live_.begin() + j);
        --j;
      }
    }
  }

  bool has_pending_branching(const Live& p, double t) const {
    const double guard = 1e-10;
    double from = t;
    double x = p.x, v = p.v;
    int safety = 0;
    while (from < scn_.t_end && ++safety < 4096) {
      const double tc = next_crossing_time(env_, x, v, frame_.v_r, n_max_,
                                           from, scn_.t_end, guard);
      if (tc == kInf) return false;
      advance(env_, tc - from, x, v);
      from = tc;
      const double depth = scn_.schedule.depth(tc);
      if (depth <= 1e-12) continue;
      const int n = static_cast<int>(std::round(std::abs(v) / frame_.v_r));
      if (n < 1 || n > n_max_) continue;
      const double a_loc = std::abs(accel_signed(x));
      if (a_loc <= 0.0) continue;
      const double prob =
          tunneling_probability(band_gap_at(depth, n), n, a_loc, frame_);
      if (prob > kBranchFloor && prob < scn_.unbound_threshold) return true;
      if (prob <= kBranchFloor) return false;  // will reflect, not branch
    }
    return false;
  }

  void process_schedule_event(const ScheduleEvent& ev) {
    result_.timeline.push_back({ev.time, to_string(ev.kind)});
    switch (ev.kind) {
      case EventKind::TrapDisplace:
        env_.trap_center = ev.payload;
        break;
      case EventKind::TrapOff:
        env_.trap = false;
        for (auto& p : live_) mark_released(p, ev.time);
        break;
      case EventKind::LatticeOff:
        for (auto& p : live_) mark_released(p, ev.time);
        break;
      case EventKind::Release:
        env_.trap = false;
        for (auto& p : live_) mark_released(p, ev.time);
        break;
    }
  }

  void mark_released(Live& p, double t) {
    PacketNode& n = result_.packets[p.node];
    if (n.status == PacketStatus::TrappedOscillating) {
      n.status = env_.gravity ? PacketStatus::ReleasedFalling
                              : PacketStatus::Free;
      if (!n.release_cycle) n.release_time = t;
    }
  }

  void finalize(double t_end) {
    for (auto& p : live_) {
      PacketNode& n = result_.packets[p.node];
      stamp(n, t_end, p.x, p.v);
      if (!scn_.schedule.lattice_on(t_end)) mark_released(p, t_end);
    }
  }

  const Scenario& scn_;
  RecoilFrame frame_;
  Env env_;
  CascadeResult result_;
  std::vector<Live> live_;
  int cycle_ = 0;
  int n_max_ = 10;
};

}  // namespace

std::vector<const PacketNode*> CascadeResult::leaves() const {
  std::vector<const PacketNode*> out;
  for (const auto& p : packets)
    if (p.leaf) out.push_back(&p);
  return out;
}

double CascadeResult::leaf_fraction_sum() const {
  double s = 0.0;
  for (const auto& p : packets)
    if (p.leaf) s += p.fraction;
  return s;
}

CascadeResult simulate_cascade(const Scenario& scenario) {
  return CascadeEngine(scenario).run();
}

CascadeResult simulate_cascade(const std::vector<double>& probabilities,
                               const RecoilFrame& frame,
                               const AbstractCascadeOptions& opts) {
  if (!(opts.accel > 0.0)) throw DomainError("acceleration must be > 0");
  for (double p : probabilities)
    if (!(p >= 0.0 && p <= 1.0))
      throw DomainError("probabilities must lie in [0, 1]");

  const double tau_b = bloch_period(opts.accel, frame);
  const double t1 =
      opts.t_first_crossing >= 0.0 ? opts.t_first_crossing : 0.5 * tau_b;

  CascadeResult result;
  PacketNode root;
  root.id = 0;
  root.status = PacketStatus::TrappedOscillating;
  root.position = opts.x0;
  result.packets.push_back(root);

  double remaining = 1.0;
  int trapped = 0;  // node index of the live trapped lineage
  for (std::size_t k = 0; k < probabilities.size(); ++k) {
    const double t = t1 + static_cast<double>(k) * tau_b;
    const double p = probabilities[k];
    result.per_cycle_probabilities.push_back(p);
    if (p <= 0.0) {
      result.timeline.push_back(
          {t, fmt("cycle %zu: tunneling suppressed (P=0)", k + 1)});
      continue;
    }

    result.packets[trapped].leaf = false;
    const int parent_id = result.packets[trapped].id;

    PacketNode rel;
    rel.id = static_cast<int>(result.packets.size());
    rel.parent_id = parent_id;
    rel.fraction = remaining * p;
    rel.band = 1;
    rel.status = PacketStatus::ReleasedFalling;
    rel.release_cycle = static_cast<int>(k) + 1;
    rel.release_time = t;
    rel.birth_time = t;
    rel.position = opts.x0;
    rel.velocity = -frame.v_r;
    rel.stamp_time = t;
    result.packets.push_back(rel);

    PacketNode rem;
    rem.id = static_cast<int>(result.packets.size());
    rem.parent_id = parent_id;
    rem.fraction = remaining * (1.0 - p);
    rem.band = 0;
    rem.status = PacketStatus::TrappedOscillating;
    rem.birth_time = t;
    rem.position = opts.x0;
    rem.velocity = frame.v_r;
    rem.stamp_time = t;
    result.packets.push_back(rem);

    result.timeline.push_back({t, fmt("cycle %zu: P=%.6g released %.6g",
                                      k + 1, p, rel.fraction)});
    remaining *= (1.0 - p);
    trapped = rem.id;
    if (remaining <= 0.0) break;
  }

  if (remaining > 0.0) {
    PacketNode& n = result.packets[trapped];
    n.status = PacketStatus::ReleasedFalling;
    n.release_time =
        t1 + (static_cast<double>(probabilities.size()) + 0.5) * tau_b;
    n.velocity = 0.0;
    n.stamp_time = n.release_time;
    result.timeline.push_back(
        {n.release_time,
         fmt("lattice off: remnant fraction %.6g released", remaining)});
  }
  return result;
}

void write_packet_tree_csv(const CascadeResult& result,
                           const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << "packet_id,parent_id,fraction,band,release_cycle,release_time\n";
  char buf[160];
  for (const auto& p : result.packets) {
    if (p.release_cycle) {
      std::snprintf(buf, sizeof(buf), "%d,%d,%.12g,%d,%d,%.12g\n", p.id,
                    p.parent_id, p.fraction, p.band, *p.release_cycle,
                    p.release_time);
    } else {
      std::snprintf(buf, sizeof(buf), "%d,%d,%.12g,%d,,\n", p.id, p.parent_id,
                    p.fraction, p.band);
    }
    out << buf;
  }
  if (!out) throw IoError("write failed for " + path);
}

}  // namespace mws
