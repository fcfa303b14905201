#include "mws/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <thread>

#include "mws/bands.hpp"
#include "mws/errors.hpp"
#include "mws/landau_zener.hpp"
#include "mws/potential.hpp"
#include "mws/propagator.hpp"
#include "mws/scenario_io.hpp"

namespace mws {

namespace {

Wavefunction initial_wavefunction(const Scenario& scn,
                                  const RecoilFrame& frame) {
  if (scn.initial.kind == InitialState::Kind::Bloch) {
    return bloch_wavepacket(frame, scn.grid.x_min, scn.grid.x_max,
                            scn.grid.n_points, scn.initial.position,
                            scn.initial_sigma(), scn.schedule.depth(0.0),
                            scn.initial.band, scn.initial.q);
  }
  return gaussian_state(frame, scn.grid.x_min, scn.grid.x_max,
                        scn.grid.n_points, scn.initial.position,
                        scn.initial_sigma(), scn.initial.velocity);
}

// Coherent-state fast forward: a trap ground-state Gaussian follows the
// classical trajectory rigidly, so integration can start just before the
// first lattice segment. Applicable only to that exact situation.
bool try_fast_forward(const Scenario& scn, const RecoilFrame& frame,
                      Wavefunction& wf) {
  if (!scn.fast_forward || !scn.trap.present || scn.gravity ||
      scn.g1d != 0.0 || scn.initial.kind != InitialState::Kind::Gaussian ||
      scn.initial.sigma != 0.0 || scn.schedule.segments.empty())
    return false;
  const double margin = 0.3e-3;
  const double t_ff = scn.schedule.segments.front().t_start - margin;
  if (t_ff <= 0.0) return false;
  double center = scn.trap.center;
  for (const auto& ev : scn.schedule.events) {
    if (ev.time > 0.0) return false;  // only t = 0 displacements supported
    if (ev.kind != EventKind::TrapDisplace) return false;
    center = ev.payload;
  }
  const double omega = 2.0 * M_PI * scn.trap.frequency;
  const double u = scn.initial.position - center;
  const double x = center + u * std::cos(omega * t_ff) +
                   scn.initial.velocity / omega * std::sin(omega * t_ff);
  const double v = scn.initial.velocity * std::cos(omega * t_ff) -
                   u * omega * std::sin(omega * t_ff);
  wf = gaussian_state(frame, scn.grid.x_min, scn.grid.x_max,
                      scn.grid.n_points, x, scn.initial_sigma(), v);
  wf.time = t_ff / frame.t_r;
  return true;
}

// Ballistic advance of event-model leaves over the time of flight.
PacketSet event_packet_set(const Scenario& scn, const CascadeResult& cr) {
  const double t = scn.outputs.tof;
  PacketSet ps;
  ps.axis = Axis::Position;
  for (const auto* leaf : cr.leaves()) {
    Packet pk;
    double x = leaf->position, v = leaf->velocity;
    if (t > 0.0) {
      if (scn.gravity) {
        x += v * t - 0.5 * constants::gravity * t * t;
      } else {
        x += v * t;
      }
    }
    pk.centroid = x;
    pk.width = 0.0;
    pk.population = leaf->fraction;
    ps.packets.push_back(pk);
  }
  std::sort(ps.packets.begin(), ps.packets.end(),
            [](const Packet& a, const Packet& b) {
              return a.centroid < b.centroid;
            });
  for (std::size_t i = 0; i < ps.packets.size(); ++i)
    ps.packets[i].label = "packet_" + std::to_string(i);
  ps.total = 0.0;
  for (const auto& p : ps.packets) ps.total += p.population;
  return ps;
}

void run_wave(const Scenario& scn, RunResult& out) {
  const RecoilFrame frame = scn.frame();
  Wavefunction wf = initial_wavefunction(scn, frame);
  if (scn.initial.kind == InitialState::Kind::Gaussian)
    try_fast_forward(scn, frame, wf);

  PotentialProgram program(scn, frame);
  SplitStepPropagator prop(program, scn.grid.n_points);
  const double dt = scn.solver_dt();

  struct Mark {
    double t;
    bool snapshot = false, density = false, momentum = false;
  };
  std::vector<Mark> marks;
  for (double t : scn.outputs.snapshots) marks.push_back({t, true});
  if (scn.outputs.density_stride > 0.0)
    for (double t = wf.time_si(); t < scn.t_end;
         t += scn.outputs.density_stride)
      marks.push_back({t, false, true, false});
  if (scn.outputs.momentum_stride > 0.0)
    for (double t = wf.time_si(); t < scn.t_end;
         t += scn.outputs.momentum_stride)
      marks.push_back({t, false, false, true});
  std::sort(marks.begin(), marks.end(),
            [](const Mark& a, const Mark& b) { return a.t < b.t; });
  for (const Mark& mark : marks) {
    if (mark.t < wf.time_si() - 1e-12 || mark.t > scn.t_end) continue;
    prop.evolve(wf, dt, mark.t);
    if (mark.snapshot && mark.t < scn.t_end)
      out.momentum_snapshots.push_back({mark.t, momentum_distribution(wf)});
    if (mark.density) out.density_frames.push_back(wf);
    if (mark.momentum)
      out.momentum_frames.push_back({mark.t, momentum_distribution(wf)});
  }
  prop.evolve(wf, dt, scn.t_end);
  out.wave_final = wf;

  Wavefunction final_wf = wf;
  if (scn.outputs.tof > 0.0) {
    final_wf = free_expand(wf, scn.outputs.tof, scn.gravity);
    out.wave_expanded = final_wf;
  }
  out.wave_packets = detect_packets(final_wf);
}

ScanPoint scan_point(const Scenario& base, double depth) {
  Scenario scn = base;
  scn.scan_depths.clear();
  for (auto& seg : scn.schedule.segments) {
    seg.depth_start = depth;
    seg.depth_end = depth;
  }
  const RecoilFrame frame = scn.frame();

  ScanPoint pt;
  pt.depth = depth;
  pt.p_event = tunneling_probability(band_gap_at(depth, 1), 1,
                                     constants::gravity, frame);

  Wavefunction wf = initial_wavefunction(scn, frame);
  PotentialProgram program(scn, frame);
  SplitStepPropagator prop(program, scn.grid.n_points);
  prop.evolve(wf, scn.solver_dt(), 0.999 * scn.t_end);
  const auto pops = band_populations(wf, depth, 6);
  double total = 0.0;
  for (double p : pops) total += p;
  pt.p_wave = total > 0.0 ? 1.0 - pops[0] / total : 0.0;
  return pt;
}

std::string iso_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

void write_density_csv(const Wavefunction& wf, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << "t,x,density\n";
  char buf[96];
  const double t = wf.time_si();
  for (int i = 0; i < wf.n(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.9g,%.9g,%.9g\n", t,
                  wf.x(i) / wf.frame.k_r, std::norm(wf.psi[i]) * wf.frame.k_r);
    out << buf;
  }
}

void write_momentum_csv(const MomentumDistribution& md, double t,
                        const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << "t,p_hkr,density\n";
  char buf[96];
  for (std::size_t i = 0; i < md.p.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.9g,%.9g,%.9g\n", t, md.p[i],
                  md.density[i]);
    out << buf;
  }
}

void write_scan_csv(const std::vector<ScanPoint>& scan,
                    const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << "depth_E_r,p_event,p_wave,abs_diff\n";
  char buf[128];
  for (const auto& pt : scan) {
    std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%.12g,%.12g\n", pt.depth,
                  pt.p_event, pt.p_wave, std::abs(pt.p_event - pt.p_wave));
    out << buf;
  }
}

void write_comparison_csv(const PacketSet& ev, const PacketSet& wv,
                          const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << "index,event_fraction,wave_population,abs_diff,event_position,"
         "wave_centroid\n";
  char buf[160];
  const std::size_t n = std::max(ev.packets.size(), wv.packets.size());
  for (std::size_t i = 0; i < n; ++i) {
    const bool he = i < ev.packets.size(), hw = i < wv.packets.size();
    const double fe = he ? ev.packets[i].population : 0.0;
    const double fw = hw ? wv.packets[i].population : 0.0;
    std::snprintf(buf, sizeof(buf), "%zu,%.12g,%.12g,%.12g,%.12g,%.12g\n", i,
                  fe, fw, std::abs(fe - fw),
                  he ? ev.packets[i].centroid : 0.0,
                  hw ? wv.packets[i].centroid : 0.0);
    out << buf;
  }
}

}  // namespace

RunResult run_scenario(const Scenario& scn, const RunOptions& opts) {
  scn.validate();
  RunResult out;
  out.scenario = scn;

  if (!scn.scan_depths.empty()) {
    out.scan.resize(scn.scan_depths.size());
    const int jobs = std::max(1, opts.jobs);
    std::vector<std::thread> pool;
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
      for (std::size_t i = next.fetch_add(1); i < scn.scan_depths.size();
           i = next.fetch_add(1))
        out.scan[i] = scan_point(scn, scn.scan_depths[i]);
    };
    if (jobs == 1) {
      worker();
    } else {
      for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
      for (auto& th : pool) th.join();
    }
    return out;
  }

  if (opts.engine != Engine::Wave) {
    out.event = simulate_cascade(scn);
    out.event_packets = event_packet_set(scn, *out.event);
  }
  if (opts.engine != Engine::Event) run_wave(scn, out);
  return out;
}

std::vector<std::string> run_to_directory(const Scenario& scn,
                                          const RunOptions& opts,
                                          const std::string& out_dir,
                                          RunResult* result_out) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory " + out_dir);
  const std::string started = iso_now();

  RunResult res = run_scenario(scn, opts);
  std::vector<std::string> files;
  auto path = [&](const std::string& name) {
    files.push_back(name);
    return out_dir + "/" + name;
  };

  save_scenario(scn, path("scenario.mws"));
  if (!res.scan.empty()) write_scan_csv(res.scan, path("lz_curve.csv"));
  if (res.event) {
    write_packet_tree_csv(*res.event, path("packet_tree.csv"));
    write_packet_csv(*res.event_packets, path("packets_event.csv"));
    std::ofstream tl(path("timeline.txt"));
    for (const auto& rec : res.event->timeline) {
      char buf[224];
      std::snprintf(buf, sizeof(buf), "%12.6f ms  %s\n", rec.time * 1e3,
                    rec.what.c_str());
      tl << buf;
    }
  }
  if (res.wave_packets) {
    write_packet_csv(*res.wave_packets, path("packets_wave.csv"));
    const Wavefunction& last =
        res.wave_expanded ? *res.wave_expanded : *res.wave_final;
    write_density_csv(last, path("density_final.csv"));
    write_momentum_csv(momentum_distribution(*res.wave_final),
                       res.wave_final->time_si(), path("momentum_final.csv"));
    std::ofstream sum(path("summary.txt"));
    sum << packet_summary(*res.wave_packets);
  }
  if (!res.density_frames.empty()) {
    std::ofstream out(path("density.csv"));
    out << "t,x,density\n";
    char buf[96];
    for (const auto& frame : res.density_frames) {
      const double t = frame.time_si();
      for (int i = 0; i < frame.n(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.9g,%.9g,%.9g\n", t,
                      frame.x(i) / frame.frame.k_r,
                      std::norm(frame.psi[i]) * frame.frame.k_r);
        out << buf;
      }
    }
  }
  if (!res.momentum_frames.empty()) {
    std::ofstream out(path("momentum.csv"));
    out << "t,p_hkr,density\n";
    char buf[96];
    for (const auto& [t, md] : res.momentum_frames) {
      for (std::size_t i = 0; i < md.p.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.9g,%.9g,%.9g\n", t, md.p[i],
                      md.density[i]);
        out << buf;
      }
    }
  }
  for (std::size_t i = 0; i < res.momentum_snapshots.size(); ++i) {
    char name[64];
    std::snprintf(name, sizeof(name), "momentum_snapshot_%zu.csv", i);
    write_momentum_csv(res.momentum_snapshots[i].second,
                       res.momentum_snapshots[i].first, path(name));
  }
  if (res.event_packets && res.wave_packets)
    write_comparison_csv(*res.event_packets, *res.wave_packets,
                         path("comparison.csv"));

  // manifest, written last so it can list everything
  {
    std::ofstream mf(out_dir + "/manifest.txt");
    if (!mf) throw IoError("cannot write manifest");
    char hash[32];
    std::snprintf(hash, sizeof(hash), "%016llx",
                  static_cast<unsigned long long>(scenario_hash(scn)));
    mf << "scenario = " << scn.name << "\n";
    mf << "scenario_hash = " << hash << "\n";
    mf << "engine = "
       << (opts.engine == Engine::Event
               ? "event"
               : opts.engine == Engine::Wave ? "wave" : "both")
       << "\n";
    mf << "started = " << started << "\n";
    mf << "finished = " << iso_now() << "\n";
    mf << "dt = " << scn.solver_dt() << "\n";
    mf << "grid_points = " << scn.grid.n_points << "\n";
    mf << "version = " << version_string() << "\n";
    mf << "outputs =";
    for (const auto& f : files) mf << " " << f;
    mf << " manifest.txt\n";
  }
  files.push_back("manifest.txt");
  if (result_out) *result_out = std::move(res);
  return files;
}

std::uint64_t scenario_hash(const Scenario& scn) {
  const std::string text = serialize_scenario(scn);
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

const char* version_string() { return "0.1.0"; }

}  // namespace mws
