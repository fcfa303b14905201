#ifndef MWS_RUNNER_HPP
#define MWS_RUNNER_HPP

#include <optional>
#include <string>
#include <vector>

#include "mws/analysis.hpp"
#include "mws/cascade.hpp"
#include "mws/scenario.hpp"
#include "mws/wavefunction.hpp"

namespace mws {

enum class Engine { Event, Wave, Both };

struct RunOptions {
  Engine engine = Engine::Both;
  int jobs = 1;
  bool verbose = false;
};

struct ScanPoint {
  double depth = 0.0;
  double p_event = 0.0;  // Landau-Zener with the diagonalized gap
  double p_wave = 0.0;   // band-resolved tunneled fraction, wave solver
};

struct RunResult {
  Scenario scenario;

  std::optional<CascadeResult> event;
  std::optional<PacketSet> event_packets;  // leaves after time of flight

  std::optional<Wavefunction> wave_final;     // at t_end, before TOF
  std::optional<Wavefunction> wave_expanded;  // after TOF when tof > 0
  std::optional<PacketSet> wave_packets;
  std::vector<std::pair<double, MomentumDistribution>> momentum_snapshots;
  std::vector<Wavefunction> density_frames;   // at output.density_stride
  std::vector<std::pair<double, MomentumDistribution>> momentum_frames;

  std::vector<ScanPoint> scan;  // tunneling-probability scan mode
};

/// Runs a scenario with the selected engine(s). Scenarios with scan_depths
/// run one single-crossing experiment per depth (parallel up to jobs) and
/// fill `scan` instead of the packet fields.
RunResult run_scenario(const Scenario& scn, const RunOptions& opts = {});

/// Runs and writes outputs + manifest into out_dir (created if needed).
/// Returns the written file names (relative to out_dir).
std::vector<std::string> run_to_directory(const Scenario& scn,
                                          const RunOptions& opts,
                                          const std::string& out_dir,
                                          RunResult* result_out = nullptr);

/// FNV-1a over the canonical serialization; stable across runs.
std::uint64_t scenario_hash(const Scenario& scn);

const char* version_string();

}  // namespace mws

#endif
