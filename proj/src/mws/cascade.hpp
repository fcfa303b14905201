#ifndef MWS_CASCADE_HPP
#define MWS_CASCADE_HPP

#include <optional>
#include <string>
#include <vector>

#include "mws/recoil_frame.hpp"
#include "mws/scenario.hpp"

namespace mws {

// Analytic event model. Packets follow classical kinematics in the
// environment (ballistic under gravity, harmonic arcs in the trap); the
// lattice acts only at zone-edge crossings, i.e. whenever a packet's
// momentum magnitude passes n*hbar*k_r while the lattice is on. There the
// packet branches: the diabatic part keeps its trajectory (Landau-Zener
// tunneling, probability P_t(n)), the adiabatic part Bragg-reflects
// (velocity flips). Crossings with P_t above the unbound threshold pass
// through silently, ones with P_t below 1e-9 reflect whole.
//
// Packets that coincide in kinematic state are coalesced only while both
// still face a further branching; once a packet's branching history is
// over it stays a distinct leaf even if co-located (co-located leaves
// separate only transversely, which this 1D model does not resolve).

enum class PacketStatus { TrappedOscillating, ReleasedFalling, Free };

struct PacketNode {
  int id = 0;
  int parent_id = -1;  // -1 for the root
  double fraction = 1.0;
  int band = 0;
  PacketStatus status = PacketStatus::Free;
  std::optional<int> release_cycle;  // branching ordinal that created it
  double release_time = 0.0;         // valid when release_cycle is set
  double birth_time = 0.0;
  double position = 0.0;  // m, at stamp_time
  double velocity = 0.0;  // m/s, at stamp_time
  double stamp_time = 0.0;
  bool leaf = true;
};

struct TimelineRecord {
  double time;
  std::string what;
};

struct CascadeResult {
  std::vector<PacketNode> packets;  // whole tree; leaves flagged
  std::vector<double> per_cycle_probabilities;
  std::vector<TimelineRecord> timeline;

  std::vector<const PacketNode*> leaves() const;
  double leaf_fraction_sum() const;
};

/// Full event-model simulation of a scenario (gravity and/or trap,
/// depth schedule with events).
CascadeResult simulate_cascade(const Scenario& scenario);

/// Abstract cascade: the given per-cycle tunneling probabilities are
/// applied to the trapped lineage at successive zone-edge crossings under
/// constant acceleration (default gravity); after the last entry the
/// remnant is released whole, as by a lattice turn-off half a cycle later.
struct AbstractCascadeOptions {
  double accel = constants::gravity;  // m/s^2
  double t_first_crossing = -1.0;     // s; < 0 means tau_B/2
  double x0 = 0.0;                    // m, trapped-packet position
};

CascadeResult simulate_cascade(const std::vector<double>& probabilities,
                               const RecoilFrame& frame,
                               const AbstractCascadeOptions& opts = {});

/// Writes "packet_id,parent_id,fraction,band,release_cycle,release_time"
/// (release fields empty when unset).
void write_packet_tree_csv(const CascadeResult& result,
                           const std::string& path);

}  // namespace mws

#endif
