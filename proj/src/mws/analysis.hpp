#ifndef MWS_ANALYSIS_HPP
#define MWS_ANALYSIS_HPP

#include <string>
#include <vector>

#include "mws/wavefunction.hpp"

namespace mws {

enum class Axis { Position, Momentum };

struct Packet {
  double centroid = 0.0;    // m (position axis) or hbar*k_r (momentum axis)
  double width = 0.0;       // density-weighted RMS, same units
  double population = 0.0;  // fraction of the total
  std::string label;
};

struct PacketSet {
  std::vector<Packet> packets;  // sorted by centroid
  Axis axis = Axis::Position;
  double total = 0.0;  // summed population of all packets
};

inline constexpr double kDefaultThresholdFrac = 0.05;
inline constexpr double kDefaultMinSeparationPos = 5e-6;   // m
inline constexpr double kDefaultMinSeparationMom = 0.2;    // hbar*k_r

/// Splits a sampled density into packets: contiguous regions above
/// threshold_frac * max(density), with gaps shorter than min_separation
/// bridged. Populations are fractions of the integrated total; an
/// all-zero density yields an empty set.
PacketSet detect_packets(const std::vector<double>& density,
                         const std::vector<double>& axis_values, Axis axis,
                         double threshold_frac = kDefaultThresholdFrac,
                         double min_separation = kDefaultMinSeparationPos);

/// Position-space packets of |psi|^2 (axis in meters).
PacketSet detect_packets(const Wavefunction& wf,
                         double threshold_frac = kDefaultThresholdFrac,
                         double min_separation = kDefaultMinSeparationPos);

/// Population standard deviation over mean population.
double uniformity(const PacketSet& ps);

/// |psi~(p)|^2 on the momentum axis in hbar*k_r, sorted by p and
/// normalized so the integral equals the wavefunction norm.
struct MomentumDistribution {
  std::vector<double> p;        // hbar*k_r
  std::vector<double> density;  // per hbar*k_r
  double dp = 0.0;
};

MomentumDistribution momentum_distribution(const Wavefunction& wf);

/// Projects psi onto the Bloch bands of a lattice of the given depth:
/// each momentum class q collects the plane-wave components q + 2l and is
/// decomposed in the band eigenbasis. Fractions sum to the norm within
/// 1e-8. Grid lengths that are not a multiple of half the lattice period
/// use nearest-bin folding.
std::vector<double> band_populations(const Wavefunction& wf, double depth,
                                     int n_bands);

/// Writes "packet_id,axis,centroid,width,population" rows.
void write_packet_csv(const PacketSet& ps, const std::string& path);

/// Plain-text summary: packet count, populations, uniformity.
std::string packet_summary(const PacketSet& ps);

}  // namespace mws

#endif
