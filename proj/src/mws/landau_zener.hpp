#ifndef MWS_LANDAU_ZENER_HPP
#define MWS_LANDAU_ZENER_HPP

#include <vector>

#include "mws/recoil_frame.hpp"

namespace mws {

// Landau-Zener tunneling at an avoided band crossing: an atom driven with
// acceleration a through the crossing of bands n-1 and n (gap Delta_n at
// extended-zone quasi-momentum n*hbar*k_r) tunnels diabatically with
//   P_t(n) = exp(-a_c(n)/a),  a_c(n) = pi * Delta_n^2 / (4 n k_r hbar^2).
// The complementary fraction 1 - P_t is Bragg reflected.

/// Critical acceleration a_c(n) in m/s^2 for a gap given in E_r.
double critical_acceleration(double gap_er, int n, const RecoilFrame& frame);

/// P_t(n) = exp(-a_c/a). gap in E_r, accel in m/s^2. Result in (0, 1].
double tunneling_probability(double gap_er, int n, double accel,
                             const RecoilFrame& frame);

/// tau_B = 2 hbar k_r / (m a): time to traverse the Brillouin zone under
/// constant acceleration. Seconds.
double bloch_period(double accel, const RecoilFrame& frame);

/// Per-crossing context for one band crossing, bundling the Eq.-style
/// quantities. acceleration in m/s^2, gap in E_r.
struct LZContext {
  RecoilFrame frame;
  double acceleration;
  int band_index;
  double gap;
  double critical_accel;
  double probability;
};

LZContext make_lz_context(double gap_er, int band_index, double accel,
                          const RecoilFrame& frame);

/// [1/m, 1/(m-1), ..., 1/2]: per-cycle tunneling probabilities that carve a
/// unit cloud into m equal packets; the last packet leaves whole when the
/// lattice is switched off, not by tunneling. m = 1 gives an empty list.
std::vector<double> equal_split_probabilities(int m);

/// p_i = f_i / (1 - sum_{j<i} f_j) for i = 1..m-1. Fractions must be
/// positive and sum to 1 within 1e-9.
std::vector<double> fractions_to_probabilities(
    const std::vector<double>& fractions);

/// Inverts Eq. P_t(depth) = p_target for the lattice depth (E_r), using the
/// exact diagonalized gap Delta_n(depth) and its monotonic growth with
/// depth. Bisection on [0, depth_max]; RangeError when the target is not
/// achievable within that range.
double depth_for_probability(double p_target, int n, double accel,
                             const RecoilFrame& frame,
                             double depth_max = 30.0);

/// Classical turning-point timing for a cloud oscillating as
/// x(t) = r_max cos(omega t): time at which |p| falls through
/// n*hbar*k_r while approaching the half-period turning point,
/// t = (pi - asin(n hbar k_r / p_max)) / omega with p_max = m omega r_max.
/// Throws RangeError if n*hbar*k_r exceeds p_max.
double bragg_pulse_time(int order, double omega, double r_max,
                        const RecoilFrame& frame);

/// Local acceleration omega^2 |x(t)| along that trajectory (m/s^2).
double local_acceleration(double omega, double r_max, double t);

}  // namespace mws

#endif
