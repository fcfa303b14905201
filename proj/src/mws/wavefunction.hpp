#ifndef MWS_WAVEFUNCTION_HPP
#define MWS_WAVEFUNCTION_HPP

#include <complex>
#include <string>
#include <vector>

#include "mws/recoil_frame.hpp"

namespace mws {

/// Complex amplitude on a uniform 1D grid. Internally everything is in
/// recoil units: positions in 1/k_r, momenta in hbar*k_r, time in
/// t_r = hbar/E_r; the frame converts at the boundaries. n_points is a
/// power of two (spectral steps).
struct Wavefunction {
  RecoilFrame frame;
  double x_min = 0.0;  // 1/k_r
  double x_max = 0.0;  // 1/k_r
  std::vector<std::complex<double>> psi;
  double time = 0.0;  // t_r

  int n() const { return static_cast<int>(psi.size()); }
  double dx() const { return (x_max - x_min) / n(); }
  double x(int i) const { return x_min + i * dx(); }
  /// FFT-ordered momentum of bin j, in hbar*k_r.
  double p(int j) const {
    const double dp = 2.0 * M_PI / (x_max - x_min);
    const int nn = n();
    return dp * (j <= nn / 2 ? j : j - nn);
  }

  double norm() const;          // integral of |psi|^2 dx
  double centroid() const;      // <x>, 1/k_r
  double variance() const;      // <(x - <x>)^2>
  double time_si() const { return time * frame.t_r; }

  void normalize();
  void kick(double p_rec);  // multiply by exp(i p x): momentum boost
};

/// Uniform grid from SI bounds (meters); n_points must be a power of two.
Wavefunction make_wavefunction(const RecoilFrame& frame, double x_min_si,
                               double x_max_si, int n_points);

/// Normalized Gaussian exp(-(x-x0)^2/(2 a^2)) * exp(i p0 (x-x0)) with the
/// wavefunction width a; all arguments SI except none: x0/a in meters,
/// v0 in m/s.
Wavefunction gaussian_state(const RecoilFrame& frame, double x_min_si,
                            double x_max_si, int n_points, double x0_si,
                            double a_si, double v0_si);

// Binary checkpoint, little-endian:
//   bytes 0..7    magic "MWSWAV1\0"
//   bytes 8..15   uint64 n_points
//   bytes 16..55  doubles: wavelength (m), mass (kg), x_min (1/k_r),
//                 x_max (1/k_r), time (t_r)
//   then n_points interleaved (re, im) doubles.
void save_checkpoint(const Wavefunction& wf, const std::string& path);
Wavefunction load_checkpoint(const std::string& path);

}  // namespace mws

#endif
