#ifndef MWS_RECOIL_FRAME_HPP
#define MWS_RECOIL_FRAME_HPP

#include "mws/constants.hpp"

namespace mws {

/// Natural scales of an atom in a retroreflected standing wave of
/// wavelength lambda: k_r = 2*pi/lambda, E_r = hbar^2 k_r^2 / (2 m).
/// Everything downstream computes in these units (energy in E_r, momentum
/// in hbar*k_r, length in 1/k_r, time in t_r = hbar/E_r); SI shows up only
/// at configuration and output boundaries.
///
/// Note v_r = hbar*k_r/m is the two-photon recoil velocity, so
/// v_r * t_r * k_r = 2 exactly (not 1): E_r is *half* of hbar*k_r*v_r.
struct RecoilFrame {
  double wavelength;  // m
  double mass;        // kg
  double k_r;         // 1/m
  double E_r;         // J
  double v_r;         // m/s
  double t_r;         // s
  double a_r;         // m/s^2, = v_r / t_r
};

/// Builds a frame from wavelength and mass. Throws DomainError on
/// non-positive input.
RecoilFrame make_recoil_frame(double wavelength, double atom_mass);

/// Frame for Rb-87 in the 914 nm lattice.
RecoilFrame default_frame();

enum class Quantity { Length, Time, Velocity, Acceleration, Energy };

/// SI value -> dimensionless recoil value (length in 1/k_r, time in t_r,
/// velocity in v_r, acceleration in a_r, energy in E_r).
double to_recoil(double si_value, Quantity kind, const RecoilFrame& frame);
double from_recoil(double value, Quantity kind, const RecoilFrame& frame);

}  // namespace mws

#endif
