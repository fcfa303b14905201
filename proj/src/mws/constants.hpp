#ifndef MWS_CONSTANTS_HPP
#define MWS_CONSTANTS_HPP

namespace mws::constants {

// CODATA 2018 exact values.
inline constexpr double hbar = 1.054571817e-34;  // J s
inline constexpr double h_planck = 6.62607015e-34;  // J s

// Default experiment parameters: Rb-87 in a 914 nm standing wave.
inline constexpr double rb87_mass = 1.44316060e-25;  // kg
inline constexpr double default_wavelength = 914e-9;  // m
inline constexpr double gravity = 9.81;  // m/s^2

}  // namespace mws::constants

#endif
