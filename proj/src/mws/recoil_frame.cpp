#include "mws/recoil_frame.hpp"

#include <cmath>

#include "mws/errors.hpp"

namespace mws {

RecoilFrame make_recoil_frame(double wavelength, double atom_mass) {
  if (!(wavelength > 0.0)) throw DomainError("wavelength must be > 0");
  if (!(atom_mass > 0.0)) throw DomainError("atom mass must be > 0");

  RecoilFrame f;
  f.wavelength = wavelength;
  f.mass = atom_mass;
  f.k_r = 2.0 * M_PI / wavelength;
  f.E_r = constants::hbar * constants::hbar * f.k_r * f.k_r / (2.0 * atom_mass);
  f.v_r = constants::hbar * f.k_r / atom_mass;
  f.t_r = constants::hbar / f.E_r;
  f.a_r = f.v_r / f.t_r;
  return f;
}

RecoilFrame default_frame() {
  return make_recoil_frame(constants::default_wavelength, constants::rb87_mass);
}

namespace {

double unit_of(Quantity kind, const RecoilFrame& frame) {
  switch (kind) {
    case Quantity::Length:
      return 1.0 / frame.k_r;
    case Quantity::Time:
      return frame.t_r;
    case Quantity::Velocity:
      return frame.v_r;
    case Quantity::Acceleration:
      return frame.a_r;
    case Quantity::Energy:
      return frame.E_r;
  }
  throw DomainError("unknown quantity kind");
}

}  // namespace

double to_recoil(double si_value, Quantity kind, const RecoilFrame& frame) {
  return si_value / unit_of(kind, frame);
}

double from_recoil(double value, Quantity kind, const RecoilFrame& frame) {
  return value * unit_of(kind, frame);
}

}  // namespace mws
