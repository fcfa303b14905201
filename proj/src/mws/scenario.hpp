#ifndef MWS_SCENARIO_HPP
#define MWS_SCENARIO_HPP

#include <string>
#include <vector>

#include "mws/recoil_frame.hpp"
#include "mws/schedule.hpp"

namespace mws {

struct TrapConfig {
  bool present = false;
  double frequency = 0.0;  // Hz
  double center = 0.0;     // m, center at t = 0 (events may displace it)
};

/// Initial condensate state. Gaussian: free Gaussian of width sigma with a
/// velocity kick. Bloch: Gaussian envelope times the Bloch wave |band, q>
/// of the lattice depth at t = 0 (for crossing experiments).
struct InitialState {
  enum class Kind { Gaussian, Bloch };
  Kind kind = Kind::Gaussian;
  double position = 0.0;  // m
  double velocity = 0.0;  // m/s
  double sigma = 0.0;     // m; 0 means "ground-state width of the trap"
  int band = 0;           // Bloch only
  double q = 0.0;         // Bloch only, hbar*k_r
};

struct GridConfig {
  double x_min = -1.5e-3;  // m
  double x_max = 1.5e-3;   // m
  int n_points = 32768;    // power of two
};

struct OutputConfig {
  double density_stride = 0.0;   // s; 0 disables the density dump
  double momentum_stride = 0.0;  // s; 0 disables the momentum dump
  std::vector<double> snapshots;  // extra momentum snapshots (s)
  double tof = 0.0;              // free expansion after t_end (s)
};

/// Declarative experiment description: frame, environment, initial state,
/// depth schedule and solver/output parameters. Immutable value once
/// validated; the runner never mutates it.
struct Scenario {
  std::string name = "scenario";

  double wavelength = constants::default_wavelength;  // m
  double mass = constants::rb87_mass;                 // kg
  bool gravity = false;
  TrapConfig trap;
  InitialState initial;
  DepthSchedule schedule;

  double t_end = 0.0;  // s
  GridConfig grid;
  double dt = 0.0;    // s; 0 means 0.01 t_r
  double g1d = 0.0;   // scalar 1D nonlinearity, recoil units (E_r / k_r)

  OutputConfig outputs;

  // Event-model knobs.
  bool merge_packets = true;
  double unbound_threshold = 0.99;

  // Wave-engine knob: start integration at the first lattice segment,
  // transporting the initial Gaussian analytically through the preceding
  // purely harmonic/ballistic stretch.
  bool fast_forward = false;

  // Non-empty turns the run into a tunneling-probability scan: one
  // single-crossing experiment per depth (both engines).
  std::vector<double> scan_depths;

  RecoilFrame frame() const { return make_recoil_frame(wavelength, mass); }
  double solver_dt() const { return dt > 0.0 ? dt : 0.01 * frame().t_r; }
  double initial_sigma() const;

  /// Throws ValidationError listing every problem found.
  void validate() const;
};

}  // namespace mws

#endif
