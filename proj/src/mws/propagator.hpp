#ifndef MWS_PROPAGATOR_HPP
#define MWS_PROPAGATOR_HPP

#include <complex>
#include <functional>
#include <vector>

#include "mws/potential.hpp"
#include "mws/wavefunction.hpp"

namespace mws {

/// In-place FFT pair on an aligned internal buffer (FFTW backend). One
/// engine per grid size; construction is serialized internally (the FFTW
/// planner is not thread-safe), execution is concurrency-safe across
/// distinct engines.
class SpectralEngine {
 public:
  explicit SpectralEngine(int n);
  ~SpectralEngine();
  SpectralEngine(const SpectralEngine&) = delete;
  SpectralEngine& operator=(const SpectralEngine&) = delete;

  int size() const { return n_; }
  std::complex<double>* data() { return buf_; }
  void load(const std::vector<std::complex<double>>& src);
  void store(std::vector<std::complex<double>>& dst) const;
  void forward();   // unnormalized
  void backward();  // unnormalized

 private:
  int n_;
  std::complex<double>* buf_;
  void* plan_fwd_;
  void* plan_bwd_;
};

/// Second-order Strang splitting for
///   i d(psi)/dt = [p^2 + V(x, t) + g1d |psi|^2] psi   (recoil units):
/// half potential kick at the step midpoint time, full spectral kinetic
/// step, half kick. Unitary for g1d-independent kicks; norm is conserved
/// to rounding.
class SplitStepPropagator {
 public:
  SplitStepPropagator(const PotentialProgram& program, int n_points);

  /// Advances wf from wf.time to t_end_si with step dt_si (a shorter final
  /// step absorbs the remainder). Runs the boundary-density check every
  /// check_stride steps and throws AccuracyError naming the breach time if
  /// more than 1e-8 of the peak density reaches the outer grid cells.
  /// The observer, when set, is called after every step.
  void evolve(Wavefunction& wf, double dt_si, double t_end_si,
              const std::function<void(const Wavefunction&)>& observer = {});

  /// Total energy <H> in E_r at the wavefunction's current time.
  double energy(const Wavefunction& wf);

  /// Imaginary-time relaxation to the interacting ground state; psi is
  /// renormalized every step, stopping when the energy change per step
  /// drops below tol (E_r).
  void relax_to_ground_state(Wavefunction& wf, double dt_si,
                             double tol = 1e-12, int max_steps = 200000);

 private:
  void apply_kick(std::complex<double>* a, const Wavefunction& wf,
                  const PotentialProgram::Snapshot& snap, double half_dt_rec);
  void check_boundary(const Wavefunction& wf,
                      const std::complex<double>* a) const;
  void check_spectrum(const Wavefunction& wf,
                      const std::complex<double>* a) const;

  const PotentialProgram* program_;
  SpectralEngine engine_;
  std::vector<double> kinetic_;  // p^2 per FFT bin, recoil
  std::vector<std::complex<double>> kin_phase_;
  std::vector<std::complex<double>> kick_;  // cached half-step kick factors
  PotentialProgram::Snapshot kick_snap_;
  double kick_dt_ = 0.0;
  bool kick_valid_ = false;
};

/// Ground state of the potential at t = 0 on the given grid. For g1d = 0
/// this is the analytic oscillator Gaussian (gravity sag included); for
/// g1d > 0 imaginary-time relaxation refines it. Throws DomainError when
/// no trap confines the atom at t = 0.
Wavefunction ground_state(const PotentialProgram& program, double x_min_si,
                          double x_max_si, int n_points, double dt_si = 0.0);

/// Gaussian envelope times the Bloch wave |band, q> of a lattice of the
/// given depth: a band-resolved wavepacket for crossing experiments.
Wavefunction bloch_wavepacket(const RecoilFrame& frame, double x_min_si,
                              double x_max_si, int n_points, double x0_si,
                              double envelope_sigma_si, double depth,
                              int band, double q);

/// Exact free flight (optionally under gravity) for a time t_tof: one
/// analytically exact kick-drift-kick in momentum space. If the expanded
/// cloud would leave the grid, the grid is enlarged by zero padding
/// (doubling, same spacing) up to 2^22 points before propagating.
Wavefunction free_expand(const Wavefunction& wf, double t_tof_si,
                         bool gravity);

}  // namespace mws

#endif
