#ifndef MWS_BANDS_HPP
#define MWS_BANDS_HPP

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace mws {

// Lattice potential convention used throughout: V(x) = V0 sin^2(k_r x),
// i.e. period lambda/2, Fourier component V0/4 and a constant offset V0/2.
// With this convention the shallow-lattice gap is Delta_1 -> V0/2 and the
// depths quoted in E_r match standard calibrations. Quasi-momentum q is in
// units of hbar*k_r, energies in E_r; the plane-wave Hamiltonian is
// tridiagonal: H_ll = (q + 2l)^2 + V0/2, H_{l,l+1} = -V0/4.

inline constexpr int kDefaultTruncation = 12;  // 2L+1 = 25 plane waves
inline constexpr int kDefaultQPoints = 257;

/// Band energies E_n(q) of the 1D lattice at one depth. Immutable after
/// construction; eigenvalues are sorted per q.
struct BandStructure {
  double depth = 0.0;           // E_r
  std::vector<double> q_grid;   // in [-1, 1], units hbar*k_r
  Eigen::MatrixXd energies;     // (n_bands x nq), E_r
  int truncation = kDefaultTruncation;

  int n_bands() const { return static_cast<int>(energies.rows()); }
};

std::vector<double> default_q_grid(int n_points = kDefaultQPoints);

/// Diagonalizes the plane-wave Hamiltonian over the q grid.
/// When verify_truncation is set, the result is cross-checked against a
/// run at L+4 and an AccuracyError is thrown if any requested band moves
/// by more than 1e-8 E_r.
BandStructure compute_bands(double depth, int n_bands,
                            std::vector<double> q_grid = default_q_grid(),
                            int truncation = kDefaultTruncation,
                            bool verify_truncation = true);

/// Band gap Delta_n = E_n - E_{n-1} evaluated at the reduced-zone image of
/// the extended-zone quasi-momentum n*hbar*k_r (zone edge q = 1 for odd n,
/// zone center q = 0 for even n). The grid must contain that location.
double band_gap(const BandStructure& bs, int n);

/// Gap Delta_n at the given depth without building a full BandStructure
/// (single-q diagonalization; used by the schedule root finder and the
/// cascade engine).
double band_gap_at(double depth, int n, int truncation = kDefaultTruncation);

/// Plane-wave coefficients c_l (l = -L..L) of the Bloch state |n, q>.
/// Phase fixed so that the largest-magnitude coefficient is real positive.
Eigen::VectorXd bloch_coefficients(double depth, double q, int band,
                                   int truncation = kDefaultTruncation);

/// Writes "q,E_0,...,E_{n-1}" rows, one per grid point, units E_r.
void write_band_csv(const BandStructure& bs, const std::string& path);

}  // namespace mws

#endif
