#include "mws/bands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "mws/errors.hpp"

namespace mws {

namespace {

Eigen::MatrixXd plane_wave_hamiltonian(double depth, double q, int L) {
  const int dim = 2 * L + 1;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) {
    const double l = static_cast<double>(i - L);
    const double k = q + 2.0 * l;
    h(i, i) = k * k + 0.5 * depth;
    if (i + 1 < dim) {
      h(i, i + 1) = -0.25 * depth;
      h(i + 1, i) = -0.25 * depth;
    }
  }
  return h;
}

Eigen::MatrixXd energies_on_grid(double depth, int n_bands,
                                 const std::vector<double>& q_grid, int L) {
  Eigen::MatrixXd e(n_bands, q_grid.size());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  for (std::size_t iq = 0; iq < q_grid.size(); ++iq) {
    solver.compute(plane_wave_hamiltonian(depth, q_grid[iq], L),
                   Eigen::EigenvaluesOnly);
    e.col(iq) = solver.eigenvalues().head(n_bands);
  }
  return e;
}

}  // namespace

std::vector<double> default_q_grid(int n_points) {
  if (n_points < 2) throw DomainError("q grid needs at least 2 points");
  std::vector<double> q(n_points);
  for (int i = 0; i < n_points; ++i)
    q[i] = -1.0 + 2.0 * static_cast<double>(i) / (n_points - 1);
  return q;
}

BandStructure compute_bands(double depth, int n_bands,
                            std::vector<double> q_grid, int truncation,
                            bool verify_truncation) {
  if (!(depth >= 0.0)) throw DomainError("lattice depth must be >= 0");
  if (n_bands < 1) throw DomainError("need at least one band");
  if (truncation < n_bands + 4)
    throw DomainError("truncation L must be >= n_bands + 4");
  if (q_grid.empty()) throw DomainError("empty q grid");
  for (double q : q_grid)
    if (!(q >= -1.0 && q <= 1.0))
      throw DomainError("q grid must lie within [-1, 1]");

  BandStructure bs;
  bs.depth = depth;
  bs.q_grid = std::move(q_grid);
  bs.truncation = truncation;
  bs.energies = energies_on_grid(depth, n_bands, bs.q_grid, truncation);

  if (verify_truncation) {
    const Eigen::MatrixXd refined =
        energies_on_grid(depth, n_bands, bs.q_grid, truncation + 4);
    const double err = (bs.energies - refined).cwiseAbs().maxCoeff();
    if (err > 1e-8) {
      char msg[128];
      std::snprintf(msg, sizeof(msg),
                    "truncation L=%d insufficient: top-band shift %.3e E_r "
                    "against L=%d",
                    truncation, err, truncation + 4);
      throw AccuracyError(msg);
    }
  }
  return bs;
}

double band_gap(const BandStructure& bs, int n) {
  if (n < 1 || n >= bs.n_bands())
    throw DomainError("band index n must satisfy 1 <= n < n_bands");
  const double q_loc = (n % 2 == 1) ? 1.0 : 0.0;
  for (std::size_t iq = 0; iq < bs.q_grid.size(); ++iq) {
    if (std::abs(std::abs(bs.q_grid[iq]) - q_loc) < 1e-12)
      return bs.energies(n, iq) - bs.energies(n - 1, iq);
  }
  throw DomainError("gap location q = " + std::to_string(q_loc) +
                    " absent from q grid");
}

double band_gap_at(double depth, int n, int truncation) {
  if (!(depth >= 0.0)) throw DomainError("lattice depth must be >= 0");
  if (n < 1) throw DomainError("band index n must be >= 1");
  const int L = std::max(truncation, n + 5);
  const double q_loc = (n % 2 == 1) ? 1.0 : 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.compute(plane_wave_hamiltonian(depth, q_loc, L),
                 Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(n) - solver.eigenvalues()(n - 1);
}

Eigen::VectorXd bloch_coefficients(double depth, double q, int band,
                                   int truncation) {
  if (band < 0) throw DomainError("band index must be >= 0");
  const int L = std::max(truncation, band + 5);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.compute(plane_wave_hamiltonian(depth, q, L));
  Eigen::VectorXd c = solver.eigenvectors().col(band);
  int imax = 0;
  c.cwiseAbs().maxCoeff(&imax);
  if (c(imax) < 0.0) c = -c;
  return c;
}

void write_band_csv(const BandStructure& bs, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << "q";
  for (int n = 0; n < bs.n_bands(); ++n) out << ",E_" << n;
  out << "\n";
  char buf[32];
  for (std::size_t iq = 0; iq < bs.q_grid.size(); ++iq) {
    std::snprintf(buf, sizeof(buf), "%.12g", bs.q_grid[iq]);
    out << buf;
    for (int n = 0; n < bs.n_bands(); ++n) {
      std::snprintf(buf, sizeof(buf), "%.12g", bs.energies(n, iq));
      out << ',' << buf;
    }
    out << "\n";
  }
  if (!out) throw IoError("write failed for " + path);
}

}  // namespace mws
