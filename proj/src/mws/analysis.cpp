#include "mws/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "mws/bands.hpp"
#include "mws/errors.hpp"
#include "mws/propagator.hpp"

namespace mws {

PacketSet detect_packets(const std::vector<double>& density,
                         const std::vector<double>& axis_values, Axis axis,
                         double threshold_frac, double min_separation) {
  if (density.size() != axis_values.size())
    throw DomainError("density and axis arrays differ in length");
  if (!(threshold_frac > 0.0 && threshold_frac < 1.0))
    throw DomainError("threshold_frac must lie in (0, 1)");
  for (double d : density)
    if (d < 0.0) throw DomainError("density must be non-negative");

  PacketSet ps;
  ps.axis = axis;
  if (density.empty()) return ps;

  const double peak = *std::max_element(density.begin(), density.end());
  if (peak <= 0.0) return ps;
  const double threshold = threshold_frac * peak;
  const double total = std::accumulate(density.begin(), density.end(), 0.0);

  // contiguous super-threshold runs
  struct Run {
    std::size_t lo, hi;  // inclusive
  };
  std::vector<Run> runs;
  for (std::size_t i = 0; i < density.size(); ++i) {
    if (density[i] < threshold) continue;
    if (!runs.empty() && runs.back().hi + 1 == i &&
        density[i - 1] >= threshold) {
      runs.back().hi = i;
    } else {
      runs.push_back({i, i});
    }
  }
  // bridge gaps narrower than min_separation
  std::vector<Run> merged;
  for (const auto& r : runs) {
    if (!merged.empty() &&
        axis_values[r.lo] - axis_values[merged.back().hi] < min_separation) {
      merged.back().hi = r.hi;
    } else {
      merged.push_back(r);
    }
  }

  for (const auto& r : merged) {
    Packet pk;
    double w = 0.0, m1 = 0.0;
    for (std::size_t i = r.lo; i <= r.hi; ++i) {
      w += density[i];
      m1 += density[i] * axis_values[i];
    }
    if (w <= 0.0) continue;
    pk.centroid = m1 / w;
    double m2 = 0.0;
    for (std::size_t i = r.lo; i <= r.hi; ++i)
      m2 += density[i] * (axis_values[i] - pk.centroid) *
            (axis_values[i] - pk.centroid);
    pk.width = std::sqrt(m2 / w);
    pk.population = w / total;
    ps.packets.push_back(pk);
  }
  std::sort(ps.packets.begin(), ps.packets.end(),
            [](const Packet& a, const Packet& b) {
              return a.centroid < b.centroid;
            });
  for (std::size_t i = 0; i < ps.packets.size(); ++i)
    ps.packets[i].label = "packet_" + std::to_string(i);
  ps.total = 0.0;
  for (const auto& p : ps.packets) ps.total += p.population;
  return ps;
}

PacketSet detect_packets(const Wavefunction& wf, double threshold_frac,
                         double min_separation) {
  std::vector<double> density(wf.n()), axis(wf.n());
  for (int i = 0; i < wf.n(); ++i) {
    density[i] = std::norm(wf.psi[i]);
    axis[i] = wf.x(i) / wf.frame.k_r;  // meters
  }
  return detect_packets(density, axis, Axis::Position, threshold_frac,
                        min_separation);
}

double uniformity(const PacketSet& ps) {
  if (ps.packets.empty()) throw DomainError("uniformity of an empty set");
  double mean = 0.0;
  for (const auto& p : ps.packets) mean += p.population;
  mean /= ps.packets.size();
  if (mean <= 0.0) throw DomainError("uniformity with zero mean population");
  double var = 0.0;
  for (const auto& p : ps.packets)
    var += (p.population - mean) * (p.population - mean);
  var /= ps.packets.size();
  return std::sqrt(var) / mean;
}

MomentumDistribution momentum_distribution(const Wavefunction& wf) {
  const int n = wf.n();
  SpectralEngine eng(n);
  eng.load(wf.psi);
  eng.forward();

  MomentumDistribution md;
  md.dp = 2.0 * M_PI / (wf.x_max - wf.x_min);
  md.p.resize(n);
  md.density.resize(n);
  // Parseval with unnormalized FFT: sum |a_j|^2 = n sum |psi_i|^2, so
  // |a_j|^2 dx/n integrates (over dp) to the position-space norm.
  const double scale = wf.dx() / (n * md.dp);
  std::vector<std::size_t> idx(n);
  for (int j = 0; j < n; ++j) idx[j] = j;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return wf.p(static_cast<int>(a)) < wf.p(static_cast<int>(b));
  });
  for (int k = 0; k < n; ++k) {
    md.p[k] = wf.p(static_cast<int>(idx[k]));
    md.density[k] = std::norm(eng.data()[idx[k]]) * scale;
  }
  return md;
}

std::vector<double> band_populations(const Wavefunction& wf, double depth,
                                     int n_bands) {
  if (n_bands < 1) throw DomainError("need at least one band");
  const int L = std::max(kDefaultTruncation, n_bands + 5);
  if (n_bands > 2 * L) throw DomainError("n_bands exceeds computed bands");
  const int n = wf.n();

  SpectralEngine eng(n);
  eng.load(wf.psi);
  eng.forward();
  const std::complex<double>* a = eng.data();
  const double dp = 2.0 * M_PI / (wf.x_max - wf.x_min);

  // Momentum classes: p = q + 2l with q in [-1, 1). Bins are grouped by
  // their FFT index modulo bins-per-zone, which is exact when the grid
  // length is a multiple of pi (half the lattice period); incommensurate
  // grids get nearest-bin folding within each class.
  const int bins_per_zone =
      std::max(1, static_cast<int>(std::lround(2.0 / dp)));
  struct ClassData {
    std::vector<std::complex<double>> amp;  // index l + L
    double q = 0.0;
    double weight = 0.0;
  };
  std::vector<ClassData> classes(bins_per_zone);
  for (int m = 0; m < bins_per_zone; ++m) {
    classes[m].amp.assign(2 * L + 1, {0.0, 0.0});
    double q = m * dp;
    if (q >= 1.0) q -= 2.0;
    classes[m].q = q;
  }

  for (int j = 0; j < n; ++j) {
    const int k = j <= n / 2 ? j : j - n;
    const double p = wf.p(j);
    int m = k % bins_per_zone;
    if (m < 0) m += bins_per_zone;
    const int l =
        static_cast<int>(std::lround((p - classes[m].q) / 2.0));
    if (std::abs(l) > L) continue;  // beyond the plane-wave basis
    // undo the grid-origin phase so relative plane-wave phases are the
    // ones the Bloch eigenvectors are written in
    classes[m].amp[l + L] += a[j] * std::polar(1.0, -p * wf.x_min);
    classes[m].weight += std::norm(a[j]);
  }

  const double scale = wf.dx() / n;  // |a|^2 * scale integrates to the norm
  std::vector<double> pops(n_bands, 0.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  const int dim = 2 * L + 1;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (int cls = 0; cls < bins_per_zone; ++cls) {
    const auto& cd = classes[cls];
    if (cd.weight * scale < 1e-16) continue;
    const double q = cd.q;
    h.setZero();
    for (int i = 0; i < dim; ++i) {
      const double k = q + 2.0 * (i - L);
      h(i, i) = k * k + 0.5 * depth;
      if (i + 1 < dim) {
        h(i, i + 1) = -0.25 * depth;
        h(i + 1, i) = -0.25 * depth;
      }
    }
    solver.compute(h);
    for (int b = 0; b < n_bands; ++b) {
      std::complex<double> ov = 0.0;
      for (int i = 0; i < dim; ++i)
        ov += solver.eigenvectors()(i, b) * cd.amp[i];
      pops[b] += std::norm(ov) * scale;
    }
  }
  return pops;
}

void write_packet_csv(const PacketSet& ps, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << "packet_id,axis,centroid,width,population\n";
  char buf[160];
  const char* axis = ps.axis == Axis::Position ? "position" : "momentum";
  for (std::size_t i = 0; i < ps.packets.size(); ++i) {
    const auto& p = ps.packets[i];
    std::snprintf(buf, sizeof(buf), "%zu,%s,%.12g,%.12g,%.12g\n", i, axis,
                  p.centroid, p.width, p.population);
    out << buf;
  }
  if (!out) throw IoError("write failed for " + path);
}

std::string packet_summary(const PacketSet& ps) {
  char buf[160];
  std::string s;
  std::snprintf(buf, sizeof(buf), "packets: %zu\n", ps.packets.size());
  s += buf;
  for (std::size_t i = 0; i < ps.packets.size(); ++i) {
    const auto& p = ps.packets[i];
    std::snprintf(buf, sizeof(buf),
                  "  %zu: centroid %.6g width %.4g population %.6g\n", i,
                  p.centroid, p.width, p.population);
    s += buf;
  }
  if (!ps.packets.empty()) {
    std::snprintf(buf, sizeof(buf), "uniformity: %.6g\n",
                  uniformity(ps));
    s += buf;
  }
  return s;
}

}  // namespace mws
