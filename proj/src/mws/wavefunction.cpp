#include "mws/wavefunction.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "mws/errors.hpp"

namespace mws {

namespace {

bool is_pow2(int n) { return n >= 2 && (n & (n - 1)) == 0; }

}  // namespace

double Wavefunction::norm() const {
  double s = 0.0;
  for (const auto& a : psi) s += std::norm(a);
  return s * dx();
}

double Wavefunction::centroid() const {
  double s = 0.0, w = 0.0;
  for (int i = 0; i < n(); ++i) {
    const double d = std::norm(psi[i]);
    s += d * x(i);
    w += d;
  }
  return w > 0.0 ? s / w : 0.0;
}

double Wavefunction::variance() const {
  const double c = centroid();
  double s = 0.0, w = 0.0;
  for (int i = 0; i < n(); ++i) {
    const double d = std::norm(psi[i]);
    s += d * (x(i) - c) * (x(i) - c);
    w += d;
  }
  return w > 0.0 ? s / w : 0.0;
}

void Wavefunction::normalize() {
  const double nn = norm();
  if (nn <= 0.0) throw DomainError("cannot normalize a zero wavefunction");
  const double s = 1.0 / std::sqrt(nn);
  for (auto& a : psi) a *= s;
}

void Wavefunction::kick(double p_rec) {
  for (int i = 0; i < n(); ++i)
    psi[i] *= std::polar(1.0, p_rec * x(i));
}

Wavefunction make_wavefunction(const RecoilFrame& frame, double x_min_si,
                               double x_max_si, int n_points) {
  if (!(x_max_si > x_min_si)) throw DomainError("x_max must exceed x_min");
  if (!is_pow2(n_points))
    throw DomainError("n_points must be a power of two >= 2");
  Wavefunction wf;
  wf.frame = frame;
  wf.x_min = x_min_si * frame.k_r;
  wf.x_max = x_max_si * frame.k_r;
  wf.psi.assign(n_points, {0.0, 0.0});
  return wf;
}

Wavefunction gaussian_state(const RecoilFrame& frame, double x_min_si,
                            double x_max_si, int n_points, double x0_si,
                            double a_si, double v0_si) {
  if (!(a_si > 0.0)) throw DomainError("gaussian width must be > 0");
  Wavefunction wf = make_wavefunction(frame, x_min_si, x_max_si, n_points);
  const double x0 = x0_si * frame.k_r;
  const double a = a_si * frame.k_r;
  const double p0 = frame.mass * v0_si / (constants::hbar * frame.k_r);
  for (int i = 0; i < wf.n(); ++i) {
    const double u = (wf.x(i) - x0) / a;
    wf.psi[i] = std::polar(std::exp(-0.5 * u * u), p0 * (wf.x(i) - x0));
  }
  wf.normalize();
  return wf;
}

void save_checkpoint(const Wavefunction& wf, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  const char magic[8] = {'M', 'W', 'S', 'W', 'A', 'V', '1', '\0'};
  out.write(magic, 8);
  const std::uint64_t n = static_cast<std::uint64_t>(wf.n());
  out.write(reinterpret_cast<const char*>(&n), 8);
  const double header[5] = {wf.frame.wavelength, wf.frame.mass, wf.x_min,
                            wf.x_max, wf.time};
  out.write(reinterpret_cast<const char*>(header), sizeof(header));
  out.write(reinterpret_cast<const char*>(wf.psi.data()),
            static_cast<std::streamsize>(wf.psi.size() * 16));
  if (!out) throw IoError("write failed for " + path);
}

Wavefunction load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, "MWSWAV1\0", 8) != 0)
    throw IoError(path + ": not a wavefunction checkpoint");
  std::uint64_t n = 0;
  in.read(reinterpret_cast<char*>(&n), 8);
  double header[5];
  in.read(reinterpret_cast<char*>(header), sizeof(header));
  if (!in || n == 0 || n > (1u << 26))
    throw IoError(path + ": corrupt checkpoint header");

  Wavefunction wf;
  wf.frame = make_recoil_frame(header[0], header[1]);
  wf.x_min = header[2];
  wf.x_max = header[3];
  wf.time = header[4];
  wf.psi.resize(n);
  in.read(reinterpret_cast<char*>(wf.psi.data()),
          static_cast<std::streamsize>(n * 16));
  if (!in) throw IoError(path + ": truncated checkpoint payload");
  return wf;
}

}  // namespace mws
