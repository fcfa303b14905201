#include "mws/landau_zener.hpp"

#include <cmath>
#include <string>

#include "mws/bands.hpp"
#include "mws/errors.hpp"

namespace mws {

double critical_acceleration(double gap_er, int n, const RecoilFrame& frame) {
  if (gap_er < 0.0) throw DomainError("band gap must be >= 0");
  if (n < 1) throw DomainError("crossing order n must be >= 1");
  const double gap_j = gap_er * frame.E_r;
  return M_PI * gap_j * gap_j /
         (4.0 * n * frame.k_r * constants::hbar * constants::hbar);
}

double tunneling_probability(double gap_er, int n, double accel,
                             const RecoilFrame& frame) {
  if (!(accel > 0.0)) throw DomainError("acceleration must be > 0");
  return std::exp(-critical_acceleration(gap_er, n, frame) / accel);
}

double bloch_period(double accel, const RecoilFrame& frame) {
  if (!(accel > 0.0)) throw DomainError("acceleration must be > 0");
  return 2.0 * constants::hbar * frame.k_r / (frame.mass * accel);
}

LZContext make_lz_context(double gap_er, int band_index, double accel,
                          const RecoilFrame& frame) {
  LZContext ctx;
  ctx.frame = frame;
  ctx.acceleration = accel;
  ctx.band_index = band_index;
  ctx.gap = gap_er;
  ctx.critical_accel = critical_acceleration(gap_er, band_index, frame);
  ctx.probability = tunneling_probability(gap_er, band_index, accel, frame);
  return ctx;
}

std::vector<double> equal_split_probabilities(int m) {
  if (m < 1) throw DomainError("packet count m must be >= 1");
  std::vector<double> p;
  p.reserve(m - 1);
  for (int k = m; k >= 2; --k) p.push_back(1.0 / k);
  return p;
}

std::vector<double> fractions_to_probabilities(
    const std::vector<double>& fractions) {
  if (fractions.empty()) throw DomainError("fraction list is empty");
  double sum = 0.0;
  for (double f : fractions) {
    if (!(f > 0.0)) throw DomainError("fractions must be > 0");
    sum += f;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw DomainError("fractions must sum to 1 (got " + std::to_string(sum) +
                      ")");

  std::vector<double> p;
  p.reserve(fractions.size() - 1);
  double remaining = 1.0;
  for (std::size_t i = 0; i + 1 < fractions.size(); ++i) {
    p.push_back(fractions[i] / remaining);
    remaining -= fractions[i];
  }
  return p;
}

double depth_for_probability(double p_target, int n, double accel,
                             const RecoilFrame& frame, double depth_max) {
  if (!(p_target > 0.0 && p_target < 1.0))
    throw DomainError("target probability must lie in (0, 1)");
  if (!(accel > 0.0)) throw DomainError("acceleration must be > 0");
  if (n < 1) throw DomainError("crossing order n must be >= 1");

  // Target gap from inverting the exponent; then solve the monotone
  // gap(depth) = gap_target.
  const double exponent = -std::log(p_target);
  const double gap_target_j =
      std::sqrt(exponent * 4.0 * n * frame.k_r * accel * constants::hbar *
                constants::hbar / M_PI);
  const double gap_target = gap_target_j / frame.E_r;

  if (band_gap_at(depth_max, n) < gap_target)
    throw RangeError("probability " + std::to_string(p_target) +
                     " not achievable for n=" + std::to_string(n) +
                     " with depth <= " + std::to_string(depth_max) + " E_r");

  double lo = 0.0, hi = depth_max;
  for (int iter = 0; iter < 200 && (hi - lo) > 1e-12 * depth_max; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (band_gap_at(mid, n) < gap_target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double bragg_pulse_time(int order, double omega, double r_max,
                        const RecoilFrame& frame) {
  if (order < 1) throw DomainError("Bragg order must be >= 1");
  if (!(omega > 0.0) || !(r_max > 0.0))
    throw DomainError("trap frequency and amplitude must be > 0");
  const double p_max = frame.mass * omega * r_max;
  const double p_n = order * constants::hbar * frame.k_r;
  if (p_n > p_max)
    throw RangeError("order " + std::to_string(order) +
                     " unreachable: n*hbar*k_r exceeds p_max = m*omega*r_max");
  return (M_PI - std::asin(p_n / p_max)) / omega;
}

double local_acceleration(double omega, double r_max, double t) {
  if (!(omega > 0.0) || !(r_max > 0.0))
    throw DomainError("trap frequency and amplitude must be > 0");
  return omega * omega * std::abs(r_max * std::cos(omega * t));
}

}  // namespace mws
