#pragma once

#include <cmath>
#include <cstdint>

namespace qpv {

inline constexpr double kZ95 = 1.959963984540054;
inline constexpr double kZ99 = 2.5758293035489004;

/// Point estimate with an interval.
struct Estimate {
  double value = 0.0;
  double lower = 0.0;
  double upper = 1.0;
  std::uint64_t successes = 0;
  std::uint64_t trials = 0;

  bool contains(double x) const noexcept { return lower <= x && x <= upper; }
};

/// Wilson score interval for k successes in n trials. n = 0 gives [0, 1].
inline Estimate wilson_interval(std::uint64_t k, std::uint64_t n, double z = kZ95) {
  if (n == 0) return {0.0, 0.0, 1.0, 0, 0};
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(k) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double center = (p + z2 / (2.0 * nn)) / denom;
  const double half = z / denom * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn));
  return {p, std::max(0.0, center - half), std::min(1.0, center + half), k, n};
}

/// Binomial standard deviation of a proportion estimate.
inline double binomial_sigma(double p, std::uint64_t n) {
  return n == 0 ? 0.0 : std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

}  // namespace qpv
