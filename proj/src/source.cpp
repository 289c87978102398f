#include "qpv/source.hpp"

#include <cmath>

namespace qpv {

std::string_view to_string(PairOverlapModel m) noexcept {
  return m == PairOverlapModel::kVisibility ? "visibility" : "wavefunction";
}

PairOverlapModel pair_overlap_model_from_string(std::string_view s) {
  if (s == "visibility") return PairOverlapModel::kVisibility;
  if (s == "wavefunction") return PairOverlapModel::kWavefunction;
  throw DomainError("unknown pair overlap model '" + std::string(s) +
                    "' (expected visibility or wavefunction)");
}

double two_photon_probability_from_g2(double g2) {
  if (!(g2 >= 0.0)) throw DomainError("g2 must be >= 0");
  if (g2 > 0.5) {
    throw DomainError("g2 > 1/2 is outside the two-photon truncated model");
  }
  // Smaller root of g2 p^2 + (2 g2 - 2) p + g2 = 0, rationalized so that
  // g2 -> 0 is well conditioned.
  return g2 / ((1.0 - g2) + std::sqrt(1.0 - 2.0 * g2));
}

double SourceParams::two_photon_probability() const {
  return two_photon_probability_from_g2(g2);
}

double SourceParams::pair_overlap() const noexcept {
  if (pair_model == PairOverlapModel::kWavefunction) return indistinguishability;
  return visibility_from_indistinguishability(indistinguishability, g2);
}

void SourceParams::validate() const {
  if (!(g2 >= 0.0 && g2 <= 0.5)) {
    throw DomainError("g2 must lie in [0, 0.5], got " + std::to_string(g2));
  }
  if (!(indistinguishability >= 0.0 && indistinguishability <= 1.0)) {
    throw DomainError("indistinguishability must lie in [0, 1], got " +
                      std::to_string(indistinguishability));
  }
}

Measured hom_visibility(const HomMeasurement& m) {
  const double par = m.g2_parallel.value;
  const double perp = m.g2_perp.value;
  if (!(perp > 0.0)) throw DomainError("g2_perp must be > 0 for the HOM visibility");
  const double value = (perp - par) / perp;
  // dV/dpar = -1/perp, dV/dperp = par/perp^2
  const double d_par = m.g2_parallel.sigma / perp;
  const double d_perp = par * m.g2_perp.sigma / (perp * perp);
  return {value, std::hypot(d_par, d_perp)};
}

Measured indistinguishability_from_visibility(Measured visibility, Measured g2) {
  const double factor = 1.0 + 2.0 * g2.value;
  return {visibility.value * factor,
          std::hypot(factor * visibility.sigma, 2.0 * visibility.value * g2.sigma)};
}

double visibility_from_indistinguishability(double m, double g2) {
  return m / (1.0 + 2.0 * g2);
}

EmissionProfile emission_profile(const SourceParams& params, Arm /*arm*/) {
  const double p2 = params.two_photon_probability();
  return {1.0 - p2, p2};
}

}  // namespace qpv
