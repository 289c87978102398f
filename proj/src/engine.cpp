#include "qpv/engine.hpp"

namespace qpv {

OutcomeDistribution exact_outcome_distribution(const SourceParams& source,
                                               const SetupConfig& setup,
                                               const RoundSpec& round) {
  return OpticsEngine(source, setup.network()).exact(round.overlap());
}

ClickPattern sample_outcome(const SourceParams& source, const SetupConfig& setup,
                            const RoundSpec& round, RngStream& rng) {
  return OpticsEngine(source, setup.network()).sample(round.overlap(), rng);
}

HomDipProbabilities simulate_hom_dip(const SourceParams& source, double polarization_overlap,
                                     double efficiency) {
  // A threshold detector on a port is the OR of the two detectors behind
  // that port's downstream splitter.
  NetworkModel net;
  for (auto& d : net.detectors) d.efficiency = efficiency;
  const auto dist = OpticsEngine(source, net).exact(polarization_overlap);

  HomDipProbabilities out;
  for (std::uint8_t bits = 0; bits < ClickPattern::kCount; ++bits) {
    const ClickPattern c(bits);
    const bool up = c.contains(Detector::kA) || c.contains(Detector::kB);
    const bool low = c.contains(Detector::kC) || c.contains(Detector::kD);
    if (up) out.upper += dist[c];
    if (low) out.lower += dist[c];
    if (up && low) out.coincidence += dist[c];
  }
  return out;
}

HomMeasurement simulated_hom_measurement(const SourceParams& source, double efficiency) {
  HomMeasurement m;
  m.g2_parallel.value = simulate_hom_dip(source, 1.0, efficiency).g2();
  m.g2_perp.value = simulate_hom_dip(source, 0.0, efficiency).g2();
  return m;
}

}  // namespace qpv
