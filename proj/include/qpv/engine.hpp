#pragma once

#include "qpv/optics.hpp"
#include "qpv/round.hpp"
#include "qpv/setup.hpp"

namespace qpv {

/// Exact distribution over the 16 click patterns for one round.
OutcomeDistribution exact_outcome_distribution(const SourceParams& source,
                                               const SetupConfig& setup,
                                               const RoundSpec& round);

/// One Monte Carlo draw from the same distribution.
ClickPattern sample_outcome(const SourceParams& source, const SetupConfig& setup,
                            const RoundSpec& round, RngStream& rng);

/// Coincidence and singles probabilities of a two-detector HOM dip
/// measurement (one beamsplitter, detectors on its two outputs).
struct HomDipProbabilities {
  double coincidence = 0;
  double upper = 0;
  double lower = 0;
  /// Normalized correlation g2 = P(coinc) / (P(upper) P(lower)).
  double g2() const { return coincidence / (upper * lower); }
};

/// HOM dip with both photons passing one balanced beamsplitter and a
/// detector of efficiency `efficiency` on each output.
HomDipProbabilities simulate_hom_dip(const SourceParams& source, double polarization_overlap,
                                     double efficiency);

/// HomMeasurement (without uncertainties) obtained from simulate_hom_dip.
HomMeasurement simulated_hom_measurement(const SourceParams& source, double efficiency);

}  // namespace qpv
