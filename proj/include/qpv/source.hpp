#pragma once

#include "qpv/common.hpp"

namespace qpv {

/// How the source's indistinguishability enters the two-photon interference
/// at the prover's first beamsplitter.
enum class PairOverlapModel : std::uint8_t {
  /// Pair weight is the HOM visibility M / (1 + 2 g2); reproduces the
  /// published case predictions.
  kVisibility,
  /// Pair weight is the bare wave-function overlap M; noise photons alone
  /// account for the purity-induced loss of visibility.
  kWavefunction,
};

std::string_view to_string(PairOverlapModel m) noexcept;
PairOverlapModel pair_overlap_model_from_string(std::string_view s);

/// Imperfect single-photon source.
struct SourceParams {
  double g2 = 0.0;                  ///< second-order correlation at zero delay
  double indistinguishability = 1;  ///< pairwise wave-function overlap M
  double brightness = 1.0;          ///< accepted, not used by the model
  PairOverlapModel pair_model = PairOverlapModel::kVisibility;

  static SourceParams ideal() { return {}; }
  static SourceParams from_purity(double purity, double m,
                                  PairOverlapModel model = PairOverlapModel::kVisibility) {
    return {1.0 - purity, m, 1.0, model};
  }

  double purity() const noexcept { return 1.0 - g2; }

  /// Per-pulse probability that a noise photon accompanies the signal photon.
  double two_photon_probability() const;

  /// Interference weight of the signal-signal pair for parallel polarizations.
  double pair_overlap() const noexcept;

  /// Throws DomainError if g2 is outside [0, 1/2] or M outside [0, 1].
  void validate() const;
};

/// A value with a symmetric one-sigma uncertainty.
struct Measured {
  double value = 0.0;
  double sigma = 0.0;
};

struct HomMeasurement {
  Measured g2_parallel;
  Measured g2_perp;
};

/// Interferometric HOM visibility (g_perp - g_par) / g_perp with first-order
/// error propagation. Throws DomainError when g_perp <= 0.
Measured hom_visibility(const HomMeasurement& m);

/// M = V (1 + 2 g2), uncertainties propagated as independent.
Measured indistinguishability_from_visibility(Measured visibility, Measured g2);

/// V = M / (1 + 2 g2).
double visibility_from_indistinguishability(double m, double g2);

/// Root p of g2 = 2p / (1 + p)^2 on [0, 1]. Throws DomainError for g2 > 1/2.
double two_photon_probability_from_g2(double g2);

/// Photon content of one pulse in one arm.
struct EmissionProfile {
  double signal_only = 1.0;       ///< one signal photon
  double signal_plus_noise = 0.0; ///< one signal and one distinguishable noise photon
};

EmissionProfile emission_profile(const SourceParams& params, Arm arm);

}  // namespace qpv
