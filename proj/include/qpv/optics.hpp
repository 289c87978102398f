#pragma once

#include <array>
#include <complex>
#include <string>

#include "qpv/common.hpp"
#include "qpv/rng.hpp"
#include "qpv/source.hpp"

namespace qpv {

/// Pure single-photon polarization state in the H/V basis.
class PolarizationQubit {
 public:
  using Amplitude = std::complex<double>;

  PolarizationQubit() = default;
  PolarizationQubit(Amplitude h, Amplitude v) : h_(h), v_(v) {}

  static PolarizationQubit horizontal() { return {1.0, 0.0}; }
  static PolarizationQubit vertical() { return {0.0, 1.0}; }

  Amplitude h() const noexcept { return h_; }
  Amplitude v() const noexcept { return v_; }

  double norm_squared() const noexcept { return std::norm(h_) + std::norm(v_); }
  bool is_normalized(double tol = 1e-12) const noexcept {
    return std::abs(norm_squared() - 1.0) <= tol;
  }

 private:
  Amplitude h_{1.0, 0.0};
  Amplitude v_{0.0, 0.0};
};

/// |<q0|q1>|^2. Throws PreconditionError if either state is not normalized.
double polarization_overlap(const PolarizationQubit& q0, const PolarizationQubit& q1);

enum class PhotonKind : std::uint8_t { kSignal, kNoise };

struct PhotonRecord {
  Arm origin = Arm::kV0;
  PhotonKind kind = PhotonKind::kSignal;
  PolarizationQubit polarization;
  int overlap_class = 0;  ///< signal photons share class 0; noise photons are unique
};

/// Mode overlap between two photons for a source with pair weight `pair_overlap`.
/// Noise photons overlap with nothing.
double mode_overlap(const PhotonRecord& a, const PhotonRecord& b, double pair_overlap);

struct BeamSplitterSpec {
  double split_ratio_upper = 0.5;  ///< T: probability of the upper output
  double excess_transmission = 1;  ///< lumped non-splitting loss

  double split_ratio_lower() const noexcept { return 1.0 - split_ratio_upper; }
  void validate(const std::string& name) const;
};

struct DetectorSpec {
  double efficiency = 1.0;
  double dark_click_probability = 0.0;
  void validate(const std::string& name) const;
};

/// Subset of {A, B, C, D}; bit i is detector i.
class ClickPattern {
 public:
  static constexpr std::size_t kCount = 16;

  constexpr ClickPattern() = default;
  constexpr explicit ClickPattern(std::uint8_t bits) : bits_(bits & 0xF) {}
  constexpr ClickPattern(std::initializer_list<Detector> ds) {
    for (auto d : ds) bits_ |= static_cast<std::uint8_t>(1u << index_of(d));
  }

  constexpr std::uint8_t bits() const noexcept { return bits_; }
  constexpr bool contains(Detector d) const noexcept { return (bits_ >> index_of(d)) & 1u; }
  constexpr int size() const noexcept {
    return (bits_ & 1) + ((bits_ >> 1) & 1) + ((bits_ >> 2) & 1) + ((bits_ >> 3) & 1);
  }
  constexpr ClickPattern operator|(ClickPattern o) const noexcept {
    return ClickPattern(static_cast<std::uint8_t>(bits_ | o.bits_));
  }
  constexpr bool operator==(const ClickPattern&) const = default;

  /// "AB", "ACD", ... ; the empty pattern is "-".
  std::string to_string() const;
  static ClickPattern parse(std::string_view text);

 private:
  std::uint8_t bits_ = 0;
};

/// Probability of each of the 16 click patterns.
struct OutcomeDistribution {
  std::array<double, ClickPattern::kCount> p{};

  double operator[](ClickPattern c) const noexcept { return p[c.bits()]; }
  double& operator[](ClickPattern c) noexcept { return p[c.bits()]; }
  double total() const noexcept;
};

/// Total-variation distance between two outcome distributions.
double total_variation(const OutcomeDistribution& a, const OutcomeDistribution& b);

struct TwoPhotonSplit {
  double both_upper = 0;
  double both_lower = 0;
  double split = 0;
};

/// One photon in each input of a beamsplitter with upper ratio T and mode
/// overlap `overlap`. Throws DomainError unless 0 < T < 1 and overlap in [0,1].
TwoPhotonSplit two_photon_bs_distribution(double split_ratio_upper, double overlap);

/// The optical network behind the source, reduced to survival probabilities.
struct NetworkModel {
  std::array<double, 2> arm_transmission{1.0, 1.0};
  BeamSplitterSpec bs1, bs2, bs3;  // bs2 feeds A/B, bs3 feeds C/D
  std::array<DetectorSpec, 4> detectors{};

  static NetworkModel lossless_balanced() { return {}; }

  /// Survival from BS1's output to the detector click, excluding split ratios.
  double downstream_survival(Detector d) const noexcept;
  /// Survival along V_arm -> d excluding split ratios.
  double path_survival(Arm arm, Detector d) const noexcept {
    return arm_transmission[index_of(arm)] * downstream_survival(d);
  }
  /// Probability that a photon from `arm` leaves BS1 through the upper port.
  double upper_port_probability(Arm arm) const noexcept {
    return arm == Arm::kV0 ? bs1.split_ratio_upper : bs1.split_ratio_lower();
  }
  void validate() const;
};

/// Exact pattern distributions and physical sampling for one source/network.
///
/// Arm loss acts before BS1, so only pairs that both reach BS1 interfere.
/// After BS1 every photon is routed and thinned independently; detectors
/// have threshold semantics plus independent dark clicks.
class OpticsEngine {
 public:
  OpticsEngine(const SourceParams& source, const NetworkModel& network);

  /// `polarization_overlap` is |<psi0|psi1>|^2 for the round.
  OutcomeDistribution exact(double polarization_overlap) const;
  ClickPattern sample(double polarization_overlap, RngStream& rng) const;

  double two_photon_probability() const noexcept { return p2_; }
  const NetworkModel& network() const noexcept { return network_; }

 private:
  using Dist = std::array<double, ClickPattern::kCount>;
  enum Port : int { kUpper = 0, kLower = 1 };

  Dist port_destination(Port port) const;
  Dist single_photon(Arm arm) const;
  ClickPattern route_from_port(Port port, RngStream& rng) const;
  Port sample_port(Arm arm, RngStream& rng) const;

  SourceParams source_;
  NetworkModel network_;
  double p2_;
  double pair_overlap_;
  Dist upper_, lower_;
  std::array<Dist, 2> single_;
  Dist dark_;
};

}  // namespace qpv
