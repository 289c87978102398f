#include "qpv/optics.hpp"

#include <cmath>
#include <numeric>

namespace qpv {
namespace {

using Dist = std::array<double, ClickPattern::kCount>;

Dist delta_empty() {
  Dist d{};
  d[0] = 1.0;
  return d;
}

// Distribution of the union of two independent click sets.
Dist or_convolve(const Dist& a, const Dist& b) {
  Dist out{};
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) out[i | j] += a[i] * b[j];
  }
  return out;
}

Dist mix(double wa, const Dist& a, double wb, const Dist& b) {
  Dist out{};
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = wa * a[i] + wb * b[i];
  return out;
}

void require_probability(double p, const std::string& name, bool open_low = false) {
  const bool ok = open_low ? (p > 0.0 && p <= 1.0) : (p >= 0.0 && p <= 1.0);
  if (!ok) throw DomainError(name + " out of range: " + std::to_string(p));
}

}  // namespace

double polarization_overlap(const PolarizationQubit& q0, const PolarizationQubit& q1) {
  if (!q0.is_normalized() || !q1.is_normalized()) {
    throw PreconditionError("polarization_overlap: qubit is not normalized");
  }
  const auto inner = std::conj(q0.h()) * q1.h() + std::conj(q0.v()) * q1.v();
  return std::min(1.0, std::norm(inner));
}

double mode_overlap(const PhotonRecord& a, const PhotonRecord& b, double pair_overlap) {
  if (a.kind != PhotonKind::kSignal || b.kind != PhotonKind::kSignal) return 0.0;
  if (a.overlap_class != b.overlap_class) return 0.0;
  return pair_overlap * polarization_overlap(a.polarization, b.polarization);
}

void BeamSplitterSpec::validate(const std::string& name) const {
  if (!(split_ratio_upper > 0.0 && split_ratio_upper < 1.0)) {
    throw DomainError(name + ".split_ratio_upper must lie in (0, 1)");
  }
  require_probability(excess_transmission, name + ".excess_transmission", true);
}

void DetectorSpec::validate(const std::string& name) const {
  require_probability(efficiency, name + ".efficiency");
  if (!(dark_click_probability >= 0.0 && dark_click_probability < 1.0)) {
    throw DomainError(name + ".dark_click_probability must lie in [0, 1)");
  }
}

std::string ClickPattern::to_string() const {
  if (bits_ == 0) return "-";
  std::string s;
  for (auto d : kDetectors) {
    if (contains(d)) s.push_back(label(d));
  }
  return s;
}

ClickPattern ClickPattern::parse(std::string_view text) {
  if (text == "-" || text.empty()) return {};
  std::uint8_t bits = 0;
  for (char c : text) {
    if (c < 'A' || c > 'D') {
      throw PreconditionError("invalid click pattern '" + std::string(text) + "'");
    }
    bits |= static_cast<std::uint8_t>(1u << (c - 'A'));
  }
  return ClickPattern(bits);
}

double OutcomeDistribution::total() const noexcept {
  return std::accumulate(p.begin(), p.end(), 0.0);
}

double total_variation(const OutcomeDistribution& a, const OutcomeDistribution& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.p.size(); ++i) s += std::abs(a.p[i] - b.p[i]);
  return 0.5 * s;
}

TwoPhotonSplit two_photon_bs_distribution(double t, double overlap) {
  if (!(t > 0.0 && t < 1.0)) throw DomainError("split ratio must lie in (0, 1)");
  if (!(overlap >= 0.0 && overlap <= 1.0)) throw DomainError("overlap must lie in [0, 1]");
  const double r = 1.0 - t;
  const double bunch = t * r * (1.0 + overlap);
  return {bunch, bunch, t * t + r * r - 2.0 * t * r * overlap};
}

double NetworkModel::downstream_survival(Detector d) const noexcept {
  const bool upper = d == Detector::kA || d == Detector::kB;
  const auto& second = upper ? bs2 : bs3;
  return bs1.excess_transmission * second.excess_transmission *
         detectors[index_of(d)].efficiency;
}

void NetworkModel::validate() const {
  for (auto arm : kArms) {
    require_probability(arm_transmission[index_of(arm)],
                        "arm " + std::string(label(arm)) + " transmission");
  }
  bs1.validate("BS1");
  bs2.validate("BS2");
  bs3.validate("BS3");
  for (auto d : kDetectors) detectors[index_of(d)].validate(std::string("detector ") + label(d));
}

OpticsEngine::OpticsEngine(const SourceParams& source, const NetworkModel& network)
    : source_(source), network_(network) {
  source_.validate();
  network_.validate();
  p2_ = source_.two_photon_probability();
  pair_overlap_ = source_.pair_overlap();
  upper_ = port_destination(kUpper);
  lower_ = port_destination(kLower);
  for (auto arm : kArms) single_[index_of(arm)] = single_photon(arm);

  dark_ = delta_empty();
  for (auto d : kDetectors) {
    const double q = network_.detectors[index_of(d)].dark_click_probability;
    Dist one{};
    one[0] = 1.0 - q;
    one[1u << index_of(d)] = q;
    dark_ = or_convolve(dark_, one);
  }
}

OpticsEngine::Dist OpticsEngine::port_destination(Port port) const {
  const auto& bs = port == kUpper ? network_.bs2 : network_.bs3;
  const Detector first = port == kUpper ? Detector::kA : Detector::kC;
  const Detector second = port == kUpper ? Detector::kB : Detector::kD;
  Dist d{};
  d[1u << index_of(first)] = bs.split_ratio_upper * network_.downstream_survival(first);
  d[1u << index_of(second)] = bs.split_ratio_lower() * network_.downstream_survival(second);
  d[0] = 1.0 - d[1u << index_of(first)] - d[1u << index_of(second)];
  return d;
}

OpticsEngine::Dist OpticsEngine::single_photon(Arm arm) const {
  const double up = network_.upper_port_probability(arm);
  return mix(up, upper_, 1.0 - up, lower_);
}

OutcomeDistribution OpticsEngine::exact(double polarization_overlap) const {
  if (!(polarization_overlap >= 0.0 && polarization_overlap <= 1.0)) {
    throw DomainError("polarization overlap must lie in [0, 1]");
  }
  const double t0 = network_.arm_transmission[0];
  const double t1 = network_.arm_transmission[1];
  const auto bs1 = two_photon_bs_distribution(network_.bs1.split_ratio_upper,
                                              pair_overlap_ * polarization_overlap);

  // Signal pair: interference only if both photons reach BS1.
  Dist pair{};
  {
    const Dist uu = or_convolve(upper_, upper_);
    const Dist ll = or_convolve(lower_, lower_);
    const Dist ul = or_convolve(upper_, lower_);
    const double both = t0 * t1;
    const double only0 = t0 * (1.0 - t1);
    const double only1 = (1.0 - t0) * t1;
    for (std::size_t i = 0; i < pair.size(); ++i) {
      pair[i] = both * (bs1.both_upper * uu[i] + bs1.both_lower * ll[i] + bs1.split * ul[i]) +
                only0 * single_[0][i] + only1 * single_[1][i];
    }
    pair[0] += (1.0 - t0) * (1.0 - t1);
  }

  // Per-arm multiplicities: {signal} or {signal, noise}.
  std::array<Dist, 2> noise;
  for (auto arm : kArms) {
    const double t = network_.arm_transmission[index_of(arm)];
    noise[index_of(arm)] = mix(t, single_[index_of(arm)], 1.0 - t, delta_empty());
  }
  const auto profile = emission_profile(source_, Arm::kV0);
  Dist total{};
  for (int n0 = 0; n0 < 2; ++n0) {
    for (int n1 = 0; n1 < 2; ++n1) {
      const double w = (n0 ? profile.signal_plus_noise : profile.signal_only) *
                       (n1 ? profile.signal_plus_noise : profile.signal_only);
      if (w == 0.0) continue;
      Dist d = pair;
      if (n0) d = or_convolve(d, noise[0]);
      if (n1) d = or_convolve(d, noise[1]);
      for (std::size_t i = 0; i < total.size(); ++i) total[i] += w * d[i];
    }
  }
  OutcomeDistribution out;
  out.p = or_convolve(total, dark_);
  return out;
}

OpticsEngine::Port OpticsEngine::sample_port(Arm arm, RngStream& rng) const {
  return rng.bernoulli(network_.upper_port_probability(arm)) ? kUpper : kLower;
}

ClickPattern OpticsEngine::route_from_port(Port port, RngStream& rng) const {
  const Dist& d = port == kUpper ? upper_ : lower_;
  const Detector first = port == kUpper ? Detector::kA : Detector::kC;
  const Detector second = port == kUpper ? Detector::kB : Detector::kD;
  const double p_first = d[1u << index_of(first)];
  const double p_second = d[1u << index_of(second)];
  const double u = rng.uniform();
  if (u < p_first) return ClickPattern{first};
  if (u < p_first + p_second) return ClickPattern{second};
  return {};
}

ClickPattern OpticsEngine::sample(double polarization_overlap, RngStream& rng) const {
  const double t0 = network_.arm_transmission[0];
  const double t1 = network_.arm_transmission[1];
  ClickPattern clicks;

  const bool noise0 = rng.bernoulli(p2_);
  const bool noise1 = rng.bernoulli(p2_);
  const bool s0 = rng.bernoulli(t0);
  const bool s1 = rng.bernoulli(t1);

  if (s0 && s1) {
    const double t = network_.bs1.split_ratio_upper;
    Port p0, p1;
    if (rng.bernoulli(pair_overlap_ * polarization_overlap)) {
      // Indistinguishable pair: (2,0), (0,2), (1,1) with 2TR, 2TR, (T-R)^2.
      const double bunch = 2.0 * t * (1.0 - t);
      const double u = rng.uniform();
      if (u < bunch) {
        p0 = p1 = kUpper;
      } else if (u < 2.0 * bunch) {
        p0 = p1 = kLower;
      } else {
        p0 = kUpper;
        p1 = kLower;
      }
    } else {
      p0 = sample_port(Arm::kV0, rng);
      p1 = sample_port(Arm::kV1, rng);
    }
    clicks = clicks | route_from_port(p0, rng) | route_from_port(p1, rng);
  } else if (s0) {
    clicks = clicks | route_from_port(sample_port(Arm::kV0, rng), rng);
  } else if (s1) {
    clicks = clicks | route_from_port(sample_port(Arm::kV1, rng), rng);
  }

  if (noise0 && rng.bernoulli(t0)) {
    clicks = clicks | route_from_port(sample_port(Arm::kV0, rng), rng);
  }
  if (noise1 && rng.bernoulli(t1)) {
    clicks = clicks | route_from_port(sample_port(Arm::kV1, rng), rng);
  }
  for (auto d : kDetectors) {
    const double q = network_.detectors[index_of(d)].dark_click_probability;
    if (q > 0.0 && rng.bernoulli(q)) clicks = clicks | ClickPattern{d};
  }
  return clicks;
}

}  // namespace qpv
