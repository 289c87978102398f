#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <string_view>

#include "qpv/common.hpp"
#include "qpv/optics.hpp"
#include "qpv/source.hpp"

namespace qpv {

/// Transmission of each component along one verifier arm, up to BS1.
struct ArmComponents {
  double switch_transmission = 1.0;
  double delay_stage = 1.0;
  double polarization_modulator = 1.0;
  double fiber = 1.0;

  double composed() const noexcept {
    return switch_transmission * delay_stage * polarization_modulator * fiber;
  }
};

/// Detector channel as characterized: fiber transmission and efficiency
/// relative to detector A; absolute scale lives on SetupConfig.
struct DetectorChannel {
  double fiber = 1.0;
  double relative_efficiency = 1.0;
  double dark_click_probability = 0.0;
};

/// One-dimensional layout V0 < P < V1, with attackers between.
struct Geometry {
  double v0_position_m = 0.0;
  double prover_position_m = 200.0;
  double v1_position_m = 400.0;
  double signal_speed_m_per_s = 2.04e8;
  double processing_time_s = 0.0;
  double tolerance_s = 1e-9;
  double round_period_s = 1e-6;
  double adversary0_position_m = 100.0;
  double adversary1_position_m = 300.0;
  double adversary_signal_speed_m_per_s = 2.04e8;

  void validate() const;
};

struct SetupConfig {
  static constexpr int kSchemaVersion = 1;

  SourceParams source;
  std::array<ArmComponents, 2> arms{};
  BeamSplitterSpec bs1, bs2, bs3;
  std::array<DetectorChannel, 4> detectors{};
  double detector_abs_scale = 0.30;  ///< absolute efficiency of detector A
  Geometry geometry;

  /// Lossless, balanced network with an ideal source.
  static SetupConfig ideal() {
    SetupConfig c;
    c.detector_abs_scale = 1.0;
    return c;
  }

  double arm_transmission(Arm arm) const noexcept { return arms[index_of(arm)].composed(); }
  DetectorSpec detector(Detector d) const noexcept;
  NetworkModel network() const;

  /// Range checks on every field. Throws ConfigError naming the key.
  void validate() const;
};

/// Parses a configuration document (JSON). Unknown keys are rejected;
/// errors are ConfigError naming the dotted key path.
SetupConfig load_config(std::string_view text);

/// Loads a file, or a bundled configuration by name (e.g. "paper_setup").
SetupConfig load_config_file(const std::string& path_or_name);

/// Text of a bundled configuration, or empty if the name is unknown.
std::string_view bundled_config(std::string_view name);

/// Canonical document: every key present, keys sorted, two-space indent.
std::string serialize(const SetupConfig& config);

/// Canonical form of a configuration text (parsed and re-dumped, no defaults filled).
std::string canonical_text(std::string_view text);

/// Product of arm transmission, BS1 and downstream BS excess, detector fiber
/// and efficiency. Split ratios are not included.
double path_survival(const SetupConfig& config, Arm arm, Detector detector);

}  // namespace qpv
