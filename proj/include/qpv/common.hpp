#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qpv {

/// A caller broke a documented precondition (e.g. a non-normalized qubit).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An argument lies outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Invalid or malformed configuration; `key()` names the offending entry.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error(key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

enum class Arm : std::uint8_t { kV0 = 0, kV1 = 1 };

enum class Detector : std::uint8_t { kA = 0, kB = 1, kC = 2, kD = 3 };

inline constexpr std::array<Arm, 2> kArms{Arm::kV0, Arm::kV1};
inline constexpr std::array<Detector, 4> kDetectors{Detector::kA, Detector::kB,
                                                    Detector::kC, Detector::kD};

constexpr std::size_t index_of(Arm a) noexcept { return static_cast<std::size_t>(a); }
constexpr std::size_t index_of(Detector d) noexcept { return static_cast<std::size_t>(d); }

constexpr char label(Detector d) noexcept { return static_cast<char>('A' + index_of(d)); }
constexpr std::string_view label(Arm a) noexcept { return a == Arm::kV0 ? "V0" : "V1"; }

/// Speed of light in vacuum, m/s.
inline constexpr double kSpeedOfLight = 299'792'458.0;

}  // namespace qpv
