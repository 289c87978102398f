#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>

#include "qpv/common.hpp"
#include "qpv/optics.hpp"

namespace qpv {

struct DetectorPair {
  Detector first;
  Detector second;
  std::string label() const { return {qpv::label(first), qpv::label(second)}; }
};

/// The six unordered detector pairs in the order AB, AC, AD, BC, BD, CD.
inline constexpr std::array<DetectorPair, 6> kDetectorPairs{{
    {Detector::kA, Detector::kB},
    {Detector::kA, Detector::kC},
    {Detector::kA, Detector::kD},
    {Detector::kB, Detector::kC},
    {Detector::kB, Detector::kD},
    {Detector::kC, Detector::kD},
}};

std::size_t pair_index(Detector i, Detector j);

/// Accumulated coincidences CC_ij and singles SC_i over pulse slots. A slot
/// contributes to CC_ij whenever both i and j clicked in it.
struct CountsTable {
  std::array<std::uint64_t, 6> coincidences{};
  std::array<std::uint64_t, 4> singles{};
  double duration_s = 0.0;

  void add(ClickPattern pattern) noexcept;
  void merge(const CountsTable& other) noexcept;

  std::uint64_t cc(Detector i, Detector j) const { return coincidences[pair_index(i, j)]; }
  std::uint64_t sc(Detector d) const noexcept { return singles[index_of(d)]; }

  bool operator==(const CountsTable&) const = default;
};

/// CC_ij / (SC_i SC_j) for one pair. Throws DomainError naming the detector
/// whose singles count is zero.
double normalized_coincidence(const CountsTable& counts, Detector i, Detector j);

/// All six normalized coincidences in kDetectorPairs order.
std::array<double, 6> normalized_coincidences(const CountsTable& counts);

/// `pair,count` rows for the six pairs.
void write_coincidences_csv(std::ostream& out, const CountsTable& counts);
/// `detector,count` rows for A..D.
void write_singles_csv(std::ostream& out, const CountsTable& counts);

/// Inverse of the two writers. Throws ConfigError on malformed input.
CountsTable read_counts_csv(std::istream& coincidences, std::istream& singles);

}  // namespace qpv
