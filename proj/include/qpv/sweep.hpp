#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "qpv/kernels.hpp"
#include "qpv/setup.hpp"

namespace qpv {

/// `steps` evenly spaced values from `min` to `max` inclusive.
struct Range {
  double min = 0.0;
  double max = 1.0;
  std::size_t steps = 2;

  double at(std::size_t i) const noexcept {
    return steps < 2 ? min : min + (max - min) * static_cast<double>(i) / static_cast<double>(steps - 1);
  }
};

struct SweepSpec {
  Range purity{0.5, 1.0, 50};
  Range indistinguishability{0.0, 1.0, 50};
  /// Exact-engine cells unless set; Monte Carlo then needs `seed`.
  std::optional<std::uint64_t> rounds_per_cell;
  std::optional<std::uint64_t> seed;

  bool exact() const noexcept { return !rounds_per_cell.has_value(); }
  /// Throws ConfigError: steps < 2, ranges outside [0,1] (purity outside
  /// [1/2,1], where g2 leaves the source model's domain), min > max,
  /// Monte Carlo without a seed or with zero rounds.
  void validate() const;
};

/// P(0|parallel,conclusive) over the grid, row-major with one row per purity.
struct SweepGrid {
  SweepSpec spec;
  std::vector<double> values;

  double at(std::size_t purity_index, std::size_t m_index) const {
    return values[purity_index * spec.indistinguishability.steps + m_index];
  }
};

/// P(0|parallel,conclusive) of one cell, exact.
double parallel_correctness(const SetupConfig& setup, double purity, double indistinguishability);

/// The source of `setup` is replaced per cell; its pair model is kept.
SweepGrid run_sweep(const SweepSpec& spec, const SetupConfig& setup,
                    Execution exec = Execution::kParallel);

struct ContourPoint {
  double purity = 0.0;
  /// Smallest M (linearly interpolated) at which the row reaches the level;
  /// none if the row never does.
  std::optional<double> threshold;
};

/// Per-row crossings of `level`.
std::vector<ContourPoint> contour(const SweepGrid& grid, double level = 2.0 / 3.0);

/// `purity,indistinguishability,p0_given_parallel_conclusive`
void write_sweep_csv(std::ostream& out, const SweepGrid& grid);
/// `purity,m_threshold`, with `NA` where the row has no crossing.
void write_contour_csv(std::ostream& out, const std::vector<ContourPoint>& points);

}  // namespace qpv
