#include "qpv/sweep.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>

#include "qpv/protocol.hpp"

namespace qpv {

namespace {

void check_range(const Range& r, const std::string& key, double lo, double hi) {
  if (r.steps < 2) throw ConfigError(key + ".steps", "need at least 2 steps");
  if (!(r.min >= lo && r.max <= hi)) {
    throw ConfigError(key, "range must lie within [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  if (r.min > r.max) throw ConfigError(key, "min exceeds max");
}

double conditional_p0(const AnswerDistribution& d) {
  const double c = d[0] + d[1];
  return c > 0 ? d[0] / c : 0.0;
}

}  // namespace

void SweepSpec::validate() const {
  check_range(purity, "purity", 0.5, 1.0);
  check_range(indistinguishability, "indistinguishability", 0.0, 1.0);
  if (rounds_per_cell) {
    if (*rounds_per_cell == 0) throw ConfigError("rounds", "Monte Carlo cells need at least one round");
    if (!seed) throw ConfigError("seed", "Monte Carlo sweeps require a seed");
  }
}

double parallel_correctness(const SetupConfig& setup, double purity, double m) {
  const auto source = SourceParams::from_purity(purity, m, setup.source.pair_model);
  const OpticsEngine engine(source, setup.network());
  return conditional_p0(answer_distribution(engine.exact(1.0)));
}

SweepGrid run_sweep(const SweepSpec& spec, const SetupConfig& setup, Execution exec) {
  spec.validate();
  setup.validate();
  const NetworkModel network = setup.network();
  const std::size_t cols = spec.indistinguishability.steps;

  SweepGrid grid;
  grid.spec = spec;
  grid.values.resize(spec.purity.steps * cols);
  fill_indexed(exec, 0, std::span<double>(grid.values), [&](std::uint64_t cell) {
    const double purity = spec.purity.at(cell / cols);
    const double m = spec.indistinguishability.at(cell % cols);
    const OpticsEngine engine(SourceParams::from_purity(purity, m, setup.source.pair_model), network);
    if (spec.exact()) return conditional_p0(answer_distribution(engine.exact(1.0)));

    RngStream rng(*spec.seed, cell, StreamPurpose::kSweep);
    std::uint64_t zeros = 0, conclusive = 0;
    for (std::uint64_t r = 0; r < *spec.rounds_per_cell; ++r) {
      const auto a = answer_from_pattern(engine.sample(1.0, rng));
      if (a == ProverAnswer::kInconclusive) continue;
      ++conclusive;
      if (a == ProverAnswer::kZero) ++zeros;
    }
    return conclusive ? static_cast<double>(zeros) / static_cast<double>(conclusive) : 0.0;
  });
  return grid;
}

std::vector<ContourPoint> contour(const SweepGrid& grid, double level) {
  const auto& s = grid.spec;
  std::vector<ContourPoint> out;
  out.reserve(s.purity.steps);
  for (std::size_t i = 0; i < s.purity.steps; ++i) {
    ContourPoint p{s.purity.at(i), std::nullopt};
    for (std::size_t j = 0; j < s.indistinguishability.steps; ++j) {
      const double v = grid.at(i, j);
      if (v < level) continue;
      if (j == 0) {
        p.threshold = s.indistinguishability.at(0);
      } else {
        const double v0 = grid.at(i, j - 1);
        const double m0 = s.indistinguishability.at(j - 1);
        const double m1 = s.indistinguishability.at(j);
        p.threshold = m0 + (m1 - m0) * (level - v0) / (v - v0);
      }
      break;
    }
    out.push_back(p);
  }
  return out;
}

void write_sweep_csv(std::ostream& out, const SweepGrid& grid) {
  const auto& s = grid.spec;
  out << "purity,indistinguishability,p0_given_parallel_conclusive\n";
  out << std::setprecision(10);
  for (std::size_t i = 0; i < s.purity.steps; ++i) {
    for (std::size_t j = 0; j < s.indistinguishability.steps; ++j) {
      out << s.purity.at(i) << ',' << s.indistinguishability.at(j) << ',' << grid.at(i, j) << '\n';
    }
  }
}

void write_contour_csv(std::ostream& out, const std::vector<ContourPoint>& points) {
  out << "purity,m_threshold\n" << std::setprecision(10);
  for (const auto& p : points) {
    out << p.purity << ',';
    if (p.threshold) {
      out << *p.threshold;
    } else {
      out << "NA";
    }
    out << '\n';
  }
}

}  // namespace qpv
