#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "qpv/counts.hpp"
#include "qpv/kernels.hpp"
#include "qpv/optics.hpp"
#include "qpv/round.hpp"
#include "qpv/setup.hpp"
#include "qpv/stats.hpp"

namespace qpv {

enum class ProverAnswer : std::uint8_t { kZero = 0, kOne = 1, kInconclusive = 2 };

/// "0", "1" or "inc".
std::string_view to_string(ProverAnswer a) noexcept;

/// AB or CD -> 0 (parallel); one click on each side -> 1 (orthogonal);
/// anything else, including three or more clicks, is inconclusive.
ProverAnswer answer_from_pattern(ClickPattern pattern) noexcept;

/// Answer an honest prover gives for a parity with a perfect device.
constexpr ProverAnswer correct_answer(Parity p) noexcept {
  return p == Parity::kParallel ? ProverAnswer::kZero : ProverAnswer::kOne;
}

/// Probabilities of {0, 1, inconclusive}.
using AnswerDistribution = std::array<double, 3>;

/// Ideal source on the lossless balanced network: (1/2, 0, 1/2) for
/// parallel and (1/4, 1/2, 1/4) for orthogonal rounds.
AnswerDistribution theoretical_distribution(Parity p);

/// Folds a click-pattern distribution into answer probabilities.
AnswerDistribution answer_distribution(const OutcomeDistribution& d);

/// Exact answer distribution of an honest prover.
AnswerDistribution honest_answer_distribution(const SourceParams& source,
                                              const SetupConfig& setup, Parity parity);

struct SpaceTimePoint {
  double x_m = 0.0;
  double t_s = 0.0;
};

/// Instant at which both qubits reach the claimed prover position in round k.
double round_reference_time(const Geometry& g, std::uint64_t round) noexcept;

/// Emission event at verifier `arm` for round k, timed so the qubit reaches
/// the claimed position at the reference time.
SpaceTimePoint verifier_emission(const Geometry& g, Arm arm, std::uint64_t round) noexcept;

/// Arrival times of an answer emitted at `prover_x` by a prover that
/// received both qubits there, at both verifiers.
std::array<double, 2> honest_arrivals(const Geometry& g, std::uint64_t round, double prover_x);

/// Latest accepted arrival times for round k: honest arrival from the
/// claimed position plus `tolerance_s`.
std::array<double, 2> arrival_deadlines(const Geometry& g, std::uint64_t round, double tolerance_s);

struct TranscriptEntry {
  std::uint64_t round = 0;
  RoundSpec spec;
  ClickPattern pattern;
  ProverAnswer answer_v0 = ProverAnswer::kInconclusive;
  ProverAnswer answer_v1 = ProverAnswer::kInconclusive;
  double t_v0 = 0.0;
  double t_v1 = 0.0;
};

/// Timing and consistency check of one round: both answers agree and both
/// arrive no later than the deadlines.
bool round_check(const TranscriptEntry& e, const Geometry& g, double tolerance_s);

/// Answer tallies per parity.
struct AnswerCounts {
  std::array<std::array<std::uint64_t, 3>, 2> n{};

  void add(Parity p, ProverAnswer a) noexcept {
    ++n[static_cast<std::size_t>(p)][static_cast<std::size_t>(a)];
  }
  void merge(const AnswerCounts& o) noexcept;
  std::uint64_t count(Parity p, ProverAnswer a) const noexcept {
    return n[static_cast<std::size_t>(p)][static_cast<std::size_t>(a)];
  }
  std::uint64_t total(Parity p) const noexcept;
  std::uint64_t conclusive(Parity p) const noexcept {
    return count(p, ProverAnswer::kZero) + count(p, ProverAnswer::kOne);
  }
  std::uint64_t total() const noexcept { return total(Parity::kParallel) + total(Parity::kOrthogonal); }
};

inline constexpr double kLoccBound = 2.0 / 3.0;

struct VerificationReport {
  std::uint64_t rounds = 0;
  std::uint64_t round_check_failures = 0;
  AnswerCounts counts;
  double confidence_z = kZ95;

  Estimate p0_parallel_conclusive;  ///< P(0 | parallel, conclusive)
  Estimate p1_perp_conclusive;      ///< P(1 | orthogonal, conclusive)
  Estimate inconclusive_parallel;   ///< P(inconclusive | parallel)
  Estimate inconclusive_perp;       ///< P(inconclusive | orthogonal)
  /// Mean of the two conditional correctness rates; the interval is the
  /// mean of the two Wilson bounds.
  Estimate pooled_correctness;
  /// Lower confidence bound of the pooled correctness above the LOCC bound.
  bool secure_against_locc = false;

  CountsTable coincidences_parallel;
  CountsTable coincidences_perp;

  AnswerDistribution distribution(Parity p) const;
};

/// Builds the estimates of a report from answer tallies.
VerificationReport summarize(const AnswerCounts& counts, double z = kZ95,
                             double locc_bound = kLoccBound);

struct ProtocolOptions {
  std::vector<Basis> enabled_bases{Basis::kHV};
  Execution execution = Execution::kParallel;
  /// Where the prover really sits; NaN means the claimed position.
  double actual_prover_position_m = std::numeric_limits<double>::quiet_NaN();
  double confidence_z = kZ95;
  std::uint64_t block_size = 1u << 16;
  bool retain_transcript = false;
  /// Called once per block, in round order.
  std::function<void(std::span<const TranscriptEntry>)> sink;
};

struct ProtocolRun {
  VerificationReport report;
  std::vector<TranscriptEntry> transcript;  ///< only if retain_transcript
};

/// Simulates one honest round. Pure in (seed, round).
TranscriptEntry simulate_round(const OpticsEngine& engine, const Geometry& geometry,
                               std::span<const Basis> bases, std::uint64_t master_seed,
                               std::uint64_t round, double prover_x);

/// n honest rounds. Deterministic in the seed, independent of execution mode.
ProtocolRun run_protocol(std::uint64_t n, const SourceParams& source, const SetupConfig& setup,
                         std::uint64_t master_seed, const ProtocolOptions& options = {});

enum class VerdictOutcome { kAccept, kReject, kIndeterminate };
std::string_view to_string(VerdictOutcome v) noexcept;

enum class VerifyClause {
  kRoundChecks,          ///< every round on time and consistent
  kParallelCorrectness,  ///< lower bound of P(0|par,c) above the LOCC bound
  kPerpCorrectness,      ///< P(1|perp,c) consistent with the expected value
  kInconclusiveRates,    ///< inconclusive rates within the band
};
std::string_view to_string(VerifyClause c) noexcept;

struct VerifyPolicy {
  double locc_bound = kLoccBound;
  double expected_p1_perp_conclusive = 2.0 / 3.0;
  double p1_perp_margin = 0.05;
  double expected_inconclusive_parallel = 0.5;
  double expected_inconclusive_perp = 0.25;
  double inconclusive_band = 0.05;
  std::uint64_t min_conclusive = 100;

  /// Expectations of an honest prover with the given hardware, from the
  /// exact engine; needed whenever the network is lossy.
  static VerifyPolicy calibrated(const SourceParams& source, const SetupConfig& setup);
};

struct Verdict {
  VerdictOutcome outcome = VerdictOutcome::kIndeterminate;
  std::vector<VerifyClause> failed;
  std::vector<std::string> reasons;

  bool accepted() const noexcept { return outcome == VerdictOutcome::kAccept; }
  bool failed_clause(VerifyClause c) const noexcept;
};

Verdict verify(const VerificationReport& report, const VerifyPolicy& policy = {});

}  // namespace qpv
