#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qpv/protocol.hpp"

namespace qpv {

/// How the two attackers pick their measurement bases each round.
enum class BasisPolicy : std::uint8_t {
  kUniformShared,       ///< one basis drawn uniformly from the enabled set, used by both
  kUniformIndependent,  ///< each attacker draws its own basis
  kFixed,               ///< always `fixed_basis`
  kCustom,              ///< always the basis {custom_state, its orthogonal}
};

/// Joint rule turning the two measurement records into the common answer.
enum class ResponseRule : std::uint8_t {
  kMimic,           ///< infer parity, answer like an honest prover would for it
  kAnswerGuess,     ///< infer parity, answer it directly (0 or 1)
  kClaimLoss,       ///< inconclusive when the basis was wrong, mimic otherwise
  kClaimLossGuess,  ///< inconclusive when the basis was wrong, answer-guess otherwise
  kAlwaysZero,
  kAlwaysOne,
  kRandom,          ///< fair-coin parity, ignores the records
  kInvert,          ///< the opposite of the inferred parity
};

/// An intercept-measure strategy of two non-communicating (except for one
/// classical exchange) attackers sitting between the verifiers and the prover.
struct AttackerStrategy {
  std::string name;
  std::string summary;
  BasisPolicy basis_policy = BasisPolicy::kUniformShared;
  ResponseRule response = ResponseRule::kMimic;
  Basis fixed_basis = Basis::kHV;
  PolarizationQubit custom_state;
};

/// The built-in strategies.
std::span<const AttackerStrategy> strategy_library();

/// Looks a strategy up by name. Throws ConfigError listing the known names.
const AttackerStrategy& find_strategy(std::string_view name);

/// (1/k)(1 + (k-1)/2) for k enabled bases. Throws DomainError unless k is 1, 2 or 3.
double analytic_locc_bound(int enabled_bases);

/// Outcome of one intercepted round.
struct AttackRound {
  ProverAnswer answer = ProverAnswer::kInconclusive;
  std::optional<Parity> declared;  ///< parity the attackers commit to; none if claiming loss
  bool timing_feasible = true;

  bool success(Parity truth) const noexcept { return declared && *declared == truth; }
};

/// Honest answer distributions the attackers imitate, indexed by parity.
using MimicTable = std::array<AnswerDistribution, 2>;

/// Answer arrival times at V0 and V1 when the attackers measure on arrival,
/// swap their records once and answer immediately.
std::array<double, 2> attack_arrivals(const Geometry& g, std::uint64_t round);

/// True iff the attackers' answers reach both verifiers by the deadline.
bool attack_timing_feasible(const Geometry& g, std::uint64_t round = 0);

/// One round of the intercept-measure attack. Measurement outcomes follow
/// the Born rule, so a basis mismatch gives uniform records automatically.
AttackRound intercept_measure_attack(const AttackerStrategy& strategy,
                                     std::span<const Basis> enabled, RngStream& rng,
                                     const RoundSpec& round, const MimicTable& mimic,
                                     bool timing_feasible = true);

struct AttackConfig {
  SourceParams source;  ///< honest hardware the verifiers expect (sets the mimic table)
  SetupConfig setup = SetupConfig::ideal();
  std::vector<Basis> enabled_bases{Basis::kHV, Basis::kDA, Basis::kRL};
  std::uint64_t master_seed = 0;
  Execution execution = Execution::kParallel;
  double confidence_z = kZ95;
  /// Verifier policy; calibrated to (source, setup) if unset.
  std::optional<VerifyPolicy> policy;
};

struct AttackReport {
  std::string strategy;
  std::size_t enabled_bases = 0;
  std::uint64_t rounds = 0;
  Estimate success;                       ///< declared parity correct, loss claims fail
  std::array<Estimate, 2> success_by_parity;
  Estimate conclusive_success;            ///< among rounds with a declared parity
  double analytic_bound = kLoccBound;
  /// Lower confidence bound of `success` above analytic_locc_bound(3).
  bool exceeds_locc_bound = false;
  bool timing_feasible = true;
  VerificationReport observed;            ///< statistics as the verifiers see them
  Verdict verdict;

  bool verify_accepts() const noexcept { return verdict.accepted(); }
};

/// Runs n rounds with the attackers in place of the prover. Throws
/// PreconditionError for n = 0.
AttackReport evaluate_attack(const AttackerStrategy& strategy, std::uint64_t n,
                             const AttackConfig& config);

}  // namespace qpv
