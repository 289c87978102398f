#include "qpv/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qpv {

namespace {

// A basis state with Bloch vector along (1,1,1)/sqrt(3): equally far from
// all three standard bases.
PolarizationQubit tilted_state() {
  const double theta = std::acos(1.0 / std::sqrt(3.0));
  const double phi = -std::numbers::pi / 4.0;
  return {std::cos(theta / 2), std::polar(std::sin(theta / 2), phi)};
}

std::vector<AttackerStrategy> make_library() {
  using BP = BasisPolicy;
  using RR = ResponseRule;
  std::vector<AttackerStrategy> lib = {
      {"intercept3", "shared uniform basis, honest-looking answers", BP::kUniformShared, RR::kMimic, Basis::kHV, {}},
      {"intercept-guess", "shared uniform basis, answer the inferred parity", BP::kUniformShared, RR::kAnswerGuess, Basis::kHV, {}},
      {"claim-loss", "shared uniform basis, inconclusive on a wrong basis", BP::kUniformShared, RR::kClaimLoss, Basis::kHV, {}},
      {"claim-loss-guess", "claim-loss with direct answers otherwise", BP::kUniformShared, RR::kClaimLossGuess, Basis::kHV, {}},
      {"fixed-hv", "always measure H/V", BP::kFixed, RR::kMimic, Basis::kHV, {}},
      {"fixed-da", "always measure D/A", BP::kFixed, RR::kMimic, Basis::kDA, {}},
      {"independent", "each attacker draws its own basis", BP::kUniformIndependent, RR::kMimic, Basis::kHV, {}},
      {"tilted", "measure in a basis between H/V, D/A and R/L", BP::kCustom, RR::kMimic, Basis::kHV, tilted_state()},
      {"always0", "always answer 0", BP::kUniformShared, RR::kAlwaysZero, Basis::kHV, {}},
      {"always1", "always answer 1", BP::kUniformShared, RR::kAlwaysOne, Basis::kHV, {}},
      {"random", "fair-coin parity", BP::kUniformShared, RR::kRandom, Basis::kHV, {}},
      {"invert", "answer the opposite of the inferred parity", BP::kUniformShared, RR::kInvert, Basis::kHV, {}},
  };
  return lib;
}

// Born-rule measurement of `psi` in {m0, m0-perp}; returns 0 or 1.
int measure(const PolarizationQubit& psi, const PolarizationQubit& m0, RngStream& rng) {
  return rng.bernoulli(polarization_overlap(m0, psi)) ? 0 : 1;
}

ProverAnswer sample_answer(const AnswerDistribution& d, RngStream& rng) {
  const double u = rng.uniform() * (d[0] + d[1] + d[2]);
  if (u < d[0]) return ProverAnswer::kZero;
  if (u < d[0] + d[1]) return ProverAnswer::kOne;
  return ProverAnswer::kInconclusive;
}

Parity flip(Parity p) { return p == Parity::kParallel ? Parity::kOrthogonal : Parity::kParallel; }

}  // namespace

std::span<const AttackerStrategy> strategy_library() {
  static const std::vector<AttackerStrategy> lib = make_library();
  return lib;
}

const AttackerStrategy& find_strategy(std::string_view name) {
  const auto lib = strategy_library();
  const auto it = std::find_if(lib.begin(), lib.end(), [&](const auto& s) { return s.name == name; });
  if (it != lib.end()) return *it;
  std::string known;
  for (const auto& s : lib) known += (known.empty() ? "" : ", ") + s.name;
  throw ConfigError("strategy", "unknown strategy '" + std::string(name) + "'; available: " + known);
}

double analytic_locc_bound(int k) {
  if (k < 1 || k > 3) throw DomainError("number of bases must be 1, 2 or 3");
  return (1.0 + (k - 1) / 2.0) / k;
}

std::array<double, 2> attack_arrivals(const Geometry& g, std::uint64_t round) {
  const double c = g.signal_speed_m_per_s;
  const double ca = g.adversary_signal_speed_m_per_s;
  const auto e0 = verifier_emission(g, Arm::kV0, round);
  const auto e1 = verifier_emission(g, Arm::kV1, round);
  const double x0 = g.adversary0_position_m;
  const double x1 = g.adversary1_position_m;
  // Each attacker measures the qubit from its nearest verifier on arrival.
  const double m0 = e0.t_s + std::abs(x0 - e0.x_m) / c;
  const double m1 = e1.t_s + std::abs(e1.x_m - x1) / c;
  const double hop = std::abs(x1 - x0) / ca;
  const double ready0 = std::max(m0, m1 + hop);
  const double ready1 = std::max(m1, m0 + hop);
  return {ready0 + std::abs(x0 - g.v0_position_m) / ca, ready1 + std::abs(g.v1_position_m - x1) / ca};
}

bool attack_timing_feasible(const Geometry& g, std::uint64_t round) {
  const auto t = attack_arrivals(g, round);
  const auto deadline = arrival_deadlines(g, round, g.tolerance_s);
  return t[0] <= deadline[0] && t[1] <= deadline[1];
}

AttackRound intercept_measure_attack(const AttackerStrategy& s, std::span<const Basis> enabled,
                                     RngStream& rng, const RoundSpec& round,
                                     const MimicTable& mimic, bool timing_feasible) {
  if (enabled.empty()) throw ConfigError("bases", "enabled basis set is empty");
  const auto pick = [&] { return enabled[rng.below(static_cast<std::uint32_t>(enabled.size()))]; };

  // Measurement bases (first vector) and whether each matches the round basis.
  PolarizationQubit m0, m1;
  bool match = false;
  switch (s.basis_policy) {
    case BasisPolicy::kUniformShared: {
      const Basis b = pick();
      m0 = m1 = basis_state(b, 0);
      match = b == round.basis;
      break;
    }
    case BasisPolicy::kUniformIndependent: {
      const Basis b0 = pick();
      const Basis b1 = pick();
      m0 = basis_state(b0, 0);
      m1 = basis_state(b1, 0);
      match = b0 == round.basis && b1 == round.basis;
      break;
    }
    case BasisPolicy::kFixed:
      m0 = m1 = basis_state(s.fixed_basis, 0);
      match = s.fixed_basis == round.basis;
      break;
    case BasisPolicy::kCustom:
      m0 = m1 = s.custom_state;
      match = std::abs(polarization_overlap(m0, round.psi0) - 0.5) > 0.5 - 1e-12;
      break;
  }
  const int o0 = measure(round.psi0, m0, rng);
  const int o1 = measure(round.psi1, m1, rng);
  const Parity inferred = o0 == o1 ? Parity::kParallel : Parity::kOrthogonal;

  AttackRound out;
  out.timing_feasible = timing_feasible;
  auto mimic_answer = [&](Parity p) {
    out.declared = p;
    out.answer = sample_answer(mimic[static_cast<std::size_t>(p)], rng);
  };
  auto direct_answer = [&](Parity p) {
    out.declared = p;
    out.answer = correct_answer(p);
  };
  switch (s.response) {
    case ResponseRule::kMimic: mimic_answer(inferred); break;
    case ResponseRule::kAnswerGuess: direct_answer(inferred); break;
    case ResponseRule::kClaimLoss:
      if (match) mimic_answer(inferred);
      break;
    case ResponseRule::kClaimLossGuess:
      if (match) direct_answer(inferred);
      break;
    case ResponseRule::kAlwaysZero: direct_answer(Parity::kParallel); break;
    case ResponseRule::kAlwaysOne: direct_answer(Parity::kOrthogonal); break;
    case ResponseRule::kRandom:
      direct_answer(rng.bernoulli(0.5) ? Parity::kParallel : Parity::kOrthogonal);
      break;
    case ResponseRule::kInvert: direct_answer(flip(inferred)); break;
  }
  if (!out.declared) out.answer = ProverAnswer::kInconclusive;
  return out;
}

namespace {

struct AttackRecord {
  Parity parity = Parity::kParallel;
  ProverAnswer answer = ProverAnswer::kInconclusive;
  std::int8_t declared = -1;
  bool on_time = true;
};

}  // namespace

AttackReport evaluate_attack(const AttackerStrategy& strategy, std::uint64_t n,
                             const AttackConfig& config) {
  if (n == 0) throw PreconditionError("evaluate_attack needs n >= 1");
  if (config.enabled_bases.empty()) throw ConfigError("bases", "enabled basis set is empty");
  config.source.validate();
  config.setup.validate();

  const MimicTable mimic{honest_answer_distribution(config.source, config.setup, Parity::kParallel),
                         honest_answer_distribution(config.source, config.setup, Parity::kOrthogonal)};
  const Geometry& g = config.setup.geometry;
  const std::span<const Basis> bases(config.enabled_bases);

  AnswerCounts counts;
  std::array<std::uint64_t, 2> wins{}, totals{};
  std::uint64_t declared = 0, declared_wins = 0, late = 0;

  constexpr std::uint64_t kBlock = 1u << 16;
  std::vector<AttackRecord> block;
  for (std::uint64_t first = 0; first < n; first += kBlock) {
    block.resize(static_cast<std::size_t>(std::min(kBlock, n - first)));
    fill_indexed(config.execution, first, std::span<AttackRecord>(block), [&](std::uint64_t k) {
      RngStream verifier(config.master_seed, k, StreamPurpose::kVerifier);
      RngStream adversary(config.master_seed, k, StreamPurpose::kAdversary);
      const RoundSpec spec = draw_round(verifier, bases);
      const auto r = intercept_measure_attack(strategy, bases, adversary, spec, mimic,
                                              attack_timing_feasible(g, k));
      AttackRecord rec;
      rec.parity = spec.parity;
      rec.answer = r.answer;
      rec.declared = r.declared ? static_cast<std::int8_t>(*r.declared) : std::int8_t{-1};
      rec.on_time = r.timing_feasible;
      return rec;
    });
    for (const auto& rec : block) {
      const auto p = static_cast<std::size_t>(rec.parity);
      counts.add(rec.parity, rec.answer);
      ++totals[p];
      if (!rec.on_time) ++late;
      if (rec.declared >= 0) {
        ++declared;
        if (rec.declared == static_cast<std::int8_t>(rec.parity)) {
          ++declared_wins;
          ++wins[p];
        }
      }
    }
  }

  AttackReport rep;
  rep.strategy = strategy.name;
  rep.enabled_bases = config.enabled_bases.size();
  rep.rounds = n;
  const double z = config.confidence_z;
  rep.success = wilson_interval(wins[0] + wins[1], n, z);
  rep.success_by_parity = {wilson_interval(wins[0], totals[0], z), wilson_interval(wins[1], totals[1], z)};
  rep.conclusive_success = wilson_interval(declared_wins, declared, z);
  rep.analytic_bound = analytic_locc_bound(static_cast<int>(std::min<std::size_t>(rep.enabled_bases, 3)));
  rep.exceeds_locc_bound = rep.success.lower > kLoccBound;
  rep.timing_feasible = late == 0;
  rep.observed = summarize(counts, z);
  rep.observed.round_check_failures = late;
  rep.verdict = verify(rep.observed, config.policy ? *config.policy
                                                   : VerifyPolicy::calibrated(config.source, config.setup));
  return rep;
}

}  // namespace qpv
