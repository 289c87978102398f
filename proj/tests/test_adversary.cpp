#include <doctest.h>

#include <cmath>

#include "qpv/adversary.hpp"
#include "qpv/report_io.hpp"

using namespace qpv;

namespace {

const std::vector<Basis> kThree{Basis::kHV, Basis::kDA, Basis::kRL};

AttackConfig config_with(std::vector<Basis> bases, std::uint64_t seed) {
  AttackConfig c;
  c.enabled_bases = std::move(bases);
  c.master_seed = seed;
  return c;
}

/// Exact success of the shared-uniform-basis intercept strategy by
/// enumeration of round basis, attacker basis, states and outcomes.
double enumerate_intercept_success(const std::vector<Basis>& bases) {
  double total = 0;
  int cases = 0;
  for (auto rb : bases) {
    for (auto ab : bases) {
      for (auto parity : {Parity::kParallel, Parity::kOrthogonal}) {
        for (int s0 = 0; s0 < 2; ++s0) {
          const auto round = RoundSpec::make(rb, parity, s0);
          const auto m = basis_state(ab, 0);
          const double p0 = polarization_overlap(m, round.psi0);
          const double p1 = polarization_overlap(m, round.psi1);
          const double same = p0 * p1 + (1 - p0) * (1 - p1);
          total += parity == Parity::kParallel ? same : 1 - same;
          ++cases;
        }
      }
    }
  }
  return total / cases;
}

}  // namespace

TEST_CASE("analytic LOCC bound") {
  CHECK(analytic_locc_bound(3) == 2.0 / 3.0);
  CHECK(analytic_locc_bound(2) == 0.75);
  CHECK(analytic_locc_bound(1) == 1.0);
  CHECK_THROWS_AS(analytic_locc_bound(0), DomainError);
  CHECK_THROWS_AS(analytic_locc_bound(4), DomainError);
  // The counting argument matches exhaustive enumeration of the strategy.
  CHECK(enumerate_intercept_success(kThree) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(enumerate_intercept_success({Basis::kHV, Basis::kDA}) == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(enumerate_intercept_success({Basis::kRL}) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("three-basis intercept attack") {
  constexpr std::uint64_t n = 1'000'000;
  const auto rep = evaluate_attack(find_strategy("intercept3"), n, config_with(kThree, 41));
  CHECK(std::abs(rep.success.value - 2.0 / 3.0) < 5 * binomial_sigma(2.0 / 3.0, n));
  CHECK_FALSE(rep.exceeds_locc_bound);
  CHECK(rep.timing_feasible);
  CHECK(rep.verdict.outcome == VerdictOutcome::kReject);
  CHECK_FALSE(rep.verify_accepts());

  const auto guess = evaluate_attack(find_strategy("intercept-guess"), n, config_with(kThree, 41));
  CHECK(guess.verdict.failed_clause(VerifyClause::kParallelCorrectness));
}

TEST_CASE("two bases give 3/4") {
  constexpr std::uint64_t n = 1'000'000;
  const auto rep = evaluate_attack(find_strategy("intercept3"), n, config_with({Basis::kHV, Basis::kDA}, 42));
  CHECK(std::abs(rep.success.value - 0.75) < 5 * binomial_sigma(0.75, n));
  CHECK(rep.analytic_bound == 0.75);
}

TEST_CASE("a single basis offers no security") {
  const auto rep = evaluate_attack(find_strategy("intercept3"), 200'000, config_with({Basis::kHV}, 43));
  CHECK(rep.success.value == 1.0);
  CHECK(rep.verify_accepts());

  // Per round, the attackers always infer parity correctly.
  const MimicTable mimic{theoretical_distribution(Parity::kParallel), theoretical_distribution(Parity::kOrthogonal)};
  const std::vector<Basis> hv{Basis::kHV};
  for (std::uint64_t k = 0; k < 1000; ++k) {
    RngStream v(44, k, StreamPurpose::kVerifier), a(44, k, StreamPurpose::kAdversary);
    const auto spec = draw_round(v, hv);
    CHECK(intercept_measure_attack(find_strategy("fixed-hv"), hv, a, spec, mimic).success(spec.parity));
  }
}

TEST_CASE("claim-loss is caught by the inconclusive-rate clause") {
  for (std::uint64_t n : {10'000ull, 1'000'000ull}) {
    const auto rep = evaluate_attack(find_strategy("claim-loss"), n, config_with(kThree, 45));
    CHECK(rep.conclusive_success.value == 1.0);
    CHECK(rep.verdict.outcome == VerdictOutcome::kReject);
    CHECK(rep.verdict.failed_clause(VerifyClause::kInconclusiveRates));
    if (n == 1'000'000) {
      // Inconclusive whenever the basis is wrong (2/3), otherwise at the honest rate.
      const double sigma = 5 * binomial_sigma(0.8, n / 2);
      CHECK(std::abs(rep.observed.inconclusive_parallel.value - (2.0 / 3 + 0.5 / 3)) < sigma);
      CHECK(std::abs(rep.observed.inconclusive_perp.value - (2.0 / 3 + 0.25 / 3)) < sigma);
    }
  }
}

TEST_CASE("no library strategy beats 2/3 with three bases") {
  constexpr std::uint64_t n = 200'000;
  for (const auto& s : strategy_library()) {
    const auto rep = evaluate_attack(s, n, config_with(kThree, 46));
    CHECK_MESSAGE(rep.success.value <= 2.0 / 3.0 + 5 * binomial_sigma(2.0 / 3.0, n), s.name);
    CHECK_MESSAGE(!rep.verify_accepts(), s.name);
  }
  CHECK(strategy_library().size() >= 10);
}

TEST_CASE("any fixed measurement basis gives 2/3 over the six states") {
  RngStream r(47, 0, StreamPurpose::kSweep);
  for (int k = 0; k < 20; ++k) {
    const double theta = std::acos(2 * r.uniform() - 1), phi = 6.283185307179586 * r.uniform();
    AttackerStrategy s{"custom", "", BasisPolicy::kCustom, ResponseRule::kAnswerGuess, Basis::kHV,
                       {std::cos(theta / 2), std::polar(std::sin(theta / 2), phi)}};
    double success = 0;
    for (auto rb : kThree)
      for (auto parity : {Parity::kParallel, Parity::kOrthogonal})
        for (int s0 = 0; s0 < 2; ++s0) {
          const auto round = RoundSpec::make(rb, parity, s0);
          const double p0 = polarization_overlap(s.custom_state, round.psi0);
          const double p1 = polarization_overlap(s.custom_state, round.psi1);
          const double same = p0 * p1 + (1 - p0) * (1 - p1);
          success += (parity == Parity::kParallel ? same : 1 - same) / 12;
        }
    CHECK(success == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  }
}

TEST_CASE("attack timing") {
  Geometry g;
  CHECK(attack_timing_feasible(g));
  const auto t = attack_arrivals(g, 5);
  const auto honest = honest_arrivals(g, 5, g.prover_position_m);
  CHECK(t[0] == doctest::Approx(honest[0]));
  CHECK(t[1] == doctest::Approx(honest[1]));

  RngStream r(48, 0, StreamPurpose::kSweep);
  for (int k = 0; k < 200; ++k) {
    g.adversary0_position_m = g.v0_position_m + 1 + 198 * r.uniform();
    g.adversary1_position_m = g.prover_position_m + 1 + 198 * r.uniform();
    CHECK(attack_timing_feasible(g, k));
  }
  g = Geometry{};
  g.adversary_signal_speed_m_per_s = g.signal_speed_m_per_s / 2;
  CHECK_FALSE(attack_timing_feasible(g));
}

TEST_CASE("attack evaluation is deterministic across execution modes") {
  auto a = config_with(kThree, 49);
  a.execution = Execution::kSerial;
  auto b = a;
  b.execution = Execution::kParallel;
  const auto ra = evaluate_attack(find_strategy("independent"), 100'000, a);
  const auto rb = evaluate_attack(find_strategy("independent"), 100'000, b);
  CHECK(ra.observed.counts.n == rb.observed.counts.n);
  CHECK(to_json(ra).dump() == to_json(rb).dump());
  CHECK_THROWS_AS(evaluate_attack(find_strategy("random"), 0, a), PreconditionError);
}

TEST_CASE("unknown strategies list the available ones") {
  try {
    find_strategy("teleport");
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("intercept3") != std::string::npos);
    CHECK(std::string(e.what()).find("claim-loss") != std::string::npos);
  }
}

TEST_CASE("attack report export") {
  const auto rep = evaluate_attack(find_strategy("intercept3"), 10'000, config_with(kThree, 50));
  const auto j = to_json(rep);
  CHECK(j["strategy"] == "intercept3");
  CHECK(j["observed"]["verdict"]["outcome"] == "reject");
  for (const char* key : {"success", "success_given_parallel", "success_given_orthogonal", "conclusive_success"}) {
    CHECK(j[key]["value"].get<double>() >= 0.0);
    CHECK(j[key]["value"].get<double>() <= 1.0);
  }
}
