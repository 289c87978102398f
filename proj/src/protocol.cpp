#include "qpv/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qpv {

std::string_view to_string(ProverAnswer a) noexcept {
  switch (a) {
    case ProverAnswer::kZero: return "0";
    case ProverAnswer::kOne: return "1";
    case ProverAnswer::kInconclusive: return "inc";
  }
  return "?";
}

ProverAnswer answer_from_pattern(ClickPattern pattern) noexcept {
  static constexpr ClickPattern kAB{Detector::kA, Detector::kB};
  static constexpr ClickPattern kCD{Detector::kC, Detector::kD};
  if (pattern.size() != 2) return ProverAnswer::kInconclusive;
  if (pattern == kAB || pattern == kCD) return ProverAnswer::kZero;
  return ProverAnswer::kOne;
}

AnswerDistribution theoretical_distribution(Parity p) {
  if (p == Parity::kParallel) return {0.5, 0.0, 0.5};
  return {0.25, 0.5, 0.25};
}

AnswerDistribution answer_distribution(const OutcomeDistribution& d) {
  AnswerDistribution out{};
  for (std::uint8_t bits = 0; bits < ClickPattern::kCount; ++bits) {
    out[static_cast<std::size_t>(answer_from_pattern(ClickPattern(bits)))] += d.p[bits];
  }
  return out;
}

AnswerDistribution honest_answer_distribution(const SourceParams& source,
                                              const SetupConfig& setup, Parity parity) {
  const OpticsEngine engine(source, setup.network());
  return answer_distribution(engine.exact(parity == Parity::kParallel ? 1.0 : 0.0));
}

// ---------------------------------------------------------------- timing

double round_reference_time(const Geometry& g, std::uint64_t round) noexcept {
  return static_cast<double>(round) * g.round_period_s;
}

SpaceTimePoint verifier_emission(const Geometry& g, Arm arm, std::uint64_t round) noexcept {
  const double t = round_reference_time(g, round);
  const double x = arm == Arm::kV0 ? g.v0_position_m : g.v1_position_m;
  return {x, t - std::abs(g.prover_position_m - x) / g.signal_speed_m_per_s};
}

std::array<double, 2> honest_arrivals(const Geometry& g, std::uint64_t round, double prover_x) {
  const double c = g.signal_speed_m_per_s;
  const auto e0 = verifier_emission(g, Arm::kV0, round);
  const auto e1 = verifier_emission(g, Arm::kV1, round);
  const double received = std::max(e0.t_s + std::abs(prover_x - e0.x_m) / c,
                                   e1.t_s + std::abs(e1.x_m - prover_x) / c);
  const double sent = received + g.processing_time_s;
  return {sent + std::abs(prover_x - g.v0_position_m) / c,
          sent + std::abs(g.v1_position_m - prover_x) / c};
}

std::array<double, 2> arrival_deadlines(const Geometry& g, std::uint64_t round,
                                        double tolerance_s) {
  auto t = honest_arrivals(g, round, g.prover_position_m);
  t[0] += tolerance_s;
  t[1] += tolerance_s;
  return t;
}

bool round_check(const TranscriptEntry& e, const Geometry& g, double tolerance_s) {
  if (e.answer_v0 != e.answer_v1) return false;
  const auto deadline = arrival_deadlines(g, e.round, tolerance_s);
  return e.t_v0 <= deadline[0] && e.t_v1 <= deadline[1];
}

// ---------------------------------------------------------------- tallies

void AnswerCounts::merge(const AnswerCounts& o) noexcept {
  for (std::size_t p = 0; p < 2; ++p)
    for (std::size_t a = 0; a < 3; ++a) n[p][a] += o.n[p][a];
}

std::uint64_t AnswerCounts::total(Parity p) const noexcept {
  const auto& row = n[static_cast<std::size_t>(p)];
  return row[0] + row[1] + row[2];
}

AnswerDistribution VerificationReport::distribution(Parity p) const {
  const double total = static_cast<double>(counts.total(p));
  AnswerDistribution d{};
  if (total == 0) return d;
  for (std::size_t a = 0; a < 3; ++a) {
    d[a] = static_cast<double>(counts.n[static_cast<std::size_t>(p)][a]) / total;
  }
  return d;
}

VerificationReport summarize(const AnswerCounts& counts, double z, double locc_bound) {
  VerificationReport r;
  r.counts = counts;
  r.rounds = counts.total();
  r.confidence_z = z;
  const auto par = Parity::kParallel;
  const auto perp = Parity::kOrthogonal;
  r.p0_parallel_conclusive =
      wilson_interval(counts.count(par, ProverAnswer::kZero), counts.conclusive(par), z);
  r.p1_perp_conclusive =
      wilson_interval(counts.count(perp, ProverAnswer::kOne), counts.conclusive(perp), z);
  r.inconclusive_parallel =
      wilson_interval(counts.count(par, ProverAnswer::kInconclusive), counts.total(par), z);
  r.inconclusive_perp =
      wilson_interval(counts.count(perp, ProverAnswer::kInconclusive), counts.total(perp), z);

  const auto& a = r.p0_parallel_conclusive;
  const auto& b = r.p1_perp_conclusive;
  r.pooled_correctness = {0.5 * (a.value + b.value), 0.5 * (a.lower + b.lower),
                          0.5 * (a.upper + b.upper), a.successes + b.successes,
                          a.trials + b.trials};
  r.secure_against_locc = a.trials > 0 && b.trials > 0 && r.pooled_correctness.lower > locc_bound;
  return r;
}

// ---------------------------------------------------------------- simulation

TranscriptEntry simulate_round(const OpticsEngine& engine, const Geometry& geometry,
                               std::span<const Basis> bases, std::uint64_t master_seed,
                               std::uint64_t round, double prover_x) {
  RngStream verifier(master_seed, round, StreamPurpose::kVerifier);
  RngStream prover(master_seed, round, StreamPurpose::kProver);
  TranscriptEntry e;
  e.round = round;
  e.spec = draw_round(verifier, bases);
  e.pattern = engine.sample(e.spec.overlap(), prover);
  e.answer_v0 = e.answer_v1 = answer_from_pattern(e.pattern);
  const auto t = honest_arrivals(geometry, round, prover_x);
  e.t_v0 = t[0];
  e.t_v1 = t[1];
  return e;
}

ProtocolRun run_protocol(std::uint64_t n, const SourceParams& source, const SetupConfig& setup,
                         std::uint64_t master_seed, const ProtocolOptions& options) {
  if (options.enabled_bases.empty()) throw ConfigError("bases", "enabled basis set is empty");
  if (options.block_size == 0) throw PreconditionError("block_size must be positive");
  source.validate();
  setup.validate();

  const OpticsEngine engine(source, setup.network());
  const Geometry& geometry = setup.geometry;
  const double prover_x = std::isnan(options.actual_prover_position_m)
                              ? geometry.prover_position_m
                              : options.actual_prover_position_m;
  const std::span<const Basis> bases(options.enabled_bases);

  ProtocolRun run;
  if (options.retain_transcript) run.transcript.reserve(static_cast<std::size_t>(n));

  AnswerCounts counts;
  CountsTable cc_par, cc_perp;
  std::uint64_t failures = 0;
  std::vector<TranscriptEntry> block;

  for (std::uint64_t first = 0; first < n; first += options.block_size) {
    const auto len = static_cast<std::size_t>(std::min(options.block_size, n - first));
    block.resize(len);
    fill_indexed(options.execution, first, std::span<TranscriptEntry>(block),
                 [&](std::uint64_t k) {
                   return simulate_round(engine, geometry, bases, master_seed, k, prover_x);
                 });
    for (const auto& e : block) {
      counts.add(e.spec.parity, e.answer_v0);
      (e.spec.parity == Parity::kParallel ? cc_par : cc_perp).add(e.pattern);
      if (!round_check(e, geometry, geometry.tolerance_s)) ++failures;
    }
    if (options.sink) options.sink(block);
    if (options.retain_transcript) run.transcript.insert(run.transcript.end(), block.begin(), block.end());
  }

  run.report = summarize(counts, options.confidence_z);
  run.report.round_check_failures = failures;
  cc_par.duration_s = cc_perp.duration_s = static_cast<double>(n) * geometry.round_period_s;
  run.report.coincidences_parallel = cc_par;
  run.report.coincidences_perp = cc_perp;
  return run;
}

// ---------------------------------------------------------------- verdict

std::string_view to_string(VerdictOutcome v) noexcept {
  switch (v) {
    case VerdictOutcome::kAccept: return "accept";
    case VerdictOutcome::kReject: return "reject";
    case VerdictOutcome::kIndeterminate: return "indeterminate";
  }
  return "?";
}

std::string_view to_string(VerifyClause c) noexcept {
  switch (c) {
    case VerifyClause::kRoundChecks: return "round_checks";
    case VerifyClause::kParallelCorrectness: return "parallel_correctness";
    case VerifyClause::kPerpCorrectness: return "orthogonal_correctness";
    case VerifyClause::kInconclusiveRates: return "inconclusive_rates";
  }
  return "?";
}

VerifyPolicy VerifyPolicy::calibrated(const SourceParams& source, const SetupConfig& setup) {
  const auto par = honest_answer_distribution(source, setup, Parity::kParallel);
  const auto perp = honest_answer_distribution(source, setup, Parity::kOrthogonal);
  VerifyPolicy p;
  const double perp_conclusive = perp[0] + perp[1];
  p.expected_p1_perp_conclusive = perp_conclusive > 0 ? perp[1] / perp_conclusive : 0.0;
  p.expected_inconclusive_parallel = par[2];
  p.expected_inconclusive_perp = perp[2];
  return p;
}

bool Verdict::failed_clause(VerifyClause c) const noexcept {
  return std::find(failed.begin(), failed.end(), c) != failed.end();
}

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(4);
  os << x;
  return os.str();
}

// Distance from x to the interval [lo, hi]; zero if inside.
double gap(double x, double lo, double hi) { return x < lo ? lo - x : (x > hi ? x - hi : 0.0); }

}  // namespace

Verdict verify(const VerificationReport& r, const VerifyPolicy& policy) {
  Verdict v;
  auto fail = [&](VerifyClause c, std::string why) {
    v.failed.push_back(c);
    v.reasons.push_back(std::move(why));
  };

  if (r.round_check_failures > 0) {
    fail(VerifyClause::kRoundChecks,
         std::to_string(r.round_check_failures) + " round(s) late or inconsistent");
  }
  const auto conc_par = r.counts.conclusive(Parity::kParallel);
  const auto conc_perp = r.counts.conclusive(Parity::kOrthogonal);
  if (v.failed.empty() && (conc_par < policy.min_conclusive || conc_perp < policy.min_conclusive)) {
    v.outcome = VerdictOutcome::kIndeterminate;
    v.reasons.push_back("too few conclusive rounds (" + std::to_string(conc_par) + " parallel, " +
                        std::to_string(conc_perp) + " orthogonal; need " +
                        std::to_string(policy.min_conclusive) + ")");
    return v;
  }

  const auto& p0 = r.p0_parallel_conclusive;
  if (!(p0.lower > policy.locc_bound)) {
    fail(VerifyClause::kParallelCorrectness,
         "P(0|parallel,conclusive) lower bound " + fmt(p0.lower) + " <= " + fmt(policy.locc_bound));
  }
  const auto& p1 = r.p1_perp_conclusive;
  if (gap(policy.expected_p1_perp_conclusive, p1.lower, p1.upper) > policy.p1_perp_margin) {
    fail(VerifyClause::kPerpCorrectness,
         "P(1|orthogonal,conclusive) interval [" + fmt(p1.lower) + ", " + fmt(p1.upper) +
             "] is not within " + fmt(policy.p1_perp_margin) + " of " +
             fmt(policy.expected_p1_perp_conclusive));
  }
  const double d_par = gap(policy.expected_inconclusive_parallel, r.inconclusive_parallel.lower,
                           r.inconclusive_parallel.upper);
  const double d_perp = gap(policy.expected_inconclusive_perp, r.inconclusive_perp.lower,
                            r.inconclusive_perp.upper);
  if (d_par > policy.inconclusive_band || d_perp > policy.inconclusive_band) {
    fail(VerifyClause::kInconclusiveRates,
         "inconclusive rates " + fmt(r.inconclusive_parallel.value) + " (parallel) and " +
             fmt(r.inconclusive_perp.value) + " (orthogonal) outside band " +
             fmt(policy.inconclusive_band) + " around " +
             fmt(policy.expected_inconclusive_parallel) + " / " +
             fmt(policy.expected_inconclusive_perp));
  }
  v.outcome = v.failed.empty() ? VerdictOutcome::kAccept : VerdictOutcome::kReject;
  return v;
}

}  // namespace qpv
