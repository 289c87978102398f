#include "qpv/report_io.hpp"

#include <cstdio>
#include <ostream>

namespace qpv {

Json to_json(const Estimate& e) {
  return Json{{"value", e.value}, {"lower", e.lower}, {"upper", e.upper},
              {"successes", e.successes}, {"trials", e.trials}};
}

Json to_json(const CountsTable& c) {
  Json cc = Json::object();
  for (std::size_t i = 0; i < kDetectorPairs.size(); ++i) cc[kDetectorPairs[i].label()] = c.coincidences[i];
  Json sc = Json::object();
  for (auto d : kDetectors) sc[std::string(1, label(d))] = c.sc(d);
  return Json{{"coincidences", cc}, {"singles", sc}, {"duration_s", c.duration_s}};
}

Json to_json(const Verdict& v) {
  Json failed = Json::array();
  for (auto c : v.failed) failed.push_back(std::string(to_string(c)));
  return Json{{"outcome", std::string(to_string(v.outcome))}, {"failed_clauses", failed}, {"reasons", v.reasons}};
}

Json to_json(const VerificationReport& r, const Verdict* verdict) {
  Json counts = Json::object();
  for (auto p : {Parity::kParallel, Parity::kOrthogonal}) {
    counts[std::string(to_string(p))] = Json{{"0", r.counts.count(p, ProverAnswer::kZero)},
                                             {"1", r.counts.count(p, ProverAnswer::kOne)},
                                             {"inc", r.counts.count(p, ProverAnswer::kInconclusive)}};
  }
  Json j{{"rounds", r.rounds},
         {"round_check_failures", r.round_check_failures},
         {"confidence_z", r.confidence_z},
         {"answer_counts", counts},
         {"p0_given_parallel_conclusive", to_json(r.p0_parallel_conclusive)},
         {"p1_given_orthogonal_conclusive", to_json(r.p1_perp_conclusive)},
         {"inconclusive_given_parallel", to_json(r.inconclusive_parallel)},
         {"inconclusive_given_orthogonal", to_json(r.inconclusive_perp)},
         {"pooled_correctness", to_json(r.pooled_correctness)},
         {"secure_against_locc", r.secure_against_locc},
         {"coincidences_parallel", to_json(r.coincidences_parallel)},
         {"coincidences_orthogonal", to_json(r.coincidences_perp)}};
  if (verdict) j["verdict"] = to_json(*verdict);
  return j;
}

Json to_json(const AttackReport& r) {
  return Json{{"strategy", r.strategy},
              {"enabled_bases", r.enabled_bases},
              {"rounds", r.rounds},
              {"success", to_json(r.success)},
              {"success_given_parallel", to_json(r.success_by_parity[0])},
              {"success_given_orthogonal", to_json(r.success_by_parity[1])},
              {"conclusive_success", to_json(r.conclusive_success)},
              {"analytic_bound", r.analytic_bound},
              {"exceeds_locc_bound", r.exceeds_locc_bound},
              {"timing_feasible", r.timing_feasible},
              {"verify_accepts", r.verify_accepts()},
              {"observed", to_json(r.observed, &r.verdict)}};
}

void write_transcript_header(std::ostream& out) { out << "round,basis,parity,pattern,z,t_v0,t_v1\n"; }

void write_transcript_rows(std::ostream& out, std::span<const TranscriptEntry> entries) {
  char t0[32], t1[32];
  for (const auto& e : entries) {
    std::snprintf(t0, sizeof t0, "%.17g", e.t_v0);
    std::snprintf(t1, sizeof t1, "%.17g", e.t_v1);
    out << e.round << ',' << to_string(e.spec.basis) << ',' << to_string(e.spec.parity) << ','
        << e.pattern.to_string() << ',' << to_string(e.answer_v0);
    if (e.answer_v1 != e.answer_v0) out << '/' << to_string(e.answer_v1);
    out << ',' << t0 << ',' << t1 << '\n';
  }
}

}  // namespace qpv
