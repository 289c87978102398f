#pragma once

#include <iosfwd>
#include <span>

#include <json.hpp>

#include "qpv/adversary.hpp"
#include "qpv/protocol.hpp"

namespace qpv {

using Json = nlohmann::ordered_json;

Json to_json(const Estimate& e);
Json to_json(const CountsTable& c);
Json to_json(const Verdict& v);
/// Verification report, with the verdict if given.
Json to_json(const VerificationReport& r, const Verdict* verdict = nullptr);
Json to_json(const AttackReport& r);

/// Header line `round,basis,parity,pattern,z,t_v0,t_v1`.
void write_transcript_header(std::ostream& out);
/// One row per entry. `z` is `0`, `1` or `inc`; if the two verifiers heard
/// different answers it is written as `z0/z1`. Empty patterns are `-`.
void write_transcript_rows(std::ostream& out, std::span<const TranscriptEntry> entries);

}  // namespace qpv
