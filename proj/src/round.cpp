#include "qpv/round.hpp"

#include <cmath>

namespace qpv {

std::string_view to_string(Basis b) noexcept {
  switch (b) {
    case Basis::kHV: return "HV";
    case Basis::kDA: return "DA";
    case Basis::kRL: return "RL";
  }
  return "?";
}

std::string_view to_string(Parity p) noexcept {
  return p == Parity::kParallel ? "parallel" : "orthogonal";
}

Basis basis_from_string(std::string_view s) {
  for (auto b : kAllBases) {
    if (to_string(b) == s) return b;
  }
  throw ConfigError("bases", "unknown basis '" + std::string(s) + "' (expected HV, DA or RL)");
}

PolarizationQubit basis_state(Basis b, int index) {
  const double s = 1.0 / std::sqrt(2.0);
  const double sign = index == 0 ? 1.0 : -1.0;
  switch (b) {
    case Basis::kHV:
      return index == 0 ? PolarizationQubit::horizontal() : PolarizationQubit::vertical();
    case Basis::kDA:
      return {s, sign * s};
    case Basis::kRL:
      return {s, std::complex<double>(0.0, -sign * s)};
  }
  return {};
}

RoundSpec RoundSpec::make(Basis basis, Parity parity, int state0) {
  RoundSpec r;
  r.basis = basis;
  r.parity = parity;
  r.state0 = state0;
  r.psi0 = basis_state(basis, state0);
  r.psi1 = basis_state(basis, parity == Parity::kParallel ? state0 : 1 - state0);
  return r;
}

RoundSpec draw_round(RngStream& rng, std::span<const Basis> enabled) {
  if (enabled.empty()) throw ConfigError("bases", "enabled basis set is empty");
  const Basis basis = enabled[rng.below(static_cast<std::uint32_t>(enabled.size()))];
  const Parity parity = rng.bernoulli(0.5) ? Parity::kParallel : Parity::kOrthogonal;
  const int state0 = static_cast<int>(rng.below(2));
  return RoundSpec::make(basis, parity, state0);
}

}  // namespace qpv
