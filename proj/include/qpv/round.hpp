#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "qpv/optics.hpp"
#include "qpv/rng.hpp"

namespace qpv {

/// The three mutually unbiased polarization bases.
enum class Basis : std::uint8_t { kHV = 0, kDA = 1, kRL = 2 };

enum class Parity : std::uint8_t { kParallel = 0, kOrthogonal = 1 };

inline constexpr std::array<Basis, 3> kAllBases{Basis::kHV, Basis::kDA, Basis::kRL};

std::string_view to_string(Basis b) noexcept;
std::string_view to_string(Parity p) noexcept;
Basis basis_from_string(std::string_view s);

/// State `index` (0 or 1) of a basis: H/V, D/A, R/L.
PolarizationQubit basis_state(Basis b, int index);

/// One protocol round as prepared by the verifiers.
struct RoundSpec {
  Basis basis = Basis::kHV;
  Parity parity = Parity::kParallel;
  int state0 = 0;  ///< index of the state sent by V0
  PolarizationQubit psi0;
  PolarizationQubit psi1;

  static RoundSpec make(Basis basis, Parity parity, int state0 = 0);
  double overlap() const { return polarization_overlap(psi0, psi1); }
};

/// Basis uniform over `enabled`, parity a fair coin, and which of the basis
/// states V0 sends another fair coin. Throws ConfigError if `enabled` is empty.
RoundSpec draw_round(RngStream& rng, std::span<const Basis> enabled);

}  // namespace qpv
