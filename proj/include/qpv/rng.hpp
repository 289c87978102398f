#pragma once

#include <array>
#include <cstdint>

namespace qpv {

/// Philox4x32-10 block function (Salmon et al., SC'11).
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter generate(Counter ctr, Key key) noexcept {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kWeylA;
        key[1] += kWeylB;
      }
      ctr = single_round(ctr, key);
    }
    return ctr;
  }

 private:
  static constexpr std::uint32_t kMulA = 0xD2511F53u;
  static constexpr std::uint32_t kMulB = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeylA = 0x9E3779B9u;
  static constexpr std::uint32_t kWeylB = 0xBB67AE85u;

  static Counter single_round(const Counter& c, const Key& k) noexcept {
    const std::uint64_t p0 = std::uint64_t{kMulA} * c[0];
    const std::uint64_t p1 = std::uint64_t{kMulB} * c[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
  }
};

/// Independent substreams within one round.
enum class StreamPurpose : std::uint32_t {
  kVerifier = 1,
  kProver = 2,
  kAdversary = 3,
  kSweep = 4,
};

/// Deterministic random stream keyed by (master seed, index, purpose).
///
/// Every draw is a pure function of the key and the draw position, so two
/// streams with equal keys produce identical sequences no matter which thread
/// owns them or in what order rounds are executed.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t index,
            StreamPurpose purpose) noexcept
      : key_{static_cast<std::uint32_t>(master_seed),
             static_cast<std::uint32_t>(master_seed >> 32)},
        index_(index),
        purpose_(static_cast<std::uint32_t>(purpose)) {}

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) noexcept { return uniform() < p; }

  /// Uniform integer in [0, n); n > 0.
  std::uint32_t below(std::uint32_t n) noexcept {
    return static_cast<std::uint32_t>(uniform() * n);
  }

  std::uint64_t next_u64() noexcept {
    if (lane_ == 2) refill();
    return buffer_[lane_++];
  }

 private:
  void refill() noexcept {
    const Philox4x32::Counter ctr{block_++, purpose_,
                                  static_cast<std::uint32_t>(index_),
                                  static_cast<std::uint32_t>(index_ >> 32)};
    const auto out = Philox4x32::generate(ctr, key_);
    buffer_[0] = (std::uint64_t{out[1]} << 32) | out[0];
    buffer_[1] = (std::uint64_t{out[3]} << 32) | out[2];
    lane_ = 0;
  }

  Philox4x32::Key key_;
  std::uint64_t index_;
  std::uint32_t purpose_;
  std::uint32_t block_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int lane_ = 2;
};

}  // namespace qpv
