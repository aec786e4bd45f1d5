#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>

namespace uvsram {

/// SplitMix64 finalizer (Steele, Lea, Flood 2014). Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Portable counter-based generator: SplitMix64.
///
/// Output i of a stream is mix64(key + (i + 1) * golden), so a stream is
/// fully determined by its 64-bit key. Keys for sub-streams are derived with
/// `split`, which lets every (corpus seed, sram index, purpose) triple own an
/// independent sequence without sharing state between threads.
///
/// All distribution helpers below are defined bit-exactly here; the standard
/// library distributions are implementation-defined and never used.
class Rng {
 public:
  using result_type = std::uint64_t;

  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

  explicit constexpr Rng(std::uint64_t key) noexcept : state_(key) {}

  /// Stream keyed by (seed, a, b). Distinct tuples give unrelated streams.
  static constexpr Rng stream(std::uint64_t seed, std::uint64_t a,
                              std::uint64_t b = 0) noexcept {
    return Rng(mix64(mix64(seed ^ 0x5851f42d4c957f2dULL) ^ mix64(a + kGolden)) ^
               mix64(b * kGolden + 0x2545f4914f6cdd1dULL));
  }

  /// Child stream; does not advance the parent.
  constexpr Rng split(std::uint64_t tag) const noexcept {
    return Rng(mix64(state_ ^ mix64(tag + 0x632be59bd9b4e019ULL)));
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  constexpr result_type operator()() noexcept { return next(); }

  constexpr std::uint64_t next() noexcept {
    state_ += kGolden;
    return mix64(state_);
  }

  /// Uniform integer in [0, bound) by rejection on the top of the range.
  constexpr std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("Rng::below: empty range");
    const std::uint64_t limit = max() - (max() % bound + 1) % bound;
    std::uint64_t x = next();
    while (x > limit) x = next();
    return x % bound;
  }

  /// Uniform double in [0, 1) with 53 random bits.
  constexpr double uniform() noexcept {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  constexpr bool bernoulli(double p) noexcept { return uniform() < p; }

 private:
  std::uint64_t state_;
};

}  // namespace uvsram
