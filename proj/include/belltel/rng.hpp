#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace belltel {

/// SplitMix64 finalizer; used to decorrelate (seed, stream) pairs.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seeded random stream that can be split into named sub-streams.
///
/// A sub-stream depends only on the parent's seed and the stream id, never on
/// how much of the parent has been consumed, so work keyed by trial or
/// telegraph index draws the same numbers whether it runs serially or on a
/// thread pool.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(mix64(seed)) {}

  [[nodiscard]] Rng stream(std::uint64_t id) const {
    return Rng(mix64(seed_ ^ mix64(id + 0x632be59bd9b4e019ULL)));
  }

  [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  /// Uniform double on [0, 1) with 53 random bits. Bit-exact across
  /// standard libraries, unlike std::uniform_real_distribution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform index on [0, n) by rejection (unbiased).
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t r;
    do {
      r = engine_();
    } while (r >= limit);
    return r % n;
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace belltel
