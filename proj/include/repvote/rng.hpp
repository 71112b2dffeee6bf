#pragma once

#include <cstdint>
#include <limits>

namespace repvote {

/// SplitMix64 finalizer: a bijective 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Order-sensitive combination of a key with one more word.
constexpr std::uint64_t hash_combine(std::uint64_t key, std::uint64_t word) noexcept {
  return mix64(key ^ mix64(word + 0x632BE59BD9B4E019ull));
}

constexpr std::uint64_t hash_words(std::uint64_t a, std::uint64_t b) noexcept {
  return hash_combine(mix64(a), b);
}

constexpr std::uint64_t hash_words(std::uint64_t a, std::uint64_t b, std::uint64_t c) noexcept {
  return hash_combine(hash_words(a, b), c);
}

/// Top 53 bits of a word mapped to [0, 1).
constexpr double unit_interval(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Counter-based generator: the stream is a pure function of
/// (seed, stream, counter), so trial i draws the same numbers no matter
/// which worker runs it or in which order. Satisfies
/// UniformRandomBitGenerator so it can drive std::shuffle and friends.
class KeyedRng {
 public:
  using result_type = std::uint64_t;

  KeyedRng(std::uint64_t seed, std::uint64_t stream) noexcept
      : key_(hash_words(seed, stream)) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept { return mix64(key_ + 0x9E3779B97F4A7C15ull * ++counter_); }

  double uniform() noexcept { return unit_interval((*this)()); }

  /// Unbiased integer in [0, bound) by rejection.
  std::uint64_t below(std::uint64_t bound) noexcept {
    if (bound <= 1) return 0;
    const std::uint64_t limit = max() - max() % bound;
    std::uint64_t x;
    do {
      x = (*this)();
    } while (x >= limit);
    return x % bound;
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Stream identifiers keep independent uses of one user seed apart.
namespace streams {
inline constexpr std::uint64_t kCandidates = 0x43414e44;   // candidate draws
inline constexpr std::uint64_t kSpaceGen = 0x53504143;     // random_space
inline constexpr std::uint64_t kValidation = 0x56414c49;   // sampled triples
inline constexpr std::uint64_t kInstance = 0x494e5354;     // adversarial metric
inline constexpr std::uint64_t kOracle = 0x4f524143;       // oracle sweep instances
}  // namespace streams

}  // namespace repvote
