#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace snsmq {

/// SplitMix64 finalizer. A bijection on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

/// Counter-based seed derivation: mix64(key + golden * (counter + 1)).
/// For a fixed key, distinct counters map to distinct seeds.
constexpr std::uint64_t derive_seed(std::uint64_t key, std::uint64_t counter) noexcept {
  return mix64(key + 0x9e3779b97f4a7c15ULL * (counter + 1));
}

/// Folds a sequence of tags into one seed, one derive_seed per tag.
inline std::uint64_t derive_seed(std::uint64_t key, std::initializer_list<std::uint64_t> tags) noexcept {
  for (auto t : tags) key = derive_seed(key, t);
  return key;
}

/// Random stream used throughout the simulator.
///
/// Wraps std::mt19937_64, whose output sequence is fixed by the standard, and
/// converts words to doubles / bounded integers by hand so results do not
/// depend on the standard library's distribution implementations.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }

  result_type operator()() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// True with probability p. p <= 0 never fires, p >= 1 always fires;
  /// one word is consumed either way so stream positions stay aligned.
  bool bernoulli(double p) { return uniform() < p; }

  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n) {
    // rejection on the largest multiple of n
    const std::uint64_t limit = max() - max() % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace snsmq
