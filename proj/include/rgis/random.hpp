#pragma once

// Counter-based random streams.
//
// Every random quantity in the library is drawn from a Stream whose key is
// derived from a user seed and an integer index:
//
//   key(seed, index) = mix(seed ^ mix(index + 0x9E3779B97F4A7C15))
//   draw_c           = mix(key + c * 0x9E3779B97F4A7C15),   c = 1, 2, ...
//
// where mix is the SplitMix64 finaliser. Trial t of an ensemble uses
// Stream(derive_seed(seed, t)), so any single trial can be replayed in
// isolation and results do not depend on scheduling.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "rgis/error.hpp"

namespace rgis {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return mix64(seed ^ mix64(index + kGolden));
}

/// Reserved stream indices for auxiliary draws that must not collide with trial streams.
namespace streams {
inline constexpr std::uint64_t kPairSample = 0xFFFF'FFFF'FFFF'0001ULL;
inline constexpr std::uint64_t kTracked = 0xFFFF'FFFF'FFFF'0002ULL;
inline constexpr std::uint64_t kHost = 0xFFFF'FFFF'FFFF'0003ULL;
inline constexpr std::uint64_t kUniformSubsets = 0xFFFF'FFFF'FFFF'0004ULL;
inline constexpr std::uint64_t kPairs = 0xFFFF'FFFF'FFFF'0005ULL;
}  // namespace streams

class Stream {
 public:
  using result_type = std::uint64_t;

  explicit Stream(std::uint64_t key = 0) : key_(key) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    ++counter_;
    return mix64(key_ + counter_ * kGolden);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  /// Uniform integer in [0, bound), bound >= 1 (Lemire's multiply-shift with rejection).
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) throw DomainError("Stream::below: empty range");
    unsigned __int128 m = static_cast<unsigned __int128>((*this)()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        m = static_cast<unsigned __int128>((*this)()) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  std::uint64_t key() const noexcept { return key_; }
  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Uniform k-subset of {0..n-1} (Floyd's algorithm), returned sorted.
inline std::vector<std::uint32_t> sample_subset(std::size_t n, std::size_t k, Stream& rng) {
  if (k > n) throw DomainError("sample_subset: k exceeds n");
  std::vector<char> taken(n, 0);
  for (std::size_t j = n - k; j < n; ++j) {
    const auto t = static_cast<std::size_t>(rng.below(j + 1));
    if (taken[t])
      taken[j] = 1;
    else
      taken[t] = 1;
  }
  std::vector<std::uint32_t> out;
  out.reserve(k);
  for (std::size_t i = 0; i < n; ++i)
    if (taken[i]) out.push_back(static_cast<std::uint32_t>(i));
  return out;
}

}  // namespace rgis
