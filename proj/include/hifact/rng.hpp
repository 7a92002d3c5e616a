#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>

namespace hifact {

/// SplitMix64 (Steele, Lea & Flood). Every seeded path in the project
/// (splits, fixtures, weight init, epoch shuffles) draws from this generator
/// so results are reproducible bit-for-bit in any language:
///
///   state += 0x9E3779B97F4A7C15
///   z = state
///   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
///   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
///   return z ^ (z >> 31)
///
/// Derived draws:
///   uniform01()  = (next() >> 11) * 2^-53            in [0, 1)
///   below(n)     = high 64 bits of next() * n (128-bit product), in [0, n)
///   shuffle      = Fisher-Yates from the back: for i = n-1..1 swap(i, below(i+1))
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  double uniform01() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  std::uint64_t below(std::uint64_t bound) {
    const unsigned __int128 wide =
        static_cast<unsigned __int128>(next()) * bound;
    return static_cast<std::uint64_t>(wide >> 64);
  }

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(below(i));
      using std::swap;
      swap(items[i - 1], items[j]);
    }
  }

 private:
  std::uint64_t state_;
};

}  // namespace hifact
