#pragma once

#include <cstdint>
#include <limits>

namespace dchaos {

/// SplitMix64 (Steele, Lea, Flood 2014). Every draw used by the library goes
/// through the helpers below so sample streams are bit-identical across
/// compilers; the std:: distributions are implementation-defined.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Independent child stream; the parent advances by one draw.
  SplitMix64 split() noexcept { return SplitMix64((*this)() ^ 0x6A09E667F3BCC909ull); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform on [0, bound), bound > 0. Rejection keeps it exactly uniform.
  std::uint64_t below(std::uint64_t bound) noexcept {
    const std::uint64_t limit = max() - max() % bound;
    std::uint64_t x;
    do {
      x = (*this)();
    } while (x >= limit);
    return x % bound;
  }

  bool bit() noexcept { return ((*this)() >> 63) != 0; }

 private:
  std::uint64_t state_;
};

}  // namespace dchaos
