#pragma once

#include <cmath>
#include <cstdint>

namespace advsim {

/// Counter-based deterministic random stream (splitmix64 finalizer applied to
/// seed + counter * golden ratio).
///
/// Unlike stateful engines, every draw is addressable: at(i) depends only on
/// (seed, i). Trials across configurations that share a seed therefore share
/// the exact per-frame uniforms, which is what makes common-random-number
/// comparisons between detection profiles valid. Output is identical on every
/// platform; see the golden-sequence test vectors.
class RngStream {
public:
  explicit RngStream(std::uint64_t seed = 0) : seed_(seed) {}

  /// Raw 64-bit word for counter i.
  std::uint64_t word_at(std::uint64_t i) const {
    std::uint64_t z = seed_ + (i + 1) * 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1) for counter i; 53-bit mantissa, exact conversion.
  double uniform_at(std::uint64_t i) const {
    return static_cast<double>(word_at(i) >> 11) * 0x1.0p-53;
  }

  /// Standard normal for counter i (Box-Muller over two indexed uniforms).
  double normal_at(std::uint64_t i) const {
    double u1 = uniform_at(2 * i);
    double u2 = uniform_at(2 * i + 1);
    if (u1 < 1e-300) u1 = 1e-300;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

  /// Sequential drawing for callers that do not need addressability.
  double next_uniform() { return uniform_at(counter_++); }

  /// Derive an independent stream; distinct ids give unrelated sequences.
  RngStream substream(std::uint64_t id) const {
    std::uint64_t z = seed_ ^ ((id + 1) * 0xD1B54A32D192ED03ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return RngStream(z ^ (z >> 31));
  }

  std::uint64_t seed() const { return seed_; }

private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

}  // namespace advsim
