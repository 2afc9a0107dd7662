#pragma once

#include <cstdint>
#include <random>

namespace anc {

/// Reproducible random source used by every stochastic routine in the
/// library.
///
/// The engine is std::mt19937_64, whose output sequence is pinned by the C++
/// standard. Conversions to real numbers are done here rather than through
/// <random> distributions, which are implementation-defined, so a given seed
/// yields the same doubles with any standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random mantissa bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via the Box-Muller transform.
  double normal();

 private:
  std::mt19937_64 engine_;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

/// SplitMix64 finalizer; decorrelates a base seed from a stream index.
/// Used to give each Monte Carlo shard (or each randomized test scenario) its
/// own independent seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

}  // namespace anc
