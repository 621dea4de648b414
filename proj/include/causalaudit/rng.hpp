#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace causalaudit {

/// Deterministic random source. All variate transforms are implemented
/// here rather than through std::*_distribution so that a (seed, call
/// sequence) pair produces identical streams on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  // Independent stream derived from (seed, stream); used to keep Monte
  // Carlo results a function of (seed, n) regardless of chunking.
  static Rng derive(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform();

  // Uniform on (0, 1); never returns 0.
  double uniform_pos();

  // Standard normal (polar Box-Muller, cached second variate).
  double normal();

  // Gamma(shape, 1) for any shape > 0. Marsaglia-Tsang for shape >= 1,
  // shape augmentation below 1. Returns 0.0 when the boost factor
  // underflows (possible for tiny shapes); never NaN.
  double gamma(double shape);

  // Index i with probability weights[i] / sum(weights).
  int categorical(const std::vector<double>& weights);

  // Integer uniform on [0, bound).
  std::uint64_t below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
  bool has_cached_normal_ = false;
  double cached_normal_ = 0.0;
};

/// SplitMix64 step; used for seed derivation and sub-stream mixing.
std::uint64_t splitmix64(std::uint64_t& state);
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace causalaudit
