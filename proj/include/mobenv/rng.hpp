#pragma once

#include <cstdint>
#include <random>

namespace mobenv {

/// Seeded random stream. Every simulator component owns its own stream so that
/// toggling one source of randomness never perturbs another.
///
/// All variates are produced from raw 64-bit engine output with fixed
/// transforms, so sequences are bit-identical across runs and standard
/// library implementations.
class RngStream {
 public:
  RngStream() : engine_(0) {}
  explicit RngStream(std::uint64_t seed) : engine_(seed) {}

  /// Independent stream for (seed, stream_id), mixed through splitmix64.
  static RngStream derive(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on [0, 1).
  double uniform();
  /// Uniform on (0, 1); safe as a log() argument.
  double uniform_open();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Unbiased integer in [0, n). n must be positive.
  std::uint64_t uniform_index(std::uint64_t n);
  /// Standard normal via Box-Muller (cosine branch only, no cached state).
  double normal();

  friend bool operator==(const RngStream&, const RngStream&) = default;

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace mobenv
