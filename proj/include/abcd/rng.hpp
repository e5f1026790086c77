#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace abcd {

/// Identifies one reproducible random stream. Two streams with equal
/// (master_seed, stream_index) produce identical sequences; the mapping from
/// the pair to the engine seed is a fixed integer hash, so sequences do not
/// depend on the platform's std::seed_seq or distribution implementations.
struct RngStream {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_index = 0;

  /// Child stream; a pure function of (this, k). Used to hand disjoint
  /// streams to Monte-Carlo blocks and to the parts of a generator.
  [[nodiscard]] RngStream derive(std::uint64_t k) const;

  friend bool operator==(const RngStream&, const RngStream&) = default;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Sampling engine bound to one RngStream.
class Rng {
 public:
  explicit Rng(RngStream stream);

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Standard normal (Box-Muller, caches the second variate).
  double normal();
  /// Complex Gaussian with independent N(0,1) real and imaginary parts.
  std::complex<double> complex_normal();

  [[nodiscard]] const RngStream& stream() const { return stream_; }

 private:
  RngStream stream_;
  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace abcd
