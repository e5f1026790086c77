#pragma once

// Block-structured Monte Carlo. Samples are split into a fixed number of
// blocks; block b draws from stream.derive(b). Results depend on the block
// count only, never on the number of OpenMP threads that ran them.

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "abcd/rng.hpp"

namespace abcd::mc {

enum class Execution { Serial, Parallel };

inline constexpr std::size_t kDefaultBlocks = 64;

/// Running mean and spread of complex samples (Welford, mergeable).
struct MeanAccumulator {
  std::uint64_t count = 0;
  std::complex<double> mean = 0.0;
  double m2 = 0.0;  // sum |x - mean|^2

  void add(std::complex<double> x) {
    ++count;
    const std::complex<double> delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += std::real(std::conj(delta) * (x - mean));
  }

  void merge(const MeanAccumulator& o) {
    if (o.count == 0) return;
    if (count == 0) {
      *this = o;
      return;
    }
    const double na = static_cast<double>(count);
    const double nb = static_cast<double>(o.count);
    const std::complex<double> delta = o.mean - mean;
    const double n = na + nb;
    mean += delta * (nb / n);
    m2 += o.m2 + std::norm(delta) * na * nb / n;
    count += o.count;
  }

  [[nodiscard]] double variance() const {
    return count > 1 ? m2 / static_cast<double>(count - 1) : 0.0;
  }
  /// Standard error of the complex mean, sqrt(E|x - mu|^2 / count).
  [[nodiscard]] double std_error() const {
    return count > 0 ? std::sqrt(variance() / static_cast<double>(count)) : 0.0;
  }
};

struct Estimate {
  std::complex<double> value = 0.0;
  double std_error = 0.0;
  std::uint64_t samples = 0;
};

inline Estimate to_estimate(const MeanAccumulator& acc) {
  return {acc.mean, acc.std_error(), acc.count};
}

inline std::uint64_t block_size(std::uint64_t samples, std::size_t blocks, std::size_t b) {
  return samples / blocks + (b < samples % blocks ? 1 : 0);
}

/// Runs fn(rng, count, block_index) -> Acc for every block and returns the
/// per-block results in block order.
template <class Acc, class BlockFn>
std::vector<Acc> run_blocks(std::uint64_t samples, std::size_t blocks, RngStream stream,
                            BlockFn&& fn, Execution exec = Execution::Parallel) {
  if (blocks == 0) blocks = 1;
  std::vector<Acc> out(blocks);
  const auto nb = static_cast<std::ptrdiff_t>(blocks);
  if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t b = 0; b < nb; ++b) {
      const auto ub = static_cast<std::size_t>(b);
      Rng rng(stream.derive(ub));
      out[ub] = fn(rng, block_size(samples, blocks, ub), ub);
    }
  } else {
    for (std::size_t b = 0; b < blocks; ++b) {
      Rng rng(stream.derive(b));
      out[b] = fn(rng, block_size(samples, blocks, b), b);
    }
  }
  return out;
}

}  // namespace abcd::mc
