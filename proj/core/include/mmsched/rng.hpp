#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace mmsched {

using Rng = std::mt19937_64;

/// Well-separated stream ids for the per-module generators derived from one
/// global seed.
namespace stream {
inline constexpr std::uint64_t kMomentsAverage = 1;
inline constexpr std::uint64_t kMomentsWorstCase = 2;
inline constexpr std::uint64_t kOracleBase = 1000;
}  // namespace stream

std::uint64_t splitmix64(std::uint64_t x);

/// Counter-based split: the generator for (seed, stream) depends only on that
/// pair, so parallel consumers stay reproducible regardless of scheduling.
Rng make_stream(std::uint64_t seed, std::uint64_t stream_id);

/// Circularly symmetric complex Gaussian draws with E|x|^2 = variance.
/// Holds its normal distribution so paired draws are not discarded.
class ComplexNormal {
 public:
  std::complex<double> operator()(Rng& rng, double variance) {
    const double scale = std::sqrt(variance / 2.0);
    const double re = normal_(rng);
    const double im = normal_(rng);
    return {scale * re, scale * im};
  }

 private:
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace mmsched
