// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

namespace rbm {

/// Seeded, forkable source of uniform deviates.
///
/// The engine is a 64-bit Mersenne twister whose seed sequence is derived
/// from a 64-bit key. Both the engine and std::seed_seq are fully specified
/// by the standard, so a given key yields the same stream on every
/// conforming platform. Only raw engine output is consumed; no std
/// distribution objects (whose algorithms are implementation-defined) are
/// used anywhere in the library.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed);

  /// Independent substream number `index`. Depends only on this stream's
  /// key and `index`, not on how many values have been drawn so far.
  [[nodiscard]] RandomStream fork(std::uint64_t index) const;

  [[nodiscard]] std::uint64_t key() const noexcept { return key_; }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1].
  double uniform_pos() { return 1.0 - uniform(); }

 private:
  std::uint64_t key_;
  std::mt19937_64 engine_;
};

[[nodiscard]] RandomStream make_stream(std::uint64_t seed);

/// Normal deviate via Box-Muller (one pair consumed per call).
double sample_gaussian(RandomStream& stream, double mean, double stddev);

/// Gamma(shape, rate) deviate (Marsaglia-Tsang; shape < 1 via boosting).
double sample_gamma(RandomStream& stream, double shape, double rate);

/// Angle to the normal with density cos(theta)/2 for a uniform deviate `u`.
[[nodiscard]] double cosine_angle_from_uniform(double u);

/// Unit vector in the upper half-space of R^{k+1} with density proportional
/// to its normal component. The normal component is stored last.
/// Supported: k = 1 (a planar direction) and k = 2.
std::vector<double> sample_cosine_direction(RandomStream& stream, int k);

/// Uniform point on the unit sphere S^{m-1} in R^m (m >= 1).
std::vector<double> sample_uniform_direction(RandomStream& stream, int m);

/// Histogram with fixed bin edges; masses are normalized at construction.
class EmpiricalDistribution {
 public:
  /// `weights` are nonnegative with a positive total; they are normalized.
  EmpiricalDistribution(std::vector<double> edges, std::vector<double> weights);

  /// Histogram of `samples`. Samples outside the edge range are counted in
  /// the first or last bin.
  static EmpiricalDistribution from_samples(std::span<const double> samples,
                                            std::vector<double> edges);

  [[nodiscard]] static std::vector<double> uniform_edges(double lo, double hi,
                                                         std::size_t bins);

  [[nodiscard]] const std::vector<double>& edges() const noexcept { return edges_; }
  [[nodiscard]] const std::vector<double>& masses() const noexcept { return masses_; }
  [[nodiscard]] std::size_t bins() const noexcept { return masses_.size(); }
  /// Mass of bin i divided by its width.
  [[nodiscard]] double density(std::size_t i) const;

 private:
  std::vector<double> edges_;
  std::vector<double> masses_;
};

/// Half the l1 distance between two histograms on identical edges.
double tv_distance(const EmpiricalDistribution& p, const EmpiricalDistribution& q);

/// Kolmogorov-Smirnov statistic sup|F_n - F|.
double ks_distance(std::span<const double> samples,
                   const std::function<double(double)>& cdf);

}  // namespace rbm
