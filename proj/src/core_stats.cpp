// SPDX-License-Identifier: Apache-2.0
#include "rbm/core_stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "rbm/errors.hpp"
#include "rbm/simd.hpp"

namespace rbm {

namespace {

// splitmix64 finalizer
std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::mt19937_64 seeded_engine(std::uint64_t key) {
  std::seed_seq seq{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32),
                    0x52424dU};
  return std::mt19937_64(seq);
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed) : key_(seed), engine_(seeded_engine(seed)) {}

RandomStream RandomStream::fork(std::uint64_t index) const {
  return RandomStream(mix64(key_ ^ mix64(index + 0x632be59bd9b4e019ULL)));
}

RandomStream make_stream(std::uint64_t seed) { return RandomStream(seed); }

double sample_gaussian(RandomStream& stream, double mean, double stddev) {
  if (!(stddev >= 0.0)) throw ArgumentError("sample_gaussian: stddev must be >= 0");
  const double u1 = stream.uniform_pos();
  const double u2 = stream.uniform();
  if (stddev == 0.0) return mean;
  const double r = std::sqrt(-2.0 * std::log(u1));
  return mean + stddev * r * std::cos(2.0 * std::numbers::pi * u2);
}

double sample_gamma(RandomStream& stream, double shape, double rate) {
  if (!(shape > 0.0) || !(rate > 0.0)) throw ArgumentError("sample_gamma: shape, rate must be > 0");
  if (shape < 1.0) {
    const double g = sample_gamma(stream, shape + 1.0, rate);
    return g * std::pow(stream.uniform_pos(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = 0.0;
    double v = 0.0;
    do {
      x = sample_gaussian(stream, 0.0, 1.0);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = stream.uniform_pos();
    if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v / rate;
  }
}

double cosine_angle_from_uniform(double u) { return std::asin(2.0 * u - 1.0); }

std::vector<double> sample_cosine_direction(RandomStream& stream, int k) {
  if (k == 1) {
    const double theta = cosine_angle_from_uniform(stream.uniform());
    return {std::sin(theta), std::cos(theta)};
  }
  if (k == 2) {
    // Malley: uniform on the disk, lifted to the hemisphere.
    const double u1 = stream.uniform();
    const double u2 = stream.uniform();
    const double r = std::sqrt(u1);
    const double phi = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(phi), r * std::sin(phi), std::sqrt(std::max(0.0, 1.0 - u1))};
  }
  throw ArgumentError("sample_cosine_direction: k must be 1 or 2, got " + std::to_string(k));
}

std::vector<double> sample_uniform_direction(RandomStream& stream, int m) {
  if (m < 1) throw ArgumentError("sample_uniform_direction: dimension must be >= 1");
  if (m == 1) return {stream.uniform() < 0.5 ? -1.0 : 1.0};
  std::vector<double> v(static_cast<std::size_t>(m));
  double norm2 = 0.0;
  do {
    norm2 = 0.0;
    for (auto& c : v) {
      c = sample_gaussian(stream, 0.0, 1.0);
      norm2 += c * c;
    }
  } while (norm2 < 1e-300);
  const double inv = 1.0 / std::sqrt(norm2);
  for (auto& c : v) c *= inv;
  return v;
}

EmpiricalDistribution::EmpiricalDistribution(std::vector<double> edges,
                                             std::vector<double> weights)
    : edges_(std::move(edges)), masses_(std::move(weights)) {
  if (edges_.size() < 2 || masses_.size() + 1 != edges_.size()) {
    throw ArgumentError("EmpiricalDistribution: need n+1 edges for n masses");
  }
  for (std::size_t i = 1; i < edges_.size(); ++i) {
    if (!(edges_[i] > edges_[i - 1])) {
      throw ArgumentError("EmpiricalDistribution: edges must be strictly increasing");
    }
  }
  double total = 0.0;
  for (double w : masses_) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw ArgumentError("EmpiricalDistribution: weights must be finite and nonnegative");
    }
    total += w;
  }
  if (!(total > 0.0)) throw ArgumentError("EmpiricalDistribution: total weight is zero");
  for (double& w : masses_) w /= total;
}

EmpiricalDistribution EmpiricalDistribution::from_samples(std::span<const double> samples,
                                                          std::vector<double> edges) {
  if (edges.size() < 2) throw ArgumentError("from_samples: need at least two edges");
  std::vector<double> counts(edges.size() - 1, 0.0);
  for (double x : samples) {
    auto it = std::upper_bound(edges.begin(), edges.end(), x);
    std::ptrdiff_t bin = (it - edges.begin()) - 1;
    bin = std::clamp<std::ptrdiff_t>(bin, 0, static_cast<std::ptrdiff_t>(counts.size()) - 1);
    counts[static_cast<std::size_t>(bin)] += 1.0;
  }
  return EmpiricalDistribution(std::move(edges), std::move(counts));
}

std::vector<double> EmpiricalDistribution::uniform_edges(double lo, double hi, std::size_t bins) {
  if (bins == 0 || !(hi > lo)) throw ArgumentError("uniform_edges: need bins >= 1 and hi > lo");
  std::vector<double> e(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i) {
    e[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(bins);
  }
  e.back() = hi;
  return e;
}

double EmpiricalDistribution::density(std::size_t i) const {
  return masses_.at(i) / (edges_[i + 1] - edges_[i]);
}

double tv_distance(const EmpiricalDistribution& p, const EmpiricalDistribution& q) {
  if (p.edges() != q.edges()) throw ArgumentError("tv_distance: histograms have different edges");
  return std::min(1.0, 0.5 * simd::abs_diff_sum(p.masses(), q.masses()));
}

double ks_distance(std::span<const double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw ArgumentError("ks_distance: no samples");
  std::vector<double> xs(samples.begin(), samples.end());
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  double prev = -1.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    if (!(f >= 0.0 && f <= 1.0)) throw ArgumentError("ks_distance: cdf value outside [0,1]");
    if (f < prev - 1e-12) throw ArgumentError("ks_distance: cdf is decreasing");
    prev = std::max(prev, f);
    const double i_d = static_cast<double>(i);
    d = std::max({d, (i_d + 1.0) / n - f, f - i_d / n});
  }
  return d;
}

}  // namespace rbm
