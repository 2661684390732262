// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numbers>
#include <vector>

#include "rbm/core_stats.hpp"
#include "rbm/errors.hpp"
#include "rbm/gibbs_sampler.hpp"

using namespace rbm;
using namespace rbm::gibbs;

namespace {

// Pearson statistic of bin counts against expected probabilities; returns the
// upper-tail p-value.
double chi_square_p(const std::vector<double>& counts, const std::vector<double>& probs) {
  double total = 0.0;
  for (double c : counts) total += c;
  double stat = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double e = total * probs[i];
    stat += (counts[i] - e) * (counts[i] - e) / e;
  }
  const double dof = static_cast<double>(counts.size() - 1);
  return boost::math::gamma_q(0.5 * dof, 0.5 * stat);
}

}  // namespace

TEST(Energy, HEnergy) {
  EXPECT_DOUBLE_EQ(h_energy(2.0, 0.0), 2.0);
  EXPECT_DOUBLE_EQ(h_energy(1.5, 1.0), 1.0);
  EXPECT_EQ(h_energy(1.0, 1.0), 0.0);
  EXPECT_EQ(h_energy(0.5, 1.0), 0.0);
}

TEST(Energy, FromUniform) {
  EXPECT_DOUBLE_EQ(energy_from_uniform(std::exp(-1.0), 1.0), 1.0);
  EXPECT_DOUBLE_EQ(energy_from_uniform(1.0, 3.0), 0.0);
  EXPECT_THROW(energy_from_uniform(0.0, 1.0), ArgumentError);
  EXPECT_THROW(energy_from_uniform(0.5, 0.0), ArgumentError);
}

TEST(Energy, MeanAtBetaTwo) {
  RandomStream s = make_stream(3);
  const int n = 1000000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += sample_energy(2.0, s);
  EXPECT_NEAR(sum / n, 0.5, 0.002);
}

TEST(SystemSpec, Validation) {
  EXPECT_THROW(free_system(1, 0.0).validate(), ArgumentError);
  EXPECT_THROW(free_system(0, 1.0).validate(), ArgumentError);
  EXPECT_THROW(quadratic_system(0.5, 1.0, 1.0, 0.0, 1.0).validate(), ArgumentError);
  EXPECT_THROW(quadratic_system(0.5, -1.0, 0.0, 1.0, 1.0), ArgumentError);
  EXPECT_NO_THROW(free_system(3, 1.0).validate());
}

TEST(Arcsine, MedianIsCenter) {
  const QuadraticWell w{0.5, 5.0};
  EXPECT_NEAR(arcsine_position(0.1, w, 0.0, 1.0, 0.5), 0.5, 1e-14);
  // Turning points at center +- sqrt(2E/k).
  const double a = std::sqrt(2.0 * 0.1 / 5.0);
  EXPECT_NEAR(arcsine_position(0.1, w, 0.0, 1.0, 0.0), 0.5 - a, 1e-12);
  EXPECT_NEAR(arcsine_position(0.1, w, 0.0, 1.0, 1.0), 0.5 + a, 1e-12);
}

TEST(Arcsine, TruncatedByBox) {
  const QuadraticWell w{0.5, 5.0};
  for (double u : {0.0, 0.3, 0.7, 1.0}) {
    const double q = arcsine_position(10.0, w, 0.0, 1.0, u);
    EXPECT_GE(q, 0.0);
    EXPECT_LE(q, 1.0);
  }
}

// Literal wall sampler in one dimension with the quadratic well: position
// density h_E^{-1} is the arcsine law, checked by chi-square on 20 bins
// against its CDF 1/2 + asin((q - c)/a) / pi.
TEST(WallPosition, ArcsineLawChiSquare) {
  const auto spec = quadratic_system(0.5, 5.0, 0.0, 1.0, 1.0);
  const double energy = 0.2;
  const double a = std::sqrt(2.0 * energy / 5.0);
  RandomStream s = make_stream(5);
  const int bins = 20, n = 200000;
  std::vector<double> counts(bins, 0.0), probs(bins);
  for (int i = 0; i < n; ++i) {
    const double q = sample_wall_position(energy, spec, s, -1.0)[0];
    const int b = std::min(bins - 1, static_cast<int>((q - (0.5 - a)) / (2.0 * a) * bins));
    counts[static_cast<std::size_t>(b)] += 1.0;
  }
  auto cdf = [&](double x) { return 0.5 + std::asin(std::clamp((x - 0.5) / a, -1.0, 1.0)) / std::numbers::pi; };
  for (int b = 0; b < bins; ++b) {
    const double lo = 0.5 - a + 2.0 * a * b / bins, hi = lo + 2.0 * a / bins;
    probs[static_cast<std::size_t>(b)] = cdf(hi) - cdf(lo);
  }
  EXPECT_GT(chi_square_p(counts, probs), 0.001);
}

// Exponent 1 on a quadratic well in a box wider than the shell: density
// proportional to sqrt(E - U(q)), checked on 20 bins.
TEST(WallPosition, RejectionLawChiSquare) {
  const auto spec = quadratic_system(0.5, 2.0, 0.0, 1.0, 1.0);
  const double energy = 0.04;
  const double a = std::sqrt(2.0 * energy / 2.0);
  RandomStream s = make_stream(6);
  const int bins = 20, n = 200000;
  std::vector<double> counts(bins, 0.0), probs(bins, 0.0);
  for (int i = 0; i < n; ++i) {
    const double q = sample_wall_position(energy, spec, s, 1.0)[0];
    ASSERT_LE(std::abs(q - 0.5), a);
    const int b = std::min(bins - 1, static_cast<int>((q - (0.5 - a)) / (2.0 * a) * bins));
    counts[static_cast<std::size_t>(b)] += 1.0;
  }
  // Semicircle law: CDF (x sqrt(1 - x^2) + asin x) / pi + 1/2 in x = (q - c)/a.
  auto cdf = [](double x) {
    x = std::clamp(x, -1.0, 1.0);
    return (x * std::sqrt(1.0 - x * x) + std::asin(x)) / std::numbers::pi + 0.5;
  };
  for (int b = 0; b < bins; ++b) {
    const double lo = -1.0 + 2.0 * b / bins;
    probs[static_cast<std::size_t>(b)] = cdf(lo + 2.0 / bins) - cdf(lo);
  }
  EXPECT_GT(chi_square_p(counts, probs), 0.001);
}

TEST(WallPosition, NegativeExponentNeedsBound) {
  RandomStream s = make_stream(1);
  GibbsSystemSpec spec = free_system(1, 1.0);
  spec.potential = [](std::span<const double> q) { return q[0]; };
  spec.potential_max.reset();
  EXPECT_THROW(sample_wall_position(2.0, spec, s, -1.0), ArgumentError);
  spec.potential_max = 1.0;
  EXPECT_THROW(sample_wall_position(0.5, spec, s, -1.0), ArgumentError);
  const double q = sample_wall_position(2.0, spec, s, -1.0)[0];
  EXPECT_GE(q, 0.0);
  EXPECT_LE(q, 1.0);
  spec.potential_max = -1.0;
  EXPECT_THROW(spec.validate(), ArgumentError);
}

// U(q) = q on [0, 1] at energy 2: density proportional to (2 - q)^{-1/2}.
TEST(WallPosition, NegativeExponentByRejection) {
  GibbsSystemSpec spec = free_system(1, 1.0);
  spec.potential = [](std::span<const double> q) { return q[0]; };
  spec.potential_max = 1.0;
  RandomStream s = make_stream(13);
  std::vector<double> qs;
  for (int i = 0; i < 200000; ++i) qs.push_back(sample_wall_position(2.0, spec, s, -1.0)[0]);
  const double norm = std::sqrt(2.0) - 1.0;
  EXPECT_LT(ks_distance(qs, [&](double x) { return (std::sqrt(2.0) - std::sqrt(2.0 - x)) / norm; }),
            0.01);
}

// Canonical two-dimensional wall in a quadratic bowl on [0,1]^2: positions
// follow exp(-beta U), a product of truncated Gaussians. Chi-square on the
// first coordinate.
TEST(WallState, CanonicalPositionChiSquare) {
  GibbsSystemSpec spec;
  spec.dim = 2;
  spec.lower = {0.0, 0.0};
  spec.upper = {1.0, 1.0};
  spec.beta = 1.0;
  spec.potential = [](std::span<const double> q) {
    return 2.0 * ((q[0] - 0.3) * (q[0] - 0.3) + (q[1] - 0.6) * (q[1] - 0.6));
  };
  RandomStream s = make_stream(7);
  const int bins = 10, n = 200000;
  std::vector<double> counts(bins, 0.0), probs(bins);
  for (int i = 0; i < n; ++i) {
    const auto st = sample_wall_state(spec, s);
    ASSERT_EQ(st.q.size(), 2u);
    const double kinetic = 0.5 * (st.velocity[0] * st.velocity[0] + st.velocity[1] * st.velocity[1]);
    ASSERT_NEAR(st.energy, spec.potential(st.q) + kinetic, 1e-12);
    counts[static_cast<std::size_t>(std::min(bins - 1, static_cast<int>(st.q[0] * bins)))] += 1.0;
  }
  // exp(-2 (x - 0.3)^2): normal with mean 0.3 and sd 1/2, truncated to [0, 1].
  auto phi = [](double x) { return 0.5 * std::erfc(-(x - 0.3) / std::sqrt(0.5)); };
  const double z = phi(1.0) - phi(0.0);
  for (int b = 0; b < bins; ++b) {
    probs[static_cast<std::size_t>(b)] = (phi((b + 1.0) / bins) - phi(1.0 * b / bins)) / z;
  }
  EXPECT_GT(chi_square_p(counts, probs), 0.001);
}

// Literal sampler with U = 0 in one dimension: E ~ Exp(beta) and the speed is
// sqrt(2E), so speed^2 / 2 is exponential.
TEST(WallState, LiteralFreeSpeed) {
  const auto spec = free_system(1, 1.0);
  RandomStream s = make_stream(8);
  std::vector<double> e;
  for (int i = 0; i < 200000; ++i) {
    const auto st = sample_wall_state(spec, s, Ensemble::literal);
    e.push_back(0.5 * st.velocity[0] * st.velocity[0]);
  }
  EXPECT_LT(ks_distance(e, [](double x) { return 1.0 - std::exp(-x); }), 0.01);
}

// Canonical free wall in three dimensions: kinetic energy is Gamma(3/2, beta).
TEST(WallState, CanonicalKineticGamma) {
  const auto spec = free_system(3, 2.0);
  RandomStream s = make_stream(9);
  std::vector<double> e;
  int positive = 0;
  for (int i = 0; i < 200000; ++i) {
    const auto st = sample_wall_state(spec, s);
    double k = 0.0;
    for (double v : st.velocity) k += 0.5 * v * v;
    e.push_back(k);
    if (st.velocity[2] > 0.0) ++positive;
  }
  EXPECT_LT(ks_distance(e, [](double x) { return boost::math::gamma_p(1.5, 2.0 * x); }), 0.01);
  EXPECT_NEAR(positive / 200000.0, 0.5, 0.005);
}

// Flux-weighted molecule: in one dimension the speed law is
// beta v exp(-beta v^2 / 2); in two dimensions the angle from the normal
// follows the cosine law.
TEST(Molecule, SpeedAndDirection) {
  {
    const auto spec = free_system(1, 1.0);
    RandomStream s = make_stream(10);
    std::vector<double> v;
    for (int i = 0; i < 200000; ++i) {
      const auto st = sample_stationary_molecule(spec, s);
      ASSERT_GT(st.velocity[0], 0.0);
      v.push_back(st.velocity[0]);
    }
    EXPECT_LT(ks_distance(v, [](double x) { return 1.0 - std::exp(-0.5 * x * x); }), 0.01);
  }
  {
    const auto spec = free_system(2, 1.0);
    RandomStream s = make_stream(11);
    std::vector<double> theta;
    for (int i = 0; i < 200000; ++i) {
      const auto st = sample_stationary_molecule(spec, s);
      ASSERT_GT(st.velocity[1], 0.0);
      theta.push_back(std::atan2(st.velocity[0], st.velocity[1]));
    }
    EXPECT_LT(ks_distance(theta, [](double t) { return 0.5 * (1.0 + std::sin(t)); }), 0.01);
  }
  RandomStream s = make_stream(1);
  EXPECT_THROW(sample_stationary_molecule(free_system(4, 1.0), s), ArgumentError);
}

TEST(Molecule, LiteralMatchesCanonicalInOneDimensionFree) {
  const auto spec = free_system(1, 1.0);
  RandomStream s = make_stream(12);
  std::vector<double> v;
  for (int i = 0; i < 200000; ++i) v.push_back(sample_stationary_molecule(spec, s, Ensemble::literal).velocity[0]);
  EXPECT_LT(ks_distance(v, [](double x) { return 1.0 - std::exp(-0.5 * x * x); }), 0.01);
}
