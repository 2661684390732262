// SPDX-License-Identifier: Apache-2.0
#include "rbm/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "rbm/errors.hpp"

namespace rbm::quadrature {

Rule gauss_legendre(std::size_t n, double lo, double hi) {
  if (n == 0) throw ArgumentError("gauss_legendre: n must be positive");
  if (!(hi > lo)) throw ArgumentError("gauss_legendre: empty interval");
  Rule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double half = 0.5 * (hi - lo);
  const double mid = 0.5 * (hi + lo);
  const auto nd = static_cast<double>(n);
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    // Newton iteration on P_n from the Tricomi starting guess.
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (nd + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const auto kd = static_cast<double>(k);
        const double p2 = ((2.0 * kd - 1.0) * x * p1 - (kd - 1.0) * p0) / kd;
        p0 = p1;
        p1 = p2;
      }
      dp = nd * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = mid - half * x;
    rule.nodes[n - 1 - i] = mid + half * x;
    rule.weights[i] = half * w;
    rule.weights[n - 1 - i] = half * w;
  }
  return rule;
}

Rule midpoint(std::size_t n, double lo, double hi) {
  if (n == 0) throw ArgumentError("midpoint: n must be positive");
  if (!(hi > lo)) throw ArgumentError("midpoint: empty interval");
  Rule rule;
  const double h = (hi - lo) / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    rule.nodes.push_back(lo + (static_cast<double>(i) + 0.5) * h);
    rule.weights.push_back(h);
  }
  return rule;
}

double integrate(const std::function<double(double)>& f, double lo, double hi,
                 std::vector<double> breaks, double rel_tol) {
  if (!(hi >= lo)) throw ArgumentError("integrate: hi < lo");
  breaks.erase(std::remove_if(breaks.begin(), breaks.end(),
                              [&](double b) { return !(b > lo && b < hi); }),
               breaks.end());
  breaks.push_back(lo);
  breaks.push_back(hi);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        f, breaks[i], breaks[i + 1], 15, rel_tol);
  }
  return total;
}

}  // namespace rbm::quadrature
