// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace rbm::quadrature {

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [lo, hi].
[[nodiscard]] Rule gauss_legendre(std::size_t n, double lo, double hi);

/// n equal cells on [lo, hi], one node at each cell center.
[[nodiscard]] Rule midpoint(std::size_t n, double lo, double hi);

/// Adaptive Gauss-Kronrod integral of f over [lo, hi]. Interior
/// discontinuities of f should be passed as `breaks` (any order; points
/// outside (lo, hi) are ignored).
[[nodiscard]] double integrate(const std::function<double(double)>& f, double lo, double hi,
                               std::vector<double> breaks = {}, double rel_tol = 1e-10);

}  // namespace rbm::quadrature
