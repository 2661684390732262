// SPDX-License-Identifier: Apache-2.0
#pragma once

// Small-mass-ratio limit of the two-masses operator: (P_gamma f - f) / 2 gamma^2
// tends to L f = (1/z - z) f' + f'', a Laguerre-type operator whose
// eigenfunctions are L_n(z^2 / 2) with eigenvalues -2n.

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "rbm/core_stats.hpp"
#include "rbm/two_masses.hpp"

namespace rbm::laplacian {

/// A function of one variable with optional closed-form derivatives.
/// Missing derivatives are taken by central differences.
struct Differentiable {
  std::function<double(double)> f;
  std::function<double(double)> df;
  std::function<double(double)> d2f;
};

/// Coefficients in increasing powers of z.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<double> coefficients);

  [[nodiscard]] const std::vector<double>& coefficients() const noexcept { return c_; }
  [[nodiscard]] std::size_t degree() const noexcept;
  [[nodiscard]] double operator()(double z) const;
  [[nodiscard]] Polynomial derivative() const;
  [[nodiscard]] Differentiable as_differentiable() const;

 private:
  std::vector<double> c_;
};

/// Finite-difference step used when a derivative is missing.
[[nodiscard]] double fd_step(double z);

/// (1/z - z) f'(z) + f''(z). Requires z > 0.
[[nodiscard]] double apply_laplacian(const Differentiable& f, double z);

/// rho^{-1} (rho f')' with rho(z) = z exp(-z^2/2), the flux derivative taken
/// by a Richardson-extrapolated central difference.
[[nodiscard]] double apply_laplacian_sturm_liouville(const Differentiable& f, double z);

struct LaguerreEigenpair {
  int n = 0;
  double eigenvalue = 0.0;  ///< -2n
  Polynomial phi;           ///< L_n(z^2 / 2)
};

/// Requires 0 <= n <= 20.
[[nodiscard]] LaguerreEigenpair laguerre_eigenpair(int n);

/// 1 - 4 n gamma^2
[[nodiscard]] double predicted_eigenvalue(int n, double gamma);

struct MomentEstimate {
  double z = 0.0;
  double e1 = 0.0, e2 = 0.0, e3 = 0.0;
  double se1 = 0.0, se2 = 0.0, se3 = 0.0;
};

/// Monte Carlo estimates of E_z[(Z - z)^k], k = 1, 2, 3, over one random-map
/// step from speed z. Requires n_samples >= 10^4.
[[nodiscard]] MomentEstimate scattering_moments(double z,
                                                const two_masses::TwoMassParams& params,
                                                const two_masses::WallLaw& law,
                                                std::size_t n_samples, RandomStream stream);

/// E_z[f(Z)] - f(z) for the Gaussian wall law, by adaptive quadrature over
/// the wall velocity.
[[nodiscard]] double expected_increment(const std::function<double(double)>& f, double z,
                                        const two_masses::TwoMassParams& params);

/// (E_z[f(Z)] - f(z)) / (2 gamma^2), which tends to L f(z) as gamma -> 0.
[[nodiscard]] double generator_estimate(const std::function<double(double)>& f, double z,
                                        const two_masses::TwoMassParams& params);

}  // namespace rbm::laplacian
