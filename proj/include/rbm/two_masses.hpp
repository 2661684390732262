// SPDX-License-Identifier: Apache-2.0
#pragma once

// Two point masses on a half-line: a light free mass scattered by a heavy
// bound mass confined to [0, l]. In mass-weighted coordinates the pair is a
// billiard in a wedge of half-angle alpha = atan(gamma), gamma = sqrt(m2/m1).
// A collision event maps the free-mass speed v to a random speed V; the
// bound mass's position is uniform and its scaled velocity w follows a
// WallLaw.

#include <array>
#include <cstddef>

#include "rbm/core_stats.hpp"

namespace rbm::two_masses {

struct TwoMassParams {
  double gamma = 0.0;
  double sigma = 0.0;
  double a = 0.0;      ///< (1 - g^2) / (1 + g^2)
  double b = 0.0;      ///< 2 g / (1 + g^2)
  double a_bar = 0.0;  ///< (1 - 6 g^2 + g^4) / (1 + g^2)^2
  double b_bar = 0.0;  ///< 4 g (1 - g^2) / (1 + g^2)^2
  double t1 = 0.0;     ///< tan(alpha)
  double t2 = 0.0;     ///< tan(2 alpha)
  double t3 = 0.0;     ///< tan(3 alpha)
  double c_lo = 0.0;
  double c_hi = 0.0;   ///< (3 - g^2) / (1 + g^2)
};

/// Fills every derived constant. Requires 0 < gamma < 1/sqrt(3), sigma > 0.
[[nodiscard]] TwoMassParams derive_params(double gamma, double sigma);

/// Distribution of the bound mass's scaled velocity at entry.
class WallLaw {
 public:
  enum class Kind { gaussian, bernoulli };

  static WallLaw gaussian(double sigma);
  /// +speed or -speed with probability 1/2 each (speed >= 0).
  static WallLaw bernoulli(double speed);

  [[nodiscard]] Kind kind() const noexcept { return kind_; }
  [[nodiscard]] double scale() const noexcept { return scale_; }

  double sample(RandomStream& stream) const;

 private:
  WallLaw(Kind kind, double scale) : kind_(kind), scale_(scale) {}
  Kind kind_;
  double scale_;
};

enum class Region { w_nonneg, i1, i2, i3, i4 };
enum class Branch { f1, f2, f3 };

struct BranchOutcome {
  Branch branch;
  double probability;
  double value;
};

/// Up to three outcomes; probabilities sum to one.
struct BranchMenu {
  std::array<BranchOutcome, 3> items{};
  std::size_t size = 0;

  [[nodiscard]] const BranchOutcome* begin() const noexcept { return items.data(); }
  [[nodiscard]] const BranchOutcome* end() const noexcept { return items.data() + size; }
};

/// w >= 0, or the interval I_i containing v/|w| (right-closed).
[[nodiscard]] Region classify_region(double v, double w, const TwoMassParams& params);

/// The affine branches available at (v, w) and their probabilities.
[[nodiscard]] BranchMenu branch_menu(double v, double w, const TwoMassParams& params);

/// Probability that the free mass leaves on the F1 branch when w < 0.
[[nodiscard]] double prob_f1(double v, double abs_w, const TwoMassParams& params);
/// Probability of the F2 branch on I3.
[[nodiscard]] double prob_f2_i3(double v, double abs_w, const TwoMassParams& params);

/// One collision event of the random map.
double random_map_step(double v, const WallLaw& law, RandomStream& stream,
                       const TwoMassParams& params);

struct OracleOutcome {
  double speed;          ///< scaled outgoing free-mass speed
  double wall_velocity;  ///< scaled bound-mass velocity at exit
  std::size_t events;    ///< collisions plus wall reflections
};

/// Exact event-driven simulation of the two bodies in original coordinates.
/// `x` in [0, 1] is the bound mass's scaled position (range fixed to 1).
/// Accepts any gamma > 0.
OracleOutcome oracle_step(double v, double x, double w, double gamma);
OracleOutcome oracle_step(double v, double x, double w, const TwoMassParams& params);

/// Maxwell-Boltzmann boundary density v / sigma^2 exp(-v^2 / 2 sigma^2).
[[nodiscard]] double stationary_density(double v, double sigma);
[[nodiscard]] double stationary_cdf(double v, double sigma);

/// Lebesgue kernel of the transition operator: (Pf)(v) = int kappa(v,u) f(u) du.
[[nodiscard]] double kernel_kappa(double v, double u, const TwoMassParams& params);

struct KernelValue {
  double value;
  bool underflow;  ///< rho(u) is below the double range; value came from log space
};

/// Kernel relative to the stationary measure, K = kappa / rho(u).
[[nodiscard]] KernelValue kernel_K_checked(double v, double u, const TwoMassParams& params);
[[nodiscard]] double kernel_K(double v, double u, const TwoMassParams& params);

}  // namespace rbm::two_masses
