// SPDX-License-Identifier: Apache-2.0
#pragma once

// Equilibrium states of a wall system with configuration q in a box, a
// potential U(q) and inverse temperature beta. Velocities are in
// mass-weighted coordinates, so kinetic energy is |v|^2 / 2 and the speed at
// energy E is h_E(q) = sqrt(2 (E - U(q))).

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "rbm/core_stats.hpp"

namespace rbm::gibbs {

/// U(q) = stiffness / 2 * (q - center)^2 in one dimension.
struct QuadraticWell {
  double center = 0.0;
  double stiffness = 1.0;
};

struct GibbsSystemSpec {
  int dim = 1;
  std::function<double(std::span<const double>)> potential;
  std::vector<double> lower;
  std::vector<double> upper;
  double beta = 1.0;
  /// Lower bound of U on the box; the rejection envelope is built on it.
  double potential_min = 0.0;
  /// Upper bound of U on the box, if known. Above it, negative exponents
  /// are sampled by rejection.
  std::optional<double> potential_max;
  /// Set when U is a 1D quadratic well; enables the exact arcsine sampler
  /// for negative exponents.
  std::optional<QuadraticWell> quadratic;

  void validate() const;
};

[[nodiscard]] GibbsSystemSpec free_system(int dim, double beta);
[[nodiscard]] GibbsSystemSpec quadratic_system(double center, double stiffness, double lower,
                                               double upper, double beta);

/// How the energy shell is drawn.
///  - literal: E ~ Exp(beta), then q with density h_E^exponent on the shell.
///  - canonical: q ~ exp(-beta U) on the box and kinetic energy from the
///    matching Gamma law, so the joint state is exactly Gibbs distributed for
///    every potential.
enum class Ensemble { literal, canonical };

/// sqrt(2 (E - u)) for E > u, else 0.
[[nodiscard]] double h_energy(double energy, double u_of_q);

/// -ln(u) / beta for a deviate u in (0, 1].
[[nodiscard]] double energy_from_uniform(double u, double beta);
double sample_energy(double beta, RandomStream& stream);

/// Position with density h_E(q)^exponent on {U < E}.
std::vector<double> sample_wall_position(double energy, const GibbsSystemSpec& spec,
                                         RandomStream& stream, double exponent);

/// Closed-form arcsine sampler for a quadratic well: density 1/h_E on the
/// part of [lower, upper] below energy E, driven by a uniform deviate u2.
[[nodiscard]] double arcsine_position(double energy, const QuadraticWell& well, double lower,
                                      double upper, double u2);

struct WallState {
  std::vector<double> q;
  std::vector<double> velocity;
  double energy = 0.0;
};

/// Pre-collision wall state: speed h_E(q), direction uniform on S^{dim-1}.
WallState sample_wall_state(const GibbsSystemSpec& spec, RandomStream& stream,
                            Ensemble ensemble = Ensemble::canonical);

/// Equilibrium state of an incoming molecule: direction with density
/// proportional to its normal component (the last coordinate). Literal mode
/// uses position density h_E^{dim-1}.
WallState sample_stationary_molecule(const GibbsSystemSpec& spec, RandomStream& stream,
                                     Ensemble ensemble = Ensemble::canonical);

}  // namespace rbm::gibbs
