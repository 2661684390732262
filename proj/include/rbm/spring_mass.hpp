// SPDX-License-Identifier: Apache-2.0
#pragma once

// Free mass m2 on a line entering the region [0, l] where a bound mass m1 is
// held by a linear spring centered at l/2 and reflected at 0 and l. The free
// mass passes the wall at l freely; a step ends when it leaves through l.
// All quantities are in physical (unscaled) units.

#include <cstddef>

#include "rbm/core_stats.hpp"
#include "rbm/gibbs_sampler.hpp"

namespace rbm::spring {

struct SpringMassParams {
  double m1 = 10.0;
  double m2 = 1.0;
  double k = 5.0;
  double l = 1.0;
  double beta = 1.0;

  void validate() const;
  [[nodiscard]] double omega() const;
  [[nodiscard]] double period() const;
};

struct FlightResult {
  double speed = 0.0;        ///< free-mass speed on leaving
  std::size_t events = 0;    ///< collisions plus wall reflections
  double energy_error = 0.0; ///< |E_exit - E_entry|
};

/// Deterministic flight from the free mass entering at l with speed v_in and
/// the bound mass at (x1, v1). Throws SimulationError beyond 10^6 events and
/// NumericError if total energy drifts by more than 1e-8 (relative).
FlightResult spring_flight(double v_in, double x1, double v1, const SpringMassParams& params);

/// Gibbs-distributed bound-mass state (position, velocity) before an entry.
/// Literal mode draws E ~ Exp(beta) then the arcsine position; canonical
/// mode draws the exact equilibrium pair.
void sample_bound_state(const SpringMassParams& params, RandomStream& stream,
                        gibbs::Ensemble ensemble, double& x1, double& v1);

/// One step of the speed chain: fresh bound-mass state, then a flight.
double spring_mass_step(double v_old, const SpringMassParams& params, RandomStream& stream,
                        gibbs::Ensemble ensemble = gibbs::Ensemble::canonical);

/// Stationary law of the free-mass speed, 1 - exp(-beta m2 u^2 / 2).
[[nodiscard]] double stationary_cdf(double u, const SpringMassParams& params);

}  // namespace rbm::spring
