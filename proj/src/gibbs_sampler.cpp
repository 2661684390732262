// SPDX-License-Identifier: Apache-2.0
#include "rbm/gibbs_sampler.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rbm/errors.hpp"

namespace rbm::gibbs {

namespace {

constexpr long kMaxAttempts = 10'000'000;

std::vector<double> uniform_in_box(const GibbsSystemSpec& spec, RandomStream& stream) {
  std::vector<double> q(static_cast<std::size_t>(spec.dim));
  for (std::size_t i = 0; i < q.size(); ++i) {
    q[i] = spec.lower[i] + (spec.upper[i] - spec.lower[i]) * stream.uniform();
  }
  return q;
}

// q with density proportional to exp(-beta U) on the box.
std::vector<double> sample_boltzmann_position(const GibbsSystemSpec& spec, RandomStream& stream) {
  for (long attempt = 0; attempt < kMaxAttempts; ++attempt) {
    std::vector<double> q = uniform_in_box(spec, stream);
    const double excess = spec.potential(q) - spec.potential_min;
    if (excess < -1e-12) throw ArgumentError("potential_min exceeds the potential");
    if (stream.uniform() < std::exp(-spec.beta * excess)) return q;
  }
  throw NumericError("sample_boltzmann_position: acceptance below 1e-6");
}

}  // namespace

void GibbsSystemSpec::validate() const {
  if (dim < 1) throw ArgumentError("GibbsSystemSpec: dim must be >= 1");
  if (!(beta > 0.0)) throw ArgumentError("GibbsSystemSpec: beta must be positive");
  if (!potential) throw ArgumentError("GibbsSystemSpec: potential missing");
  const auto d = static_cast<std::size_t>(dim);
  if (lower.size() != d || upper.size() != d) {
    throw ArgumentError("GibbsSystemSpec: bounds must have dim entries");
  }
  for (std::size_t i = 0; i < d; ++i) {
    if (!(upper[i] > lower[i])) throw ArgumentError("GibbsSystemSpec: empty box");
  }
  if (quadratic && dim != 1) throw ArgumentError("GibbsSystemSpec: quadratic well is 1D");
  if (potential_max && !(*potential_max >= potential_min)) {
    throw ArgumentError("GibbsSystemSpec: potential_max below potential_min");
  }
}

GibbsSystemSpec free_system(int dim, double beta) {
  GibbsSystemSpec spec;
  spec.dim = dim;
  spec.potential = [](std::span<const double>) { return 0.0; };
  spec.lower.assign(static_cast<std::size_t>(std::max(dim, 0)), 0.0);
  spec.upper.assign(static_cast<std::size_t>(std::max(dim, 0)), 1.0);
  spec.beta = beta;
  spec.potential_max = 0.0;
  return spec;
}

GibbsSystemSpec quadratic_system(double center, double stiffness, double lower, double upper,
                                 double beta) {
  if (!(stiffness > 0.0)) throw ArgumentError("quadratic_system: stiffness must be positive");
  GibbsSystemSpec spec;
  spec.dim = 1;
  spec.potential = [center, stiffness](std::span<const double> q) {
    const double d = q[0] - center;
    return 0.5 * stiffness * d * d;
  };
  spec.lower = {lower};
  spec.upper = {upper};
  spec.beta = beta;
  spec.potential_min = (center >= lower && center <= upper)
                           ? 0.0
                           : 0.5 * stiffness *
                                 std::min((lower - center) * (lower - center),
                                          (upper - center) * (upper - center));
  spec.quadratic = QuadraticWell{center, stiffness};
  return spec;
}

double h_energy(double energy, double u_of_q) {
  return energy > u_of_q ? std::sqrt(2.0 * (energy - u_of_q)) : 0.0;
}

double energy_from_uniform(double u, double beta) {
  if (!(beta > 0.0)) throw ArgumentError("energy: beta must be positive");
  if (!(u > 0.0 && u <= 1.0)) throw ArgumentError("energy: deviate must lie in (0, 1]");
  return -std::log(u) / beta;
}

double sample_energy(double beta, RandomStream& stream) {
  if (!(beta > 0.0)) throw ArgumentError("sample_energy: beta must be positive");
  return energy_from_uniform(stream.uniform_pos(), beta);
}

double arcsine_position(double energy, const QuadraticWell& well, double lower, double upper,
                        double u2) {
  if (!(energy > 0.0)) throw ArgumentError("arcsine_position: energy must be positive");
  const double amplitude = std::sqrt(2.0 * energy / well.stiffness);
  const double lo = std::clamp((lower - well.center) / amplitude, -1.0, 1.0);
  const double hi = std::clamp((upper - well.center) / amplitude, -1.0, 1.0);
  if (!(hi > lo)) throw ArgumentError("arcsine_position: empty sublevel set");
  const double a = std::asin(lo);
  const double b = std::asin(hi);
  return well.center + amplitude * std::sin(a + u2 * (b - a));
}

std::vector<double> sample_wall_position(double energy, const GibbsSystemSpec& spec,
                                         RandomStream& stream, double exponent) {
  spec.validate();
  if (!(energy > spec.potential_min)) {
    throw ArgumentError("sample_wall_position: empty sublevel set");
  }
  double h_ref = std::sqrt(2.0 * (energy - spec.potential_min));
  if (exponent < 0.0) {
    if (spec.quadratic && exponent == -1.0) {
      return {arcsine_position(energy, *spec.quadratic, spec.lower[0], spec.upper[0],
                               stream.uniform())};
    }
    if (!spec.potential_max || !(energy > *spec.potential_max)) {
      throw ArgumentError(
          "sample_wall_position: negative exponent needs the quadratic sampler or energy above "
          "potential_max");
    }
    // h is bounded below by h_ref on the whole box, so h^exponent <= h_ref^exponent.
    h_ref = std::sqrt(2.0 * (energy - *spec.potential_max));
  }
  for (long attempt = 0; attempt < kMaxAttempts; ++attempt) {
    std::vector<double> q = uniform_in_box(spec, stream);
    const double u = spec.potential(q);
    if (!(u < energy)) continue;
    if (exponent == 0.0) return q;
    if (stream.uniform() < std::pow(h_energy(energy, u) / h_ref, exponent)) return q;
  }
  throw NumericError("sample_wall_position: acceptance below 1e-6");
}

WallState sample_wall_state(const GibbsSystemSpec& spec, RandomStream& stream,
                            Ensemble ensemble) {
  spec.validate();
  WallState state;
  double speed;
  if (ensemble == Ensemble::literal) {
    double energy;
    do {
      energy = sample_energy(spec.beta, stream);
    } while (!(energy > spec.potential_min));
    state.q = sample_wall_position(energy, spec, stream, spec.dim - 2.0);
    state.energy = energy;
    speed = h_energy(energy, spec.potential(state.q));
  } else {
    state.q = sample_boltzmann_position(spec, stream);
    const double kinetic = sample_gamma(stream, 0.5 * spec.dim, spec.beta);
    state.energy = spec.potential(state.q) + kinetic;
    speed = std::sqrt(2.0 * kinetic);
  }
  state.velocity = sample_uniform_direction(stream, spec.dim);
  for (double& x : state.velocity) x *= speed;
  return state;
}

WallState sample_stationary_molecule(const GibbsSystemSpec& spec, RandomStream& stream,
                                     Ensemble ensemble) {
  spec.validate();
  if (spec.dim > 3) throw ArgumentError("sample_stationary_molecule: dim must be <= 3");
  WallState state;
  double speed;
  if (ensemble == Ensemble::literal) {
    double energy;
    do {
      energy = sample_energy(spec.beta, stream);
    } while (!(energy > spec.potential_min));
    state.q = sample_wall_position(energy, spec, stream, spec.dim - 1.0);
    state.energy = energy;
    speed = h_energy(energy, spec.potential(state.q));
  } else {
    state.q = sample_boltzmann_position(spec, stream);
    const double kinetic = sample_gamma(stream, 0.5 * (spec.dim + 1), spec.beta);
    state.energy = spec.potential(state.q) + kinetic;
    speed = std::sqrt(2.0 * kinetic);
  }
  state.velocity = spec.dim == 1 ? std::vector<double>{1.0}
                                 : sample_cosine_direction(stream, spec.dim - 1);
  for (double& x : state.velocity) x *= speed;
  return state;
}

}  // namespace rbm::gibbs
