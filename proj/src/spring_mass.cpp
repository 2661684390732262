// SPDX-License-Identifier: Apache-2.0
#include "rbm/spring_mass.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "rbm/errors.hpp"

namespace rbm::spring {

namespace {

constexpr std::size_t kMaxEvents = 1'000'000;
constexpr std::size_t kMaxWindows = 1'000'000'000;
constexpr double kTimeTol = 1e-12;

// Bound-mass motion since the last event: x1(t) = c + X0 cos wt + (V0/w) sin wt.
struct Harmonic {
  double c, omega, x0, v0;

  [[nodiscard]] double pos(double t) const {
    return c + x0 * std::cos(omega * t) + v0 / omega * std::sin(omega * t);
  }
  [[nodiscard]] double vel(double t) const {
    return -x0 * omega * std::sin(omega * t) + v0 * std::cos(omega * t);
  }
  [[nodiscard]] double amplitude() const { return std::hypot(x0, v0 / omega); }
  [[nodiscard]] double phase() const { return std::atan2(v0 / omega, x0); }
};

// Times t in (ta, tb) with omega t - phase = theta + n * period.
void add_angle_hits(double theta, double period, const Harmonic& h, double ta, double tb,
                    std::vector<double>& out) {
  const double phi = h.phase();
  const double n0 = std::ceil((h.omega * ta - phi - theta) / period);
  for (double n = n0;; n += 1.0) {
    const double t = (theta + phi + n * period) / h.omega;
    if (t >= tb) break;
    if (t > ta) out.push_back(t);
  }
}

}  // namespace

void SpringMassParams::validate() const {
  if (!(m1 > 0.0 && m2 > 0.0 && k > 0.0 && l > 0.0 && beta > 0.0)) {
    throw ArgumentError("SpringMassParams: m1, m2, k, l, beta must be positive");
  }
}

double SpringMassParams::omega() const { return std::sqrt(k / m1); }
double SpringMassParams::period() const { return 2.0 * std::numbers::pi / omega(); }

FlightResult spring_flight(double v_in, double x1, double v1, const SpringMassParams& p) {
  p.validate();
  if (!(v_in > 0.0)) throw ArgumentError("spring_flight: entry speed must be positive");
  if (!(x1 >= 0.0 && x1 <= p.l)) throw ArgumentError("spring_flight: x1 outside [0, l]");

  const double c = 0.5 * p.l;
  Harmonic h{c, p.omega(), x1 - c, v1};
  double x2 = p.l;
  double v2 = -v_in;
  auto energy = [&](const Harmonic& hh, double t, double speed2) {
    const double d = hh.pos(t) - c;
    const double u = hh.vel(t);
    return 0.5 * p.m1 * u * u + 0.5 * p.k * d * d + 0.5 * p.m2 * speed2 * speed2;
  };
  const double e0 = energy(h, 0.0, v2);
  const double dt = p.period() / 64.0;

  // Constraint functions that must stay nonnegative.
  auto g = [&](int which, double t) {
    switch (which) {
      case 0: return x2 + v2 * t - h.pos(t);  // free mass right of bound mass
      case 1: return h.pos(t);                // bound mass right of 0
      default: return p.l - h.pos(t);         // bound mass left of l
    }
  };

  std::size_t events = 0;
  double ta = 0.0;
  std::vector<double> cuts;
  for (std::size_t window = 0; window < kMaxWindows; ++window) {
    const double tb = ta + dt;
    cuts.clear();
    cuts.push_back(ta);
    const double amp = h.amplitude();
    if (amp > 0.0) {
      add_angle_hits(0.0, std::numbers::pi, h, ta, tb, cuts);
      const double s = -v2 / (amp * h.omega);
      if (std::abs(s) <= 1.0) {
        const double base = std::asin(s);
        add_angle_hits(base, 2.0 * std::numbers::pi, h, ta, tb, cuts);
        add_angle_hits(std::numbers::pi - base, 2.0 * std::numbers::pi, h, ta, tb, cuts);
      }
    }
    cuts.push_back(tb);
    std::sort(cuts.begin(), cuts.end());

    const double t_exit = v2 > 0.0 ? (p.l - x2) / v2 : std::numeric_limits<double>::infinity();
    double t_event = std::numeric_limits<double>::infinity();
    int which = -1;
    for (std::size_t piece = 0; piece + 1 < cuts.size() && which < 0; ++piece) {
      const double pa = cuts[piece];
      const double pb = cuts[piece + 1];
      for (int cst = 0; cst < 3; ++cst) {
        if (!(g(cst, pa) >= 0.0 && g(cst, pb) < 0.0)) continue;
        double lo = pa;
        double hi = pb;
        int iter = 0;
        while (hi - lo > kTimeTol) {
          const double mid = 0.5 * (lo + hi);
          (g(cst, mid) >= 0.0 ? lo : hi) = mid;
          if (++iter > 200) {
            throw NumericError("spring_flight: bisection failed on [" + std::to_string(lo) +
                               ", " + std::to_string(hi) + "]");
          }
        }
        if (lo < t_event) {
          t_event = lo;
          which = cst;
        }
      }
    }

    if (t_exit <= tb && t_exit <= t_event) {
      const double e1 = energy(h, t_exit, v2);
      const double err = std::abs(e1 - e0);
      if (err > 1e-8 * std::max(1.0, e0)) {
        throw NumericError("spring_flight: energy drift " + std::to_string(err));
      }
      return FlightResult{v2, events, err};
    }
    if (which < 0) {
      ta = tb;
      continue;
    }

    if (++events > kMaxEvents) throw SimulationError("spring_flight: event cap exceeded");
    const double xb = h.pos(t_event);
    double ub = h.vel(t_event);
    if (which == 0) {
      const double m = p.m1 + p.m2;
      const double n1 = ((p.m1 - p.m2) * ub + 2.0 * p.m2 * v2) / m;
      const double n2 = ((p.m2 - p.m1) * v2 + 2.0 * p.m1 * ub) / m;
      ub = n1;
      v2 = n2;
      x2 = xb;
    } else {
      ub = -ub;
      x2 += v2 * t_event;
    }
    h.x0 = xb - c;
    h.v0 = ub;
    ta = 0.0;
  }
  throw SimulationError("spring_flight: scan limit exceeded");
}

void sample_bound_state(const SpringMassParams& p, RandomStream& stream,
                        gibbs::Ensemble ensemble, double& x1, double& v1) {
  p.validate();
  const double c = 0.5 * p.l;
  if (ensemble == gibbs::Ensemble::literal) {
    const double energy = gibbs::energy_from_uniform(stream.uniform_pos(), p.beta);
    x1 = gibbs::arcsine_position(energy, gibbs::QuadraticWell{c, p.k}, 0.0, p.l,
                                 stream.uniform());
    const double sign = stream.uniform() < 0.5 ? -1.0 : 1.0;
    const double d = x1 - c;
    v1 = sign * gibbs::h_energy(energy, 0.5 * p.k * d * d) / std::sqrt(p.m1);
    return;
  }
  const gibbs::GibbsSystemSpec spec = gibbs::quadratic_system(c, p.k, 0.0, p.l, p.beta);
  const gibbs::WallState state = gibbs::sample_wall_state(spec, stream, ensemble);
  x1 = state.q[0];
  v1 = state.velocity[0] / std::sqrt(p.m1);
}

double spring_mass_step(double v_old, const SpringMassParams& params, RandomStream& stream,
                        gibbs::Ensemble ensemble) {
  if (!(v_old > 0.0)) throw ArgumentError("spring_mass_step: v_old must be positive");
  double x1 = 0.0;
  double v1 = 0.0;
  sample_bound_state(params, stream, ensemble, x1, v1);
  return spring_flight(v_old, x1, v1, params).speed;
}

double stationary_cdf(double u, const SpringMassParams& params) {
  if (!(u > 0.0)) return 0.0;
  return -std::expm1(-0.5 * params.beta * params.m2 * u * u);
}

}  // namespace rbm::spring
