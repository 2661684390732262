// SPDX-License-Identifier: Apache-2.0
#include "rbm/two_masses.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "rbm/errors.hpp"

namespace rbm::two_masses {

namespace {

constexpr double kProbSlack = 1e-12;
constexpr double kLogFloor = -700.0;
const double kLogSqrt2Pi = 0.5 * std::log(2.0 * std::numbers::pi);

void check_probability(double p, const char* what) {
  if (!(p >= -kProbSlack && p <= 1.0 + kProbSlack)) {
    throw ConsistencyError(std::string("branch_menu: ") + what + " probability " +
                           std::to_string(p) + " outside [0,1]");
  }
}

double clamp01(double p) { return p < 0.0 ? 0.0 : (p > 1.0 ? 1.0 : p); }

}  // namespace

TwoMassParams derive_params(double gamma, double sigma) {
  if (!(gamma > 0.0 && gamma < 1.0 / std::sqrt(3.0))) {
    throw ArgumentError("derive_params: gamma must lie in (0, 1/sqrt(3)), got " +
                        std::to_string(gamma));
  }
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw ArgumentError("derive_params: sigma must be positive");
  }
  const double g2 = gamma * gamma;
  const double s = 1.0 + g2;
  TwoMassParams p;
  p.gamma = gamma;
  p.sigma = sigma;
  p.a = (1.0 - g2) / s;
  p.b = 2.0 * gamma / s;
  p.a_bar = (1.0 - 6.0 * g2 + g2 * g2) / (s * s);
  p.b_bar = 4.0 * gamma * (1.0 - g2) / (s * s);
  p.t1 = gamma;
  p.t2 = 2.0 * gamma / (1.0 - g2);
  p.t3 = gamma * (3.0 - g2) / (1.0 - 3.0 * g2);
  p.c_lo = g2 * (3.0 + 3.0 * g2 + g2 * g2) / (s * (3.0 - g2));
  p.c_hi = (3.0 - g2) / s;
  return p;
}

WallLaw WallLaw::gaussian(double sigma) {
  if (!(sigma > 0.0)) throw ArgumentError("WallLaw::gaussian: sigma must be positive");
  return WallLaw(Kind::gaussian, sigma);
}

WallLaw WallLaw::bernoulli(double speed) {
  if (!(speed >= 0.0)) throw ArgumentError("WallLaw::bernoulli: speed must be >= 0");
  return WallLaw(Kind::bernoulli, speed);
}

double WallLaw::sample(RandomStream& stream) const {
  if (kind_ == Kind::gaussian) return sample_gaussian(stream, 0.0, scale_);
  return stream.uniform() < 0.5 ? -scale_ : scale_;
}

Region classify_region(double v, double w, const TwoMassParams& params) {
  if (!(v > 0.0)) throw ArgumentError("classify_region: v must be positive");
  if (w >= 0.0) return Region::w_nonneg;
  const double r = v / -w;
  if (r <= params.t1) return Region::i1;
  if (r <= params.t2) return Region::i2;
  if (r <= params.t3) return Region::i3;
  return Region::i4;
}

double prob_f1(double v, double abs_w, const TwoMassParams& params) {
  return params.gamma * abs_w / v;
}

double prob_f2_i3(double v, double abs_w, const TwoMassParams& params) {
  const double g = params.gamma;
  const double s = 1.0 + g * g;
  return 2.0 * (1.0 - g * g) / s - 4.0 * g / s * abs_w / v;
}

BranchMenu branch_menu(double v, double w, const TwoMassParams& params) {
  const Region region = classify_region(v, w, params);
  BranchMenu menu;
  auto push = [&menu](Branch br, double prob, double value) {
    menu.items[menu.size++] = BranchOutcome{br, prob, value};
  };
  if (region == Region::w_nonneg) {
    push(Branch::f1, 1.0, params.a * v + params.b * w);
    return menu;
  }
  const double aw = -w;
  const double f1 = params.a * v + params.b * aw;
  const double f2 = params.a * v - params.b * aw;
  const double f3 = -params.a_bar * v + params.b_bar * aw;
  if (region == Region::i1) {
    push(Branch::f1, 1.0, f1);
    return menu;
  }
  const double p = prob_f1(v, aw, params);
  check_probability(p, "F1");
  switch (region) {
    case Region::i2:
      push(Branch::f1, p, f1);
      push(Branch::f3, 1.0 - p, f3);
      break;
    case Region::i3: {
      const double q = prob_f2_i3(v, aw, params);
      check_probability(q, "F2");
      check_probability(1.0 - p - q, "F3");
      push(Branch::f1, p, f1);
      push(Branch::f2, q, f2);
      push(Branch::f3, 1.0 - p - q, f3);
      break;
    }
    default:
      push(Branch::f1, p, f1);
      push(Branch::f2, 1.0 - p, f2);
      break;
  }
  return menu;
}

double random_map_step(double v, const WallLaw& law, RandomStream& stream,
                       const TwoMassParams& params) {
  const double w = law.sample(stream);
  const BranchMenu menu = branch_menu(v, w, params);
  if (menu.size == 1) return menu.items[0].value;
  const double u = stream.uniform();
  double cumulative = 0.0;
  for (const auto& outcome : menu) {
    cumulative += outcome.probability;
    if (u < cumulative) return outcome.value;
  }
  return menu.items[menu.size - 1].value;
}

OracleOutcome oracle_step(double v, double x, double w, double gamma) {
  if (!(v > 0.0)) throw ArgumentError("oracle_step: v must be positive");
  if (!(x >= 0.0 && x <= 1.0)) throw ArgumentError("oracle_step: x must lie in [0, 1]");
  if (!(gamma > 0.0)) throw ArgumentError("oracle_step: gamma must be positive");

  // Original coordinates with m1 = 1, m2 = gamma^2 and the bound-mass range
  // chosen so that its scaled range is 1.
  const double m1 = 1.0;
  const double m2 = gamma * gamma;
  const double m = m1 + m2;
  const double root_m = std::sqrt(m);
  const double l = root_m;

  double x1 = x * l;
  double v1 = w * root_m;
  double x2 = l;
  double v2 = -v * root_m / gamma;

  constexpr std::size_t kMaxEvents = 1'000'000;
  constexpr double kInf = std::numeric_limits<double>::infinity();
  enum class Event { wall0, wall_l, collide, exit };

  for (std::size_t events = 0; events < kMaxEvents; ++events) {
    double t = kInf;
    Event next = Event::exit;
    auto consider = [&](double dt, Event e) {
      if (dt < t) {
        t = dt;
        next = e;
      }
    };
    if (v2 < v1) consider((x2 - x1) / (v1 - v2), Event::collide);
    if (v1 < 0.0) consider(x1 / -v1, Event::wall0);
    if (v1 > 0.0) consider((l - x1) / v1, Event::wall_l);
    if (v2 > 0.0) consider((l - x2) / v2, Event::exit);
    if (!(t < kInf)) throw SimulationError("oracle_step: no future event");
    t = std::max(t, 0.0);

    x1 += v1 * t;
    x2 += v2 * t;
    switch (next) {
      case Event::collide: {
        const double n1 = ((m1 - m2) * v1 + 2.0 * m2 * v2) / m;
        const double n2 = ((m2 - m1) * v2 + 2.0 * m1 * v1) / m;
        v1 = n1;
        v2 = n2;
        x2 = x1;
        break;
      }
      case Event::wall0:
        x1 = 0.0;
        v1 = -v1;
        break;
      case Event::wall_l:
        x1 = l;
        v1 = -v1;
        break;
      case Event::exit:
        return OracleOutcome{v2 * gamma / root_m, v1 / root_m, events};
    }
  }
  throw SimulationError("oracle_step: exceeded event limit (parameter corruption?)");
}

OracleOutcome oracle_step(double v, double x, double w, const TwoMassParams& params) {
  return oracle_step(v, x, w, params.gamma);
}

double stationary_density(double v, double sigma) {
  if (!(v > 0.0)) return 0.0;
  const double s2 = sigma * sigma;
  return v / s2 * std::exp(-0.5 * v * v / s2);
}

double stationary_cdf(double v, double sigma) {
  if (!(v > 0.0)) return 0.0;
  return -std::expm1(-0.5 * v * v / (sigma * sigma));
}

namespace {

struct KernelTerms {
  double log_gauss_f12;  // log rho_{b sigma}(u - a v)
  double weight_f12;
  double log_gauss_f3;   // log rho_{b_bar sigma}(u + a_bar v)
  double weight_f3;
};

// The two Gaussian families of the kernel with their branch weights. F1 and
// F2 outputs u = a v +- b|w| share the first family; F3 outputs
// u = -a_bar v + b_bar |w| form the second.
KernelTerms kernel_terms(double v, double u, const TwoMassParams& p) {
  const double av = p.a * v;
  const double hi = p.c_hi * v;
  const double lo = v / p.c_hi;

  KernelTerms t{};
  const double d1 = u - av;
  const double s1 = p.b * p.sigma;
  t.log_gauss_f12 = -0.5 * d1 * d1 / (s1 * s1) - std::log(s1) - kLogSqrt2Pi;
  const double w1 = std::abs(d1) / p.b;
  const double p1 = clamp01(prob_f1(v, w1, p));
  double s = 0.0;
  if (u > av) s += 1.0;                    // w >= 0
  if (u > hi) s += 1.0;                    // w < 0, I1
  if (u > av && u < hi) s += p1;           // F1 on I2..I4
  if (u > 0.0 && u < lo) s += clamp01(prob_f2_i3(v, w1, p));  // F2 on I3
  if (u > lo && u < av) s += 1.0 - p1;     // F2 on I4
  t.weight_f12 = s;

  const double d3 = u + p.a_bar * v;
  const double s3 = p.b_bar * p.sigma;
  t.log_gauss_f3 = -0.5 * d3 * d3 / (s3 * s3) - std::log(s3) - kLogSqrt2Pi;
  const double w3 = d3 / p.b_bar;
  const double p3 = clamp01(prob_f1(v, w3, p));
  double s_bar = 0.0;
  if (u > v && u < hi) s_bar += 1.0 - p3;  // F3 on I2
  if (u > lo && u < v) {                   // F3 on I3
    s_bar += std::max(0.0, 1.0 - p3 - prob_f2_i3(v, w3, p));
  }
  t.weight_f3 = s_bar;
  return t;
}

double weighted_exp(double weight, double log_value) {
  if (weight <= 0.0 || log_value < kLogFloor) return 0.0;
  return weight * std::exp(log_value);
}

}  // namespace

double kernel_kappa(double v, double u, const TwoMassParams& params) {
  if (!(v > 0.0) || !(u > 0.0)) return 0.0;
  const KernelTerms t = kernel_terms(v, u, params);
  return weighted_exp(t.weight_f12, t.log_gauss_f12) + weighted_exp(t.weight_f3, t.log_gauss_f3);
}

KernelValue kernel_K_checked(double v, double u, const TwoMassParams& params) {
  if (!(v > 0.0) || !(u > 0.0)) return KernelValue{0.0, false};
  const double s2 = params.sigma * params.sigma;
  const double log_rho = std::log(u) - std::log(s2) - 0.5 * u * u / s2;
  const KernelTerms t = kernel_terms(v, u, params);
  const double value = weighted_exp(t.weight_f12, t.log_gauss_f12 - log_rho) +
                       weighted_exp(t.weight_f3, t.log_gauss_f3 - log_rho);
  return KernelValue{value, log_rho < std::log(DBL_MIN)};
}

double kernel_K(double v, double u, const TwoMassParams& params) {
  return kernel_K_checked(v, u, params).value;
}

}  // namespace rbm::two_masses
