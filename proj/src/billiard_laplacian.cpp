// SPDX-License-Identifier: Apache-2.0
#include "rbm/billiard_laplacian.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rbm/errors.hpp"
#include "rbm/quadrature.hpp"

namespace rbm::laplacian {

Polynomial::Polynomial(std::vector<double> coefficients) : c_(std::move(coefficients)) {
  while (c_.size() > 1 && c_.back() == 0.0) c_.pop_back();
}

std::size_t Polynomial::degree() const noexcept { return c_.empty() ? 0 : c_.size() - 1; }

double Polynomial::operator()(double z) const {
  double acc = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

Polynomial Polynomial::derivative() const {
  std::vector<double> d;
  for (std::size_t i = 1; i < c_.size(); ++i) d.push_back(static_cast<double>(i) * c_[i]);
  if (d.empty()) d.push_back(0.0);
  return Polynomial(std::move(d));
}

Differentiable Polynomial::as_differentiable() const {
  Polynomial d1 = derivative();
  Polynomial d2 = d1.derivative();
  return Differentiable{*this, d1, d2};
}

double fd_step(double z) { return std::max(1e-4, 1e-4 * std::abs(z)); }

namespace {

void require_positive(double z) {
  if (!(z > 0.0)) throw ArgumentError("laplacian: z must be positive");
}

double first_derivative(const Differentiable& f, double z) {
  if (f.df) return f.df(z);
  const double h = fd_step(z);
  return (f.f(z + h) - f.f(z - h)) / (2.0 * h);
}

double second_derivative(const Differentiable& f, double z) {
  if (f.d2f) return f.d2f(z);
  const double h = fd_step(z);
  if (f.df) return (f.df(z + h) - f.df(z - h)) / (2.0 * h);
  return (f.f(z + h) - 2.0 * f.f(z) + f.f(z - h)) / (h * h);
}

double rho(double z) { return z * std::exp(-0.5 * z * z); }

}  // namespace

double apply_laplacian(const Differentiable& f, double z) {
  require_positive(z);
  return (1.0 / z - z) * first_derivative(f, z) + second_derivative(f, z);
}

double apply_laplacian_sturm_liouville(const Differentiable& f, double z) {
  require_positive(z);
  const double h = std::min(1e-3 * std::max(1.0, z), 0.5 * z);
  auto flux = [&](double x) { return rho(x) * first_derivative(f, x); };
  auto central = [&](double step) { return (flux(z + step) - flux(z - step)) / (2.0 * step); };
  const double richardson = (4.0 * central(0.5 * h) - central(h)) / 3.0;
  return richardson / rho(z);
}

LaguerreEigenpair laguerre_eigenpair(int n) {
  if (n < 0 || n > 20) throw ArgumentError("laguerre_eigenpair: n must lie in [0, 20]");
  // Coefficients of L_k(x) in powers of x.
  std::vector<double> prev{1.0};
  std::vector<double> cur{1.0, -1.0};
  if (n == 0) cur = prev;
  for (int k = 1; k < n; ++k) {
    std::vector<double> next(static_cast<std::size_t>(k) + 2, 0.0);
    const auto kd = static_cast<double>(k);
    for (std::size_t i = 0; i < cur.size(); ++i) {
      next[i] += (2.0 * kd + 1.0) * cur[i];
      next[i + 1] -= cur[i];
    }
    for (std::size_t i = 0; i < prev.size(); ++i) next[i] -= kd * prev[i];
    for (double& c : next) c /= kd + 1.0;
    prev = std::move(cur);
    cur = std::move(next);
  }
  std::vector<double> in_z(2 * cur.size() - 1, 0.0);
  for (std::size_t j = 0; j < cur.size(); ++j) {
    in_z[2 * j] = std::ldexp(cur[j], -static_cast<int>(j));
  }
  return LaguerreEigenpair{n, -2.0 * n, Polynomial(std::move(in_z))};
}

double predicted_eigenvalue(int n, double gamma) {
  return 1.0 + 2.0 * gamma * gamma * (-2.0 * n);
}

MomentEstimate scattering_moments(double z, const two_masses::TwoMassParams& params,
                                  const two_masses::WallLaw& law, std::size_t n_samples,
                                  RandomStream stream) {
  require_positive(z);
  if (n_samples < 10000) throw ArgumentError("scattering_moments: n_samples must be >= 10^4");
  double s[3] = {0.0, 0.0, 0.0};
  double sq[3] = {0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < n_samples; ++i) {
    const double d = two_masses::random_map_step(z, law, stream, params) - z;
    double p = d;
    for (int k = 0; k < 3; ++k) {
      s[k] += p;
      sq[k] += p * p;
      p *= d;
    }
  }
  const auto n = static_cast<double>(n_samples);
  double mean[3];
  double se[3];
  for (int k = 0; k < 3; ++k) {
    mean[k] = s[k] / n;
    const double var = std::max(0.0, (sq[k] / n - mean[k] * mean[k]) * n / (n - 1.0));
    se[k] = std::sqrt(var / n);
  }
  return MomentEstimate{z, mean[0], mean[1], mean[2], se[0], se[1], se[2]};
}

double expected_increment(const std::function<double(double)>& f, double z,
                          const two_masses::TwoMassParams& params) {
  require_positive(z);
  const double sigma = params.sigma;
  const double fz = f(z);
  const double norm = 1.0 / (sigma * std::sqrt(2.0 * std::numbers::pi));
  auto integrand = [&](double w) {
    double acc = 0.0;
    for (const auto& out : two_masses::branch_menu(z, w, params)) {
      acc += out.probability * (f(out.value) - fz);
    }
    return acc * norm * std::exp(-0.5 * w * w / (sigma * sigma));
  };
  const double span = 12.0 * sigma;
  return quadrature::integrate(integrand, -span, span,
                               {-z / params.t1, -z / params.t2, -z / params.t3, 0.0}, 1e-12);
}

double generator_estimate(const std::function<double(double)>& f, double z,
                          const two_masses::TwoMassParams& params) {
  return expected_increment(f, z, params) / (2.0 * params.gamma * params.gamma);
}

}  // namespace rbm::laplacian
