// SPDX-License-Identifier: Apache-2.0
// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "rbm/billiard_laplacian.hpp"
#include "rbm/core_stats.hpp"
#include "rbm/operator_spectra.hpp"
#include "rbm/quadrature.hpp"
#include "rbm/spring_mass.hpp"
#include "rbm/surface_scattering.hpp"
#include "rbm/two_masses.hpp"

using namespace rbm;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void report(int id, const char* name, double budget_s, const std::function<Outcome()>& check) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o{false, ""};
  try {
    o = check();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = secs < budget_s;
  const bool pass = o.pass && in_time;
  if (!pass) ++failures;
  std::printf("%s %2d %s: %s [%.1f s of %.0f s]\n", pass ? "PASS" : "FAIL", id, name,
              o.detail.c_str(), secs, budget_s);
  std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

double rayleigh(double v) { return two_masses::stationary_density(v, 1.0); }

double gap_of(double gamma) {
  return spectra::spectrum(spectra::two_masses_operator(gamma, 1.0, {200, 6.0}), 2).gap;
}

}  // namespace

int main() {
  double lambda2 = std::numeric_limits<double>::quiet_NaN();

  report(1, "second eigenvalue at gamma 0.1", 30.0, [&] {
    lambda2 = spectra::spectrum(spectra::two_masses_operator(0.1, 1.0, {200, 6.0}), 2).eigenvalues[1];
    return Outcome{lambda2 >= 0.9556 && lambda2 <= 0.9656, fmt("lambda2 = %.6f", lambda2)};
  });

  report(2, "Laplacian eigenvalue prediction", 1.0, [&] {
    const double pred = laplacian::predicted_eigenvalue(1, 0.1);
    const double d = std::abs(lambda2 - pred);
    return Outcome{d < 0.01, fmt("predicted %.4f, |diff| = %.6f", pred, d)};
  });

  report(3, "gap over 4 gamma^2", 180.0, [] {
    bool ok = true;
    std::string detail;
    for (double g : {0.05, 0.1, 0.15}) {
      const double r = gap_of(g) / (4.0 * g * g);
      ok = ok && r >= 0.85 && r <= 1.15;
      detail += fmt("g=%.2f: %.4f ", g, r);
    }
    return Outcome{ok, detail};
  });

  report(4, "stationary Maxwell-Boltzmann chain", 60.0, [] {
    const auto p = two_masses::derive_params(0.1, 1.0);
    const auto law = two_masses::WallLaw::gaussian(1.0);
    RandomStream s = make_stream(2024);
    double v = 1.0;
    for (int i = 0; i < 1000; ++i) v = two_masses::random_map_step(v, law, s, p);
    std::vector<double> chain;
    chain.reserve(1000000);
    for (int i = 0; i < 1000000; ++i) {
      v = two_masses::random_map_step(v, law, s, p);
      chain.push_back(v);
    }
    const double ks = ks_distance(chain, [](double x) { return two_masses::stationary_cdf(x, 1.0); });
    return Outcome{ks < 0.01, fmt("KS = %.5f", ks)};
  });

  report(5, "kernel row normalization", 10.0, [] {
    double worst = 0.0;
    for (double g : {0.1, 0.3}) {
      const auto p = two_masses::derive_params(g, 1.0);
      for (double v : {0.5, 1.0, 2.0}) {
        const double mass = quadrature::integrate(
            [&](double u) { return two_masses::kernel_kappa(v, u, p); }, 0.0,
            v * p.c_hi + 20.0, {p.a * v, p.c_hi * v, v / p.c_hi, v, p.c_lo * v});
        worst = std::max(worst, std::abs(mass - 1.0));
      }
    }
    return Outcome{worst < 1e-3, fmt("max |row - 1| = %.2e", worst)};
  });

  report(6, "detailed balance", 10.0, [] {
    const auto p = two_masses::derive_params(0.1, 1.0);
    RandomStream s = make_stream(6);
    double worst = 0.0;
    int pairs = 0;
    while (pairs < 100) {
      const double v = 0.05 + 4.0 * s.uniform();
      const double u = 0.05 + 4.0 * s.uniform();
      const double lhs = rayleigh(v) * two_masses::kernel_kappa(v, u, p);
      const double rhs = rayleigh(u) * two_masses::kernel_kappa(u, v, p);
      const double scale = std::max(std::abs(lhs), std::abs(rhs));
      ++pairs;
      if (scale > 0.0) worst = std::max(worst, std::abs(lhs - rhs) / scale);
    }
    return Outcome{worst < 1e-6, fmt("max relative asymmetry = %.2e", worst)};
  });

  report(7, "random map vs event-driven oracle", 60.0, [] {
    const auto p = two_masses::derive_params(0.1, 1.0);
    const auto law = two_masses::WallLaw::gaussian(1.0);
    RandomStream s = make_stream(7);
    bool ok = true;
    std::string detail;
    for (double v : {0.3, 1.0, 3.0}) {
      std::vector<double> a, b;
      for (int i = 0; i < 100000; ++i) {
        a.push_back(two_masses::random_map_step(v, law, s, p));
        b.push_back(two_masses::oracle_step(v, s.uniform(), law.sample(s), p).speed);
      }
      const auto edges = EmpiricalDistribution::uniform_edges(0.0, v + 5.0, 50);
      const double tv = tv_distance(EmpiricalDistribution::from_samples(a, edges),
                                    EmpiricalDistribution::from_samples(b, edges));
      ok = ok && tv < 0.02;
      detail += fmt("v=%.1f: TV %.4f ", v, tv);
    }
    return Outcome{ok, detail};
  });

  report(8, "density evolution", 30.0, [] {
    const auto op = spectra::two_masses_operator(0.1, 1.0, {200, 6.0});
    const auto mu = spectra::stationary_distribution(op);
    const auto snaps =
        spectra::evolve_density(op, EmpiricalDistribution({2.0, 3.0}, {1.0}), {1, 10, 50, 100});
    bool ok = true;
    double prev = 2.0;
    std::string detail = "TV";
    for (const auto& s : snaps) {
      const double tv = tv_distance(s, mu);
      ok = ok && tv < prev;
      prev = tv;
      detail += fmt(" %.4f", tv);
    }
    return Outcome{ok && prev < 0.05, detail};
  });

  report(9, "Laguerre eigen-identities", 1.0, [] {
    double worst = 0.0;
    for (int n = 0; n <= 5; ++n) {
      const auto e = laplacian::laguerre_eigenpair(n);
      const auto d = e.phi.as_differentiable();
      for (int i = 0; i < 100; ++i) {
        const double z = 0.05 + 5.0 * i / 99.0;
        const double rhs = -2.0 * n * e.phi(z);
        worst = std::max(worst, std::abs(laplacian::apply_laplacian(d, z) - rhs) /
                                    std::max(1.0, std::abs(rhs)));
      }
    }
    return Outcome{worst < 1e-10, fmt("max error = %.2e", worst)};
  });

  report(10, "spring-mass stationarity", 120.0, [] {
    const spring::SpringMassParams p;
    RandomStream s = make_stream(10);
    double v = 1.0;
    for (int i = 0; i < 1000; ++i) v = spring::spring_mass_step(v, p, s);
    std::vector<double> chain;
    chain.reserve(100000);
    for (int i = 0; i < 100000; ++i) {
      v = spring::spring_mass_step(v, p, s);
      chain.push_back(v);
    }
    const double ks = ks_distance(chain, [&](double u) { return spring::stationary_cdf(u, p); });
    return Outcome{ks < 0.015, fmt("KS = %.5f", ks)};
  });

  report(11, "cosine-law invariance", 120.0, [] {
    const std::vector<std::pair<const char*, surface::BilliardCell>> cells{
        {"flat", surface::BilliardCell::flat()},
        {"notch", surface::BilliardCell::notch()},
        {"dumbbell", surface::dumbbell_cell(0.5)}};
    bool ok = true;
    std::string detail;
    std::uint64_t seed = 11;
    for (const auto& [name, cell] : cells) {
      RandomStream s = make_stream(seed++);
      std::vector<double> out;
      out.reserve(1000000);
      for (int i = 0; i < 1000000; ++i) {
        out.push_back(surface::random_scatter(cell, cosine_angle_from_uniform(s.uniform()), s));
      }
      const double ks = ks_distance(out, surface::cosine_cdf);
      ok = ok && ks < 0.01;
      detail += std::string(name) + fmt(" %.5f, ", ks);
    }
    // Angle from the tangent, phi = theta + pi/2 on (0, pi), density sin(phi) / 2.
    const auto cell = surface::dumbbell_cell(0.5);
    RandomStream s = make_stream(seed);
    std::vector<double> out;
    out.reserve(1000000);
    for (int i = 0; i < 1000000; ++i) {
      const double phi = std::acos(1.0 - 2.0 * s.uniform());
      if (phi <= 0.0 || phi >= std::numbers::pi) continue;
      out.push_back(surface::random_scatter(cell, phi - std::numbers::pi / 2, s) + std::numbers::pi / 2);
    }
    const double ks = ks_distance(out, [](double phi) { return 0.5 * (1.0 - std::cos(phi)); });
    ok = ok && ks < 0.01;
    detail += fmt("dumbbell sine law %.5f", ks);
    return Outcome{ok, detail};
  });

  report(12, "dumbbell gap scan", 300.0, [] {
    bool ok = true;
    std::string detail;
    for (double g : {0.3, 0.5, 0.7}) {
      const auto cell = surface::dumbbell_cell(g);
      double lo = 2.0, hi = -1.0;
      for (std::uint64_t seed : {1, 2, 3}) {
        const double gap =
            spectra::spectrum(surface::estimate_cell_operator(cell, 50, 20000, make_stream(seed)), 2).gap;
        ok = ok && gap > 0.0 && gap < 1.0;
        lo = std::min(lo, gap);
        hi = std::max(hi, gap);
      }
      ok = ok && hi - lo < 0.01;
      detail += fmt("g=%.1f: %.4f..%.4f ", g, lo, hi);
    }
    return Outcome{ok, detail};
  });

  report(13, "Hilbert-Schmidt finiteness", 60.0, [] {
    auto norm = [](double g, std::size_t n) {
      const auto p = two_masses::derive_params(g, 1.0);
      return spectra::hs_norm([&](double v, double u) { return two_masses::kernel_K(v, u, p); },
                              rayleigh, {n, 6.0});
    };
    const double n200 = norm(0.1, 200);
    const double n400 = norm(0.1, 400);
    const double rel = std::abs(n200 - n400) / n400;
    const double g20 = norm(0.2, 400), g10 = n400, g05 = norm(0.05, 400);
    const bool ok = std::isfinite(n200) && std::isfinite(n400) && rel < 0.05 && g20 < g10 && g10 < g05;
    return Outcome{ok, fmt("refinement change %.4f; ", rel) +
                           fmt("norms at 0.2/0.1/0.05: %.3f %.3f %.3f", g20, g10, g05)};
  });

  return failures == 0 ? 0 : 1;
}
