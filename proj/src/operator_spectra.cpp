// SPDX-License-Identifier: Apache-2.0
#include "rbm/operator_spectra.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <string>

#include "rbm/errors.hpp"
#include "rbm/quadrature.hpp"
#include "rbm/simd.hpp"
#include "rbm/two_masses.hpp"

namespace rbm::spectra {

namespace {

void validate(const GridSpec& spec) {
  if (spec.n < 2) throw ArgumentError("GridSpec: n must be >= 2");
  if (!(spec.v_max > 0.0) || !std::isfinite(spec.v_max)) {
    throw ArgumentError("GridSpec: v_max must be positive and finite");
  }
}

std::vector<double> normalized_mu(const DensityFn& density, const Grid& grid) {
  std::vector<double> mu(grid.nodes.size());
  double total = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const double d = density(grid.nodes[i]);
    if (!(d >= 0.0) || !std::isfinite(d)) {
      throw NumericError("density is negative or non-finite at node " + std::to_string(i));
    }
    mu[i] = d * grid.weights[i];
    total += mu[i];
  }
  if (!(total > 0.0)) throw NumericError("density has no mass on the grid");
  for (double& m : mu) m /= total;
  return mu;
}

// Exact mass of each histogram cell, normalized.
std::vector<double> cell_masses(const DensityFn& density, const Grid& grid) {
  std::vector<double> mu(grid.nodes.size());
  double total = 0.0;
  for (std::size_t j = 0; j < mu.size(); ++j) {
    mu[j] = quadrature::integrate(density, grid.edges[j], grid.edges[j + 1]);
    if (!(mu[j] >= 0.0) || !std::isfinite(mu[j])) {
      throw NumericError("density mass is negative or non-finite in cell " + std::to_string(j));
    }
    total += mu[j];
  }
  if (!(total > 0.0)) throw NumericError("density has no mass on the grid");
  for (double& m : mu) m /= total;
  return mu;
}

DiscretizedOperator empty_operator(const Grid& grid) {
  DiscretizedOperator op;
  op.nodes = grid.nodes;
  op.quad_weights = grid.weights;
  op.edges = grid.edges;
  op.matrix = Matrix::Zero(static_cast<Eigen::Index>(grid.nodes.size()),
                           static_cast<Eigen::Index>(grid.nodes.size()));
  return op;
}

// Left Perron vector of a row-stochastic matrix by power iteration.
std::vector<double> stationary_vector(const Matrix& t) {
  const auto n = static_cast<std::size_t>(t.rows());
  std::vector<double> pi(n, 1.0 / static_cast<double>(n));
  std::vector<double> next(n);
  const std::span<const double> m(t.data(), n * n);
  for (int iter = 0; iter < 200000; ++iter) {
    simd::vecmat(pi, m, n, n, next);
    double total = 0.0;
    for (double x : next) total += x;
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      next[i] /= total;
      change += std::abs(next[i] - pi[i]);
    }
    pi.swap(next);
    if (change < 1e-15) break;
  }
  return pi;
}

}  // namespace

Grid make_grid(const GridSpec& spec) {
  validate(spec);
  const quadrature::Rule rule = spec.rule == QuadratureRule::midpoint
                                    ? quadrature::midpoint(spec.n, 0.0, spec.v_max)
                                    : quadrature::gauss_legendre(spec.n, 0.0, spec.v_max);
  Grid grid{rule.nodes, rule.weights, {}};
  // Cumulative weights interlace with the nodes for both rules.
  grid.edges.reserve(spec.n + 1);
  grid.edges.push_back(0.0);
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < spec.n; ++i) {
    acc += grid.weights[i];
    grid.edges.push_back(acc);
  }
  grid.edges.push_back(spec.v_max);
  return grid;
}

DiscretizedOperator discretize_nystrom(const KernelFn& kernel, const DensityFn& density,
                                       const GridSpec& spec) {
  const Grid grid = make_grid(spec);
  DiscretizedOperator op = empty_operator(grid);
  op.mu_weights = normalized_mu(density, grid);
  const std::size_t n = grid.nodes.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double k = kernel(grid.nodes[i], grid.nodes[j]);
      if (!std::isfinite(k) || k < 0.0) {
        throw NumericError("kernel value " + std::to_string(k) + " at (" + std::to_string(i) +
                           ", " + std::to_string(j) + ")");
      }
      op.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = k;
    }
  }
  return op;
}

DiscretizedOperator discretize_mc(const StepFn& step, const GridSpec& spec,
                                  std::size_t samples_per_node, const RandomStream& stream,
                                  const std::optional<DensityFn>& density) {
  if (samples_per_node < 1000) {
    throw ArgumentError("discretize_mc: samples_per_node must be >= 1000");
  }
  const Grid grid = make_grid(spec);
  DiscretizedOperator op = empty_operator(grid);
  const std::size_t n = grid.nodes.size();
  const double inv = 1.0 / static_cast<double>(samples_per_node);
  std::vector<double> spilled(n, 0.0);
  Matrix counts = Matrix::Zero(op.matrix.rows(), op.matrix.cols());
  for (std::size_t i = 0; i < n; ++i) {
    RandomStream row_stream = stream.fork(i);
    for (std::size_t s = 0; s < samples_per_node; ++s) {
      const double v = step(grid.nodes[i], row_stream);
      if (!(v > 0.0) || !std::isfinite(v)) {
        throw SimulationError("discretize_mc: step returned a non-positive speed");
      }
      std::size_t j;
      if (v >= spec.v_max) {
        spilled[i] += inv;
        j = n - 1;
      } else {
        j = static_cast<std::size_t>(
            std::upper_bound(grid.edges.begin() + 1, grid.edges.end() - 1, v) -
            (grid.edges.begin() + 1));
      }
      counts(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) += inv;
    }
  }
  op.mu_weights = density ? cell_masses(*density, grid) : stationary_vector(counts);
  for (std::size_t i = 0; i < n; ++i) op.spill_fraction += op.mu_weights[i] * spilled[i];
  for (std::size_t j = 0; j < n; ++j) {
    const double mu = op.mu_weights[j];
    const auto jj = static_cast<Eigen::Index>(j);
    op.matrix.col(jj) = mu > 0.0 ? Eigen::VectorXd(counts.col(jj) / mu)
                                 : Eigen::VectorXd::Zero(op.matrix.rows());
  }
  return op;
}

DiscretizedOperator make_reversible(const DiscretizedOperator& op, double tol,
                                    std::size_t max_iter) {
  const std::size_t n = op.size();
  const Eigen::Map<const Eigen::VectorXd> mu(op.mu_weights.data(),
                                             static_cast<Eigen::Index>(n));
  Matrix s = mu.asDiagonal() * op.matrix * mu.asDiagonal();
  s = (0.5 * (s + s.transpose())).eval();
  Eigen::VectorXd d = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n));
  Eigen::VectorXd sd(d.size());
  const std::span<const double> sm(s.data(), n * n);
  bool converged = false;
  for (std::size_t iter = 0; iter < max_iter; ++iter) {
    simd::matvec(sm, n, n, std::span<const double>(d.data(), n), std::span<double>(sd.data(), n));
    double err = 0.0;
    for (Eigen::Index i = 0; i < d.size(); ++i) {
      if (mu[i] <= 0.0) continue;
      if (!(sd[i] > 0.0)) throw NumericError("make_reversible: empty row " + std::to_string(i));
      const double ratio = d[i] * sd[i] / mu[i];
      err = std::max(err, std::abs(ratio - 1.0));
      d[i] *= std::sqrt(1.0 / ratio);
    }
    if (err < tol) {
      converged = true;
      break;
    }
  }
  if (!converged) throw NumericError("make_reversible: scaling did not converge");
  DiscretizedOperator out = op;
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    for (Eigen::Index j = 0; j < d.size(); ++j) {
      const double denom = mu[i] * mu[j];
      out.matrix(i, j) = denom > 0.0 ? d[i] * s(i, j) * d[j] / denom : 0.0;
    }
  }
  return out;
}

double row_sum_error(const DiscretizedOperator& op) {
  const std::size_t n = op.size();
  std::vector<double> sums(n);
  simd::matvec(std::span<const double>(op.matrix.data(), n * n), n, n, op.mu_weights, sums);
  double err = 0.0;
  for (double s : sums) err = std::max(err, std::abs(s - 1.0));
  return err;
}

Matrix transition_matrix(const DiscretizedOperator& op) {
  const Eigen::Map<const Eigen::RowVectorXd> mu(op.mu_weights.data(),
                                                static_cast<Eigen::Index>(op.size()));
  Matrix t = op.matrix.array().rowwise() * mu.array();
  for (Eigen::Index i = 0; i < t.rows(); ++i) {
    const double s = t.row(i).sum();
    if (!(s > 0.0)) throw NumericError("transition_matrix: empty row " + std::to_string(i));
    t.row(i) /= s;
  }
  return t;
}

SpectrumResult spectrum(const DiscretizedOperator& op, std::size_t k, bool with_densities) {
  const std::size_t n = op.size();
  if (k == 0 || k > n) throw ArgumentError("spectrum: k must lie in [1, n]");
  Eigen::VectorXd root(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) root[static_cast<Eigen::Index>(i)] = std::sqrt(op.mu_weights[i]);
  Eigen::MatrixXd a = root.asDiagonal() * op.matrix * root.asDiagonal();
  a = (0.5 * (a + a.transpose())).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      a, with_densities ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericError("spectrum: eigensolver failed");

  const Eigen::VectorXd& ev = solver.eigenvalues();  // ascending
  const auto last = static_cast<Eigen::Index>(n) - 1;
  SpectrumResult out;
  for (std::size_t i = 0; i < k; ++i) out.eigenvalues.push_back(ev[last - static_cast<Eigen::Index>(i)]);
  out.gap = 1.0 - ev[last - 1];
  out.min_eigenvalue = ev[0];
  out.complement_radius = std::max(std::abs(ev[last - 1]), std::abs(ev[0]));
  if (with_densities) {
    const Eigen::MatrixXd& vecs = solver.eigenvectors();
    for (std::size_t e = 0; e < k; ++e) {
      const auto col = last - static_cast<Eigen::Index>(e);
      std::vector<double> dens(n);
      for (std::size_t i = 0; i < n; ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        dens[i] = vecs(ii, col) * root[ii] / op.quad_weights[i];
      }
      out.eigendensities.push_back(std::move(dens));
    }
  }
  return out;
}

std::vector<GapPoint> gap_scan(const std::function<DiscretizedOperator(double)>& system,
                               const std::vector<double>& gammas) {
  std::vector<GapPoint> out;
  out.reserve(gammas.size());
  for (double g : gammas) out.push_back(GapPoint{g, spectrum(system(g), 2).gap});
  return out;
}

double hs_norm(const KernelFn& kernel, const DensityFn& density, const GridSpec& spec) {
  const Grid grid = make_grid(spec);
  const std::vector<double> mu = normalized_mu(density, grid);
  double total = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    for (std::size_t j = 0; j < mu.size(); ++j) {
      const double k = kernel(grid.nodes[i], grid.nodes[j]);
      total += k * k * mu[i] * mu[j];
    }
  }
  if (!std::isfinite(total)) throw NumericError("hs_norm: non-finite result");
  return std::sqrt(total);
}

EmpiricalDistribution stationary_distribution(const DiscretizedOperator& op) {
  return EmpiricalDistribution(op.edges, op.mu_weights);
}

std::vector<EmpiricalDistribution> evolve_density(const DiscretizedOperator& op,
                                                  const EmpiricalDistribution& initial,
                                                  const std::vector<long long>& checkpoints) {
  long long horizon = 0;
  for (long long c : checkpoints) {
    if (c < 0) throw ArgumentError("evolve_density: negative checkpoint");
    horizon = std::max(horizon, c);
  }
  const std::size_t n = op.size();
  std::vector<double> mass(n, 0.0);
  const auto& ie = initial.edges();
  double placed = 0.0;
  for (std::size_t b = 0; b < initial.bins(); ++b) {
    const double width = ie[b + 1] - ie[b];
    for (std::size_t j = 0; j < n; ++j) {
      const double overlap = std::min(ie[b + 1], op.edges[j + 1]) - std::max(ie[b], op.edges[j]);
      if (overlap > 0.0) {
        const double m = initial.masses()[b] * overlap / width;
        mass[j] += m;
        placed += m;
      }
    }
  }
  if (std::abs(placed - 1.0) > 1e-9) {
    throw ArgumentError("evolve_density: initial distribution extends beyond the grid");
  }

  const Matrix t = transition_matrix(op);
  const std::span<const double> tm(t.data(), n * n);
  std::vector<EmpiricalDistribution> snapshots;
  std::vector<std::vector<double>> at(static_cast<std::size_t>(horizon) + 1);
  std::vector<bool> wanted(at.size(), false);
  for (long long c : checkpoints) wanted[static_cast<std::size_t>(c)] = true;
  std::vector<double> next(n);
  for (long long step = 0; step <= horizon; ++step) {
    if (wanted[static_cast<std::size_t>(step)]) at[static_cast<std::size_t>(step)] = mass;
    if (step == horizon) break;
    simd::vecmat(mass, tm, n, n, next);
    mass.swap(next);
  }
  for (long long c : checkpoints) {
    snapshots.emplace_back(op.edges, at[static_cast<std::size_t>(c)]);
  }
  return snapshots;
}

DiscretizedOperator two_masses_operator(double gamma, double sigma, const GridSpec& grid,
                                        bool balanced) {
  const two_masses::TwoMassParams params = two_masses::derive_params(gamma, sigma);
  DiscretizedOperator op = discretize_nystrom(
      [&params](double v, double u) { return two_masses::kernel_K(v, u, params); },
      [sigma](double v) { return two_masses::stationary_density(v, sigma); }, grid);
  return balanced ? make_reversible(op) : op;
}

}  // namespace rbm::spectra
