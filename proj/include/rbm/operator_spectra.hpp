// SPDX-License-Identifier: Apache-2.0
#pragma once

// Finite-rank approximations of a Markov operator on (0, v_max) that is
// reversible with respect to a stationary measure mu. The matrix stores the
// kernel relative to mu: (Pf)(v_i) ~ sum_j matrix(i, j) f(v_j) mu_j.

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "rbm/core_stats.hpp"

namespace rbm::spectra {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class QuadratureRule { midpoint, gauss_legendre };

struct GridSpec {
  std::size_t n = 200;
  double v_max = 6.0;
  QuadratureRule rule = QuadratureRule::gauss_legendre;
};

/// Nodes, weights and cell edges. Cell j is [edges[j], edges[j+1]) with
/// width weights[j] and contains nodes[j].
struct Grid {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::vector<double> edges;
};

[[nodiscard]] Grid make_grid(const GridSpec& spec);

struct DiscretizedOperator {
  std::vector<double> nodes;
  std::vector<double> quad_weights;
  std::vector<double> edges;
  std::vector<double> mu_weights;  ///< sums to 1
  Matrix matrix;
  /// Monte Carlo mass landing beyond v_max, for a start drawn from mu.
  double spill_fraction = 0.0;

  [[nodiscard]] std::size_t size() const noexcept { return nodes.size(); }
};

using KernelFn = std::function<double(double, double)>;
using DensityFn = std::function<double(double)>;
using StepFn = std::function<double(double, RandomStream&)>;

/// matrix(i, j) = K(v_i, v_j); mu from density times quadrature weights.
[[nodiscard]] DiscretizedOperator discretize_nystrom(const KernelFn& kernel,
                                                     const DensityFn& density,
                                                     const GridSpec& grid);

/// Row i is the histogram of step(v_i) over the grid cells, divided by the
/// cell masses of the density.
/// Without a density, mu is the stationary vector of the estimated chain.
/// Row i uses the substream stream.fork(i).
[[nodiscard]] DiscretizedOperator discretize_mc(const StepFn& step, const GridSpec& grid,
                                                std::size_t samples_per_node,
                                                const RandomStream& stream,
                                                const std::optional<DensityFn>& density = {});

/// Closest kernel (in the symmetric-scaling sense) that is exactly
/// mu-stochastic and mu-symmetric. Replaces matrix by D S D / (mu_i mu_j)
/// with S the symmetrized mu M mu and D the diagonal solving
/// d_i (S d)_i = mu_i.
[[nodiscard]] DiscretizedOperator make_reversible(const DiscretizedOperator& op,
                                                  double tol = 1e-13,
                                                  std::size_t max_iter = 100000);

/// max_i |sum_j matrix(i, j) mu_j - 1|
[[nodiscard]] double row_sum_error(const DiscretizedOperator& op);

/// Row-stochastic transition matrix T(i, j) = matrix(i, j) mu_j / row sum.
[[nodiscard]] Matrix transition_matrix(const DiscretizedOperator& op);

struct SpectrumResult {
  std::vector<double> eigenvalues;  ///< descending
  double gap = 0.0;                 ///< 1 - eigenvalues[1]
  double min_eigenvalue = 0.0;
  double complement_radius = 0.0;   ///< max |lambda| over all but the leading one
  /// Eigenvalue index -> eigenfunction times mu, per unit length at the nodes.
  std::vector<std::vector<double>> eigendensities;
};

/// Top-k eigenvalues of D^{1/2} M D^{1/2} after explicit symmetrization.
[[nodiscard]] SpectrumResult spectrum(const DiscretizedOperator& op, std::size_t k,
                                      bool with_densities = false);

struct GapPoint {
  double gamma;
  double gap;
};

[[nodiscard]] std::vector<GapPoint> gap_scan(
    const std::function<DiscretizedOperator(double)>& system,
    const std::vector<double>& gammas);

/// sqrt(sum_ij K(v_i, v_j)^2 mu_i mu_j)
[[nodiscard]] double hs_norm(const KernelFn& kernel, const DensityFn& density,
                             const GridSpec& grid);

/// mu as a histogram over the operator's cells.
[[nodiscard]] EmpiricalDistribution stationary_distribution(const DiscretizedOperator& op);

/// mu_0 P^n at each checkpoint. The initial histogram is projected onto the
/// operator's cells by overlap.
[[nodiscard]] std::vector<EmpiricalDistribution> evolve_density(
    const DiscretizedOperator& op, const EmpiricalDistribution& initial,
    const std::vector<long long>& checkpoints);

/// Balanced Nystrom operator of the two-masses random map.
[[nodiscard]] DiscretizedOperator two_masses_operator(double gamma, double sigma,
                                                      const GridSpec& grid,
                                                      bool balanced = true);

}  // namespace rbm::spectra
