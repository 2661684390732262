// SPDX-License-Identifier: Apache-2.0
#pragma once

// Specular scattering of a point particle off a periodic piecewise-linear
// relief. One period (a cell) spans z in [0, 1]; the particle enters through
// the line y = depth moving down and leaves through it moving up. Angles are
// measured from the inward normal, positive toward increasing z.

#include <cstddef>
#include <istream>
#include <string>
#include <vector>

#include "rbm/core_stats.hpp"
#include "rbm/operator_spectra.hpp"

namespace rbm::surface {

struct Vertex {
  double z;
  double y;
};

class BilliardCell {
 public:
  /// Vertices with z strictly increasing from 0 to 1, equal end heights and
  /// y >= 0.
  explicit BilliardCell(std::vector<Vertex> vertices);

  [[nodiscard]] static BilliardCell flat();
  /// Symmetric right-angled V notch centered at z = 0.5, depth 0.1.
  [[nodiscard]] static BilliardCell notch();
  /// CSV with a header line and `z,y` rows.
  [[nodiscard]] static BilliardCell from_csv(std::istream& in);
  [[nodiscard]] static BilliardCell from_csv_file(const std::string& path);

  [[nodiscard]] const std::vector<Vertex>& vertices() const noexcept { return vertices_; }
  [[nodiscard]] double depth() const noexcept { return depth_; }

 private:
  std::vector<Vertex> vertices_;
  double depth_ = 0.0;
};

/// Reduced cell of the rotating dumbbell:
/// y = max(-gamma sin 2 pi z, sin(2 pi z) / gamma) / (2 pi),
/// sampled with segments_per_arc segments on each half period.
[[nodiscard]] BilliardCell dumbbell_cell(double gamma, int segments_per_arc = 64);

struct ScatterResult {
  double theta_out = 0.0;
  double exit_z = 0.0;
  std::size_t bounces = 0;
  std::size_t corner_retries = 0;  ///< entry perturbations after vertex hits
  double final_speed = 1.0;
};

/// Traces one ray. Requires |theta_in| < pi/2 and entry_z in [0, 1).
/// Throws SimulationError after 10^4 reflections.
[[nodiscard]] ScatterResult scatter(const BilliardCell& cell, double theta_in, double entry_z);

/// scatter with entry_z uniform on [0, 1).
double random_scatter(const BilliardCell& cell, double theta, RandomStream& stream);

/// CDF of the cosine law, (1 + sin theta) / 2.
[[nodiscard]] double cosine_cdf(double theta);

/// Cell-averaged Monte Carlo operator on n equal angle cells of
/// (-pi/2, pi/2). Row i starts from the cosine law restricted to cell i
/// (substream stream.fork(i)); mu is the cosine-law mass of each cell.
[[nodiscard]] spectra::DiscretizedOperator estimate_cell_operator(const BilliardCell& cell,
                                                                  std::size_t n,
                                                                  std::size_t samples_per_node,
                                                                  const RandomStream& stream);

}  // namespace rbm::surface
