// SPDX-License-Identifier: Apache-2.0
#include "rbm/surface_scattering.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "rbm/errors.hpp"

namespace rbm::surface {

namespace {

constexpr std::size_t kMaxBounces = 10'000;
constexpr std::size_t kMaxWraps = 10'000'000;
constexpr int kMaxCornerRetries = 100;
constexpr double kCornerTol = 1e-12;
constexpr double kPerturbation = 1e-9;

struct CornerHit {};

double cross(double ax, double ay, double bx, double by) { return ax * by - ay * bx; }

// True if vertex k joins two segments that are not collinear (periodically).
bool is_corner(const std::vector<Vertex>& v, std::size_t k) {
  const std::size_t nseg = v.size() - 1;
  const std::size_t before = (k == 0) ? nseg - 1 : k - 1;
  const std::size_t after = (k == nseg) ? 0 : k;
  const double ax = v[before + 1].z - v[before].z;
  const double ay = v[before + 1].y - v[before].y;
  const double bx = v[after + 1].z - v[after].z;
  const double by = v[after + 1].y - v[after].y;
  return std::abs(cross(ax, ay, bx, by)) > kCornerTol * std::hypot(ax, ay) * std::hypot(bx, by);
}

ScatterResult trace(const BilliardCell& cell, double theta, double z0) {
  const auto& v = cell.vertices();
  const std::size_t nseg = v.size() - 1;
  const double depth = cell.depth();
  constexpr double kInf = std::numeric_limits<double>::infinity();

  double z = z0;
  double y = depth;
  double dz = std::sin(theta);
  double dy = -std::cos(theta);
  std::size_t bounces = 0;
  std::size_t wraps = 0;
  long last = -1;
  bool first = true;

  while (true) {
    if (dy > 0.0 && y >= depth) break;

    double t_hit = kInf;
    long seg = -1;
    double s_hit = 0.0;
    for (std::size_t i = 0; i < nseg; ++i) {
      if (static_cast<long>(i) == last) continue;
      const double ez = v[i + 1].z - v[i].z;
      const double ey = v[i + 1].y - v[i].y;
      const double denom = cross(dz, dy, ez, ey);
      if (denom == 0.0) continue;
      const double wz = v[i].z - z;
      const double wy = v[i].y - y;
      const double t = cross(wz, wy, ez, ey) / denom;
      const double s = cross(wz, wy, dz, dy) / denom;
      const bool ahead = first ? t >= 0.0 : t > 1e-12;
      if (ahead && s >= -kCornerTol && s <= 1.0 + kCornerTol && t < t_hit) {
        t_hit = t;
        seg = static_cast<long>(i);
        s_hit = s;
      }
    }
    first = false;
    const double t_wrap = dz > 0.0 ? (1.0 - z) / dz : (dz < 0.0 ? -z / dz : kInf);
    const double t_exit = dy > 0.0 ? (depth - y) / dy : kInf;

    if (seg >= 0 && t_hit <= std::min(t_wrap, t_exit)) {
      const auto i = static_cast<std::size_t>(seg);
      if ((s_hit < kCornerTol && is_corner(v, i)) ||
          (s_hit > 1.0 - kCornerTol && is_corner(v, i + 1))) {
        throw CornerHit{};
      }
      z += dz * t_hit;
      y += dy * t_hit;
      const double ez = v[i + 1].z - v[i].z;
      const double ey = v[i + 1].y - v[i].y;
      const double len = std::hypot(ez, ey);
      const double nz = -ey / len;
      const double ny = ez / len;
      const double dn = dz * nz + dy * ny;
      dz -= 2.0 * dn * nz;
      dy -= 2.0 * dn * ny;
      last = seg;
      if (++bounces > kMaxBounces) throw SimulationError("scatter: reflection cap exceeded");
    } else if (t_exit <= t_wrap) {
      z += dz * t_exit;
      y = depth;
    } else {
      z = dz > 0.0 ? 0.0 : 1.0;
      y += dy * t_wrap;
      last = -1;
      if (++wraps > kMaxWraps) throw SimulationError("scatter: wrap cap exceeded");
    }
  }
  ScatterResult r;
  r.theta_out = std::atan2(dz, dy);
  r.exit_z = z - std::floor(z);
  r.bounces = bounces;
  r.final_speed = std::hypot(dz, dy);
  return r;
}

}  // namespace

BilliardCell::BilliardCell(std::vector<Vertex> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.size() < 2) throw ArgumentError("BilliardCell: need at least two vertices");
  if (vertices_.front().z != 0.0 || vertices_.back().z != 1.0) {
    throw ArgumentError("BilliardCell: z must run from 0 to 1");
  }
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    const Vertex& p = vertices_[i];
    if (!std::isfinite(p.y) || p.y < 0.0) throw ArgumentError("BilliardCell: y must be >= 0");
    if (i > 0 && !(p.z > vertices_[i - 1].z)) {
      throw ArgumentError("BilliardCell: z must be strictly increasing");
    }
    depth_ = std::max(depth_, p.y);
  }
  if (vertices_.front().y != vertices_.back().y) {
    throw ArgumentError("BilliardCell: end heights must match");
  }
}

BilliardCell BilliardCell::flat() { return BilliardCell({{0.0, 0.0}, {1.0, 0.0}}); }

BilliardCell BilliardCell::notch() {
  return BilliardCell({{0.0, 0.1}, {0.4, 0.1}, {0.5, 0.0}, {0.6, 0.1}, {1.0, 0.1}});
}

BilliardCell BilliardCell::from_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ArgumentError("cell CSV: missing header");
  std::vector<Vertex> vertices;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    row.imbue(std::locale::classic());
    Vertex p{};
    std::string extra;
    if (!(row >> p.z >> p.y) || (row >> extra)) {
      throw ArgumentError("cell CSV: bad row at line " + std::to_string(lineno));
    }
    vertices.push_back(p);
  }
  return BilliardCell(std::move(vertices));
}

BilliardCell BilliardCell::from_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open cell file " + path);
  return from_csv(in);
}

BilliardCell dumbbell_cell(double gamma, int segments_per_arc) {
  if (!(gamma > 0.0)) throw ArgumentError("dumbbell_cell: gamma must be positive");
  if (segments_per_arc < 16) throw ArgumentError("dumbbell_cell: segments_per_arc must be >= 16");
  const double two_pi = 2.0 * std::numbers::pi;
  auto height = [&](double z) {
    const double s = std::sin(two_pi * z);
    return std::max(0.0, std::max(-gamma * s, s / gamma) / two_pi);
  };
  std::vector<Vertex> vertices;
  const int total = 2 * segments_per_arc;
  for (int i = 0; i <= total; ++i) {
    const double z = 0.5 * static_cast<double>(i) / segments_per_arc;
    const double y = (i == 0 || i == segments_per_arc || i == total) ? 0.0 : height(z);
    vertices.push_back({i == total ? 1.0 : z, y});
  }
  return BilliardCell(std::move(vertices));
}

ScatterResult scatter(const BilliardCell& cell, double theta_in, double entry_z) {
  if (!(std::abs(theta_in) < 0.5 * std::numbers::pi)) {
    throw ArgumentError("scatter: |theta| must be below pi/2");
  }
  if (!(entry_z >= 0.0 && entry_z < 1.0)) throw ArgumentError("scatter: entry_z outside [0, 1)");
  double z = entry_z;
  for (int retry = 0; retry <= kMaxCornerRetries; ++retry) {
    try {
      ScatterResult r = trace(cell, theta_in, z);
      r.corner_retries = static_cast<std::size_t>(retry);
      return r;
    } catch (const CornerHit&) {
      z += kPerturbation;
      if (z >= 1.0) z -= 1.0;
    }
  }
  throw SimulationError("scatter: repeated corner hits");
}

double random_scatter(const BilliardCell& cell, double theta, RandomStream& stream) {
  return scatter(cell, theta, stream.uniform()).theta_out;
}

double cosine_cdf(double theta) {
  const double half_pi = 0.5 * std::numbers::pi;
  return 0.5 * (1.0 + std::sin(std::clamp(theta, -half_pi, half_pi)));
}

spectra::DiscretizedOperator estimate_cell_operator(const BilliardCell& cell, std::size_t n,
                                                    std::size_t samples_per_node,
                                                    const RandomStream& stream) {
  if (n < 2) throw ArgumentError("estimate_cell_operator: n must be >= 2");
  if (samples_per_node < 1000) {
    throw ArgumentError("estimate_cell_operator: samples_per_node must be >= 1000");
  }
  const double pi = std::numbers::pi;
  const double width = pi / static_cast<double>(n);
  spectra::DiscretizedOperator op;
  for (std::size_t j = 0; j <= n; ++j) op.edges.push_back(-0.5 * pi + width * static_cast<double>(j));
  for (std::size_t j = 0; j < n; ++j) {
    op.nodes.push_back(0.5 * (op.edges[j] + op.edges[j + 1]));
    op.quad_weights.push_back(width);
    op.mu_weights.push_back(cosine_cdf(op.edges[j + 1]) - cosine_cdf(op.edges[j]));
  }
  const auto ni = static_cast<Eigen::Index>(n);
  op.matrix = spectra::Matrix::Zero(ni, ni);
  const double inv = 1.0 / static_cast<double>(samples_per_node);
  for (std::size_t i = 0; i < n; ++i) {
    RandomStream row = stream.fork(i);
    const double c_lo = cosine_cdf(op.edges[i]);
    const double c_hi = cosine_cdf(op.edges[i + 1]);
    for (std::size_t s = 0; s < samples_per_node; ++s) {
      double theta;
      do {
        const double u = c_lo + (c_hi - c_lo) * row.uniform();
        theta = std::clamp(cosine_angle_from_uniform(u), op.edges[i], op.edges[i + 1]);
      } while (!(std::abs(theta) < 0.5 * pi));
      const double out = random_scatter(cell, theta, row);
      auto j = static_cast<std::size_t>((out + 0.5 * pi) / width);
      j = std::min(j, n - 1);
      op.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) += inv;
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    op.matrix.col(static_cast<Eigen::Index>(j)) /= op.mu_weights[j];
  }
  return op;
}

}  // namespace rbm::surface
