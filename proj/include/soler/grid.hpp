#pragma once

#include <cmath>
#include <vector>

#include "soler/errors.hpp"

namespace soler {

/// Uniform symmetric 1D grid on [-L, L].
struct Grid {
  double half_width = 0.0;        // L
  int points = 0;                 // N
  double spacing = 0.0;           // h = 2L/(N-1)
  std::vector<double> nodes;      // x_j = -L + j h

  /// Direct construction; only requires a mathematically valid grid (N >= 2).
  static Grid uniform(double half_width, int points) {
    if (points < 2 || half_width <= 0.0)
      throw ConfigError("Grid::uniform: need half_width > 0 and points >= 2");
    Grid g;
    g.half_width = half_width;
    g.points = points;
    g.spacing = 2.0 * half_width / (points - 1);
    g.nodes.resize(points);
    for (int j = 0; j < points; ++j) g.nodes[j] = -half_width + j * g.spacing;
    g.spacing = g.nodes[1] - g.nodes[0];  // exact by definition
    return g;
  }

  bool same_layout(const Grid& o) const {
    return points == o.points && half_width == o.half_width;
  }
};

/// Validated grid construction for production use (N >= 16).
inline Grid build_grid(double half_width, int points) {
  if (half_width <= 0.0)
    throw ConfigError("build_grid: half_width must be positive");
  if (points < 16) throw ConfigError("build_grid: points must be >= 16");
  return Grid::uniform(half_width, points);
}

}  // namespace soler
