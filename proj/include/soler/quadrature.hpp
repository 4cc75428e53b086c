#pragma once

#include <cmath>
#include <span>

#include "soler/grid.hpp"

namespace soler {

struct QuadratureResult {
  double value = 0.0;
  bool tails_decayed = true;  // both endpoint samples <= 1e-12 * max|samples|
};

/// Composite integration of samples over [-L, L]: Simpson when the point
/// count is odd, trapezoid otherwise.
inline QuadratureResult quadrature_checked(const Grid& grid,
                                           std::span<const double> samples) {
  const int N = grid.points;
  if (static_cast<int>(samples.size()) != N)
    throw ConfigError("quadrature: sample count does not match grid");
  const double h = grid.spacing;
  double maxabs = 0.0;
  for (double s : samples) maxabs = std::max(maxabs, std::abs(s));
  QuadratureResult r;
  r.tails_decayed = std::abs(samples[0]) <= 1e-12 * maxabs &&
                    std::abs(samples[N - 1]) <= 1e-12 * maxabs;
  if (N % 2 == 1) {
    double s = 0.0;
    for (int i = 0; i + 2 < N; i += 2)
      s += samples[i] + 4.0 * samples[i + 1] + samples[i + 2];
    r.value = s * h / 3.0;
  } else {
    double s = 0.5 * (samples[0] + samples[N - 1]);
    for (int i = 1; i + 1 < N; ++i) s += samples[i];
    r.value = s * h;
  }
  return r;
}

inline double quadrature(const Grid& grid, std::span<const double> samples) {
  return quadrature_checked(grid, samples).value;
}

}  // namespace soler
