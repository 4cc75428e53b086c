#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>

#include "soler/grid.hpp"

namespace soler {

/// Fraction of squared mass at nodes with |x| < half_fraction * L, summed
/// over the stacked component blocks.
template <class Derived>
double localization_score(const Eigen::MatrixBase<Derived>& v, const Grid& grid,
                          int blocks, double half_fraction = 0.5) {
  const int N = grid.points;
  double inner = 0.0, total = 0.0;
  for (int b = 0; b < blocks; ++b)
    for (int j = 0; j < N; ++j) {
      const double m2 = std::norm(std::complex<double>(v[b * N + j]));
      total += m2;
      if (std::abs(grid.nodes[j]) < half_fraction * grid.half_width)
        inner += m2;
    }
  return total > 0.0 ? inner / total : 0.0;
}

/// Interior-mass threshold separating genuine bound states from the
/// discretized continuous spectrum and from boundary-row artifacts.
inline constexpr double kLocalizationThreshold = 0.9;

template <class Derived>
bool is_localized(const Eigen::MatrixBase<Derived>& v, const Grid& grid,
                  int blocks) {
  return localization_score(v, grid, blocks) >= kLocalizationThreshold;
}

/// Grid-scale oscillation score: RMS of nearest-neighbor differences over the
/// RMS of the values, per component block. A mode alternating sign on every
/// node (the spectral-doubling artifact of the centered first derivative)
/// scores close to 2; resolved modes score well below 1.
template <class Derived>
double oscillation_score(const Eigen::MatrixBase<Derived>& v, int blocks) {
  const int N = static_cast<int>(v.size()) / blocks;
  double num = 0.0, den = 0.0;
  for (int b = 0; b < blocks; ++b)
    for (int j = 0; j + 1 < N; ++j) {
      num += std::norm(std::complex<double>(v[b * N + j + 1]) -
                       std::complex<double>(v[b * N + j]));
      den += std::norm(std::complex<double>(v[b * N + j]));
    }
  return den > 0.0 ? std::sqrt(num / den) : 0.0;
}

inline constexpr double kOscillationThreshold = 1.0;

template <class Derived>
bool is_grid_oscillatory(const Eigen::MatrixBase<Derived>& v, int blocks) {
  return oscillation_score(v, blocks) > kOscillationThreshold;
}

}  // namespace soler
