#pragma once

#include <algorithm>
#include <vector>

#include "soler/errors.hpp"

namespace soler::detail {

/// Central finite-difference weights (times the denominator) for first and
/// second derivatives at accuracy order p in {2, 4, 6, 8}. Integer-valued
/// numerators keep the row sums exactly zero in floating point.
inline std::vector<double> central_weights(int order, int acc, double h) {
  std::vector<double> num;
  double den = 0.0;
  if (order == 1) {
    switch (acc) {
      case 2: num = {-1, 0, 1}; den = 2; break;
      case 4: num = {1, -8, 0, 8, -1}; den = 12; break;
      case 6: num = {-1, 9, -45, 0, 45, -9, 1}; den = 60; break;
      case 8: num = {3, -32, 168, -672, 0, 672, -168, 32, -3}; den = 840; break;
      default: throw ConfigError("central_weights: accuracy must be 2/4/6/8");
    }
    den *= h;
  } else if (order == 2) {
    switch (acc) {
      case 2: num = {1, -2, 1}; den = 1; break;
      case 4: num = {-1, 16, -30, 16, -1}; den = 12; break;
      case 6: num = {2, -27, 270, -490, 270, -27, 2}; den = 180; break;
      case 8:
        num = {-9, 128, -1008, 8064, -14350, 8064, -1008, 128, -9};
        den = 5040;
        break;
      default: throw ConfigError("central_weights: accuracy must be 2/4/6/8");
    }
    den *= h * h;
  } else {
    throw ConfigError("central_weights: derivative order must be 1 or 2");
  }
  std::vector<double> w(num.size());
  for (size_t i = 0; i < num.size(); ++i) w[i] = num[i] / den;
  return w;
}

/// Fornberg's algorithm: weights of the m-th derivative at x0 from arbitrary
/// nodes x[0..n-1]. Used for the one-sided rows next to the grid edges.
inline std::vector<double> fornberg_weights(double x0,
                                            const std::vector<double>& x,
                                            int m) {
  const int n = static_cast<int>(x.size());
  std::vector<std::vector<std::vector<double>>> d(
      n, std::vector<std::vector<double>>(n, std::vector<double>(m + 1, 0.0)));
  d[0][0][0] = 1.0;
  double c1 = 1.0;
  for (int i = 1; i < n; ++i) {
    double c2 = 1.0;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      for (int k = 0; k <= std::min(i, m); ++k)
        d[i][j][k] =
            ((x[i] - x0) * d[i - 1][j][k] - (k ? k * d[i - 1][j][k - 1] : 0.0)) /
            c3;
    }
    for (int k = 0; k <= std::min(i, m); ++k)
      d[i][i][k] = c1 / c2 *
                   ((k ? k * d[i - 1][i - 1][k - 1] : 0.0) -
                    (x[i - 1] - x0) * d[i - 1][i - 1][k]);
    c1 = c2;
  }
  std::vector<double> w(n);
  for (int j = 0; j < n; ++j) w[j] = d[n - 1][j][m];
  return w;
}

}  // namespace soler::detail
