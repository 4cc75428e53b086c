#pragma once

#include <cmath>
#include <vector>

#include "soler/grid.hpp"
#include "soler/quadrature.hpp"
#include "soler/solitary_wave.hpp"

namespace soler {

/// Ground-state profile of the limit equation
///   -(1/4) U'' - ((k+2)/(k+1)) U^{k+1} + U = 0,
/// given in closed form by U(y) = ((k+1) / (2 cosh^2 ky))^{1/k}.
struct NlsProfile {
  int k = 1;
  Grid grid;
  std::vector<double> U;
  double C = 0.0;  // integral of U over the line

  static double value(int k, double y) {
    const double c = std::cosh(k * y);
    return std::pow((k + 1) / (2.0 * c * c), 1.0 / k);
  }
  static double derivative(int k, double y) {
    return -2.0 * std::tanh(k * y) * value(k, y);
  }
  static double second_derivative(int k, double y) {
    const double t = std::tanh(k * y);
    const double s2 = 1.0 - t * t;
    return (4.0 * t * t - 2.0 * k * s2) * value(k, y);
  }
};

/// Sample the closed-form profile and self-check the limit ODE residual
/// using the analytic second derivative.
inline NlsProfile nls_profile(int k, const Grid& grid) {
  if (k < 1) throw ConfigError("nls_profile: k must be a positive integer");
  NlsProfile p;
  p.k = k;
  p.grid = grid;
  p.U.resize(grid.points);
  double worst = 0.0;
  for (int j = 0; j < grid.points; ++j) {
    const double y = grid.nodes[j];
    p.U[j] = NlsProfile::value(k, y);
    const double res = -0.25 * NlsProfile::second_derivative(k, y) -
                       (k + 2.0) / (k + 1.0) * std::pow(p.U[j], k + 1) + p.U[j];
    worst = std::max(worst, std::abs(res));
  }
  if (worst > 1e-8)
    throw NumericalFailureError("nls_profile: closed form fails the limit ODE",
                                grid.points);
  p.C = quadrature(grid, p.U);
  return p;
}

struct AsymptoticDeviation {
  double sup_deviation = 0.0;   // sup_x |X - eps^{2/k} U(eps x)|
  double ratio = 0.0;           // sup_deviation / eps^{4/k}
  double u_ratio = 0.0;         // sup |u| / eps^{1 + 1/k}
};

/// Distance of the Dirac profile from its nonrelativistic limit shape,
/// scaled by the expected remainder order.
inline AsymptoticDeviation asymptotic_deviation(const SolitaryWave& wave,
                                                const NlsProfile& profile) {
  const int k = profile.k;
  const double eps = wave.eps_dirac;
  AsymptoticDeviation d;
  double umax = 0.0;
  for (int j = 0; j < wave.grid.points; ++j) {
    const double limit =
        std::pow(eps, 2.0 / k) * NlsProfile::value(k, eps * wave.grid.nodes[j]);
    d.sup_deviation = std::max(d.sup_deviation, std::abs(wave.X[j] - limit));
    umax = std::max(umax, std::abs(wave.u[j]));
  }
  d.ratio = d.sup_deviation / std::pow(eps, 4.0 / k);
  d.u_ratio = umax / std::pow(eps, 1.0 + 1.0 / k);
  return d;
}

/// Closed form of the NLS charge power law: Q(omega) = (2(m-omega))^{1/k-1/2} C.
inline double nls_charge(int k, double m, double omega, double C) {
  return std::pow(2.0 * (m - omega), 1.0 / k - 0.5) * C;
}

}  // namespace soler
