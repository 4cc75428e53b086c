#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <vector>

#include "soler/grid.hpp"
#include "soler/linear_operator.hpp"
#include "soler/nonlinearity.hpp"
#include "soler/quadrature.hpp"
#include "soler/root_finding.hpp"

namespace soler {

/// Solitary-wave profile of the 1D Soler equation at frequency omega:
/// spinor components (v, u), X = v^2 - u^2, Y = v u.
struct SolitaryWave {
  double omega = 0.0;
  double gamma = 0.0;  // turning point, X(0)
  Grid grid;
  std::vector<double> v, u, X, Y;
  double Q = 0.0;            // charge, integral of v^2 + u^2
  double eps_dirac = 0.0;    // sqrt(m^2 - omega^2)
  double eps_nls = 0.0;      // sqrt(2 (m - omega))
  double residual_u = 0.0;   // sup |u' - omega v + g(X) v|
  double residual_v = 0.0;   // sup |v' + omega u + g(X) u|
};

struct TurningPointInfo {
  double gamma = 0.0;
  bool slope_condition_ok = true;  // omega != g(gamma)
  bool interval_condition_ok = true;  // omega s < G(s) on (0, gamma)
};

/// Smallest positive root of omega*Gamma = G(Gamma), with the existence
/// conditions of the zero-energy turning point checked on a fine sample.
inline TurningPointInfo turning_point_checked(const NonlinearityModel& model,
                                              double omega) {
  if (!(omega > 0.0) || !(omega < model.m))
    throw ExistenceError("turning_point: omega must lie in (0, m)");
  const auto F = [&](double s) { return model.G(s) - omega * s; };
  // For the pure power the root is ((k+1)(m-omega)/a)^{1/k}; use it to set
  // the search scale, then widen until a sign change is bracketed.
  double guess =
      std::pow((model.k + 1) * (model.m - omega) / model.a, 1.0 / model.k);
  double hi = guess;
  bool bracketed = false;
  for (int round = 0; round < 60; ++round) {
    if (F(hi) < 0.0) {
      bracketed = true;
      break;
    }
    hi *= 1.25;
  }
  if (!bracketed)
    throw ExistenceError(
        "turning_point: no positive root of omega*s = G(s) in search range");
  // walk down from hi to isolate the smallest root
  double lo = 0.0;
  const int scan = 400;
  for (int i = 1; i <= scan; ++i) {
    const double s = hi * i / scan;
    if (F(s) < 0.0) {
      hi = s;
      lo = hi * (i - 1.0) / i;
      break;
    }
  }
  TurningPointInfo info;
  info.gamma = find_root(F, lo, hi, 1e-15 * std::max(1.0, hi));
  info.slope_condition_ok =
      std::abs(omega - model.g(info.gamma)) > 1e-10 * model.m;
  for (int i = 1; i < 256; ++i) {
    const double s = info.gamma * i / 256.0;
    if (F(s) <= 0.0) {
      info.interval_condition_ok = false;
      break;
    }
  }
  return info;
}

inline double turning_point(const NonlinearityModel& model, double omega) {
  return turning_point_checked(model, omega).gamma;
}

namespace detail {

/// Dormand-Prince 5(4) step for a scalar autonomous ODE y' = f(y).
/// Returns the 5th-order value and the embedded error estimate.
template <class F>
inline void dp45_step(const F& f, double y, double h, double& y5,
                      double& err) {
  const double k1 = f(y);
  const double k2 = f(y + h * (1.0 / 5) * k1);
  const double k3 = f(y + h * (3.0 / 40 * k1 + 9.0 / 40 * k2));
  const double k4 = f(y + h * (44.0 / 45 * k1 - 56.0 / 15 * k2 + 32.0 / 9 * k3));
  const double k5 = f(y + h * (19372.0 / 6561 * k1 - 25360.0 / 2187 * k2 +
                               64448.0 / 6561 * k3 - 212.0 / 729 * k4));
  const double k6 = f(y + h * (9017.0 / 3168 * k1 - 355.0 / 33 * k2 +
                               46732.0 / 5247 * k3 + 49.0 / 176 * k4 -
                               5103.0 / 18656 * k5));
  y5 = y + h * (35.0 / 384 * k1 + 500.0 / 1113 * k3 + 125.0 / 192 * k4 -
                2187.0 / 6784 * k5 + 11.0 / 84 * k6);
  const double k7 = f(y5);
  const double y4 = y + h * (5179.0 / 57600 * k1 + 7571.0 / 16695 * k3 +
                             393.0 / 640 * k4 - 92097.0 / 339200 * k5 +
                             187.0 / 2100 * k6 + 1.0 / 40 * k7);
  err = std::abs(y5 - y4);
}

}  // namespace detail

/// Solve the profile equation for X = v^2 - u^2 on the given grid.
///
/// The zero-energy first-order reduction dX/dx = -2 sqrt(G(X)^2 - omega^2 X^2)
/// is integrated from the turning point outward with an adaptive 5(4) pair at
/// relative tolerance 1e-12 (quartic Taylor expansion bridges the square-root
/// degeneracy at x = 0), landing exactly on the grid nodes. v, u and Y follow
/// from the constraint omega (v^2+u^2) = G(X) and Y = -X'/(4 omega).
inline SolitaryWave solve_profile(const NonlinearityModel& model, double omega,
                                  const Grid& grid) {
  const auto tp = turning_point_checked(model, omega);
  const double gamma = tp.gamma;
  const double m = model.m;

  const auto P = [&](double X) {
    const double GX = model.G(X);
    return GX * GX - omega * omega * X * X;
  };
  const auto rhs = [&](double X) {
    if (X <= 0.0) return 0.0;
    double p = P(X);
    if (p < 0.0) {
      if (p < -1e-13)
        throw ProfileIntegrationError(
            "solve_profile: square-root argument went negative");
      p = 0.0;
    }
    return -2.0 * std::sqrt(p);
  };

  // quartic expansion around the turning point: X = gamma + a2 x^2 + a4 x^4
  const double a2 = 2.0 * omega * gamma * (model.g(gamma) - omega);
  const double phi_prime =
      4.0 * (model.g(gamma) * model.g(gamma) -
             model.G(gamma) * model.fprime(gamma) - omega * omega);
  const double a4 = a2 * phi_prime / 12.0;
  const double x0 = std::sqrt(1e-5 * gamma / std::abs(a2));
  const auto taylor = [&](double x) {
    return gamma + a2 * x * x + a4 * x * x * x * x;
  };

  const int N = grid.points;
  std::vector<double> X(N, 0.0);

  // positive-half targets, center outward; values mirrored to the lower half
  std::vector<std::pair<double, int>> targets;  // (|x|, upper index)
  for (int j = (N - 1) / 2 + (N % 2 == 0 ? 1 : 0); j < N; ++j)
    targets.emplace_back(std::abs(grid.nodes[j]), j);
  std::sort(targets.begin(), targets.end());

  std::size_t t = 0;
  while (t < targets.size() && targets[t].first <= x0) {
    X[targets[t].second] = taylor(targets[t].first);
    ++t;
  }

  double x = x0, y = taylor(x0);
  double hstep = std::min(0.05 * gamma / (2.0 * std::abs(rhs(y)) + 1e-30),
                          grid.spacing);
  const double rtol = 1e-12;
  while (t < targets.size()) {
    const double xt = targets[t].first;
    bool landing = false;
    double h = hstep;
    if (x + h >= xt) {
      h = xt - x;
      landing = true;
    }
    if (h <= 0.0) {
      X[targets[t].second] = y;
      ++t;
      continue;
    }
    double y5 = y, err = 0.0;
    detail::dp45_step(rhs, y, h, y5, err);
    const double tol = rtol * std::max(std::abs(y), std::abs(y5)) + 1e-300;
    const bool accept = err <= tol || h < 1e-14 * std::max(1.0, x);
    const double ratio = err > 0.0 ? std::pow(tol / err, 0.2) : 5.0;
    if (accept) {
      x += h;
      y = std::max(y5, 0.0);
      if (landing) {
        X[targets[t].second] = y;
        ++t;
      } else {
        hstep = h * std::clamp(0.9 * ratio, 0.2, 5.0);
      }
    } else {
      // rejected: shrink and retry
      hstep = h * std::clamp(0.9 * ratio, 0.1, 0.9);
    }
  }

  // mirror to the lower half (X even)
  for (int j = 0; j < (N + 1) / 2; ++j) X[j] = X[N - 1 - j];

  if (X[N - 1] > 1e-12 * gamma)
    throw DomainTooSmallError(
        "solve_profile: X did not decay below 1e-12 * gamma at the boundary");

  SolitaryWave w;
  w.omega = omega;
  w.gamma = gamma;
  w.grid = grid;
  w.eps_dirac = std::sqrt(m * m - omega * omega);
  w.eps_nls = std::sqrt(2.0 * (m - omega));
  w.X = std::move(X);
  w.v.assign(N, 0.0);
  w.u.assign(N, 0.0);
  w.Y.assign(N, 0.0);
  for (int j = N / 2; j < N; ++j) {
    const double Xj = w.X[j];
    if (Xj <= 0.0) continue;
    double p = std::max(P(Xj), 0.0);
    const double dX = -2.0 * std::sqrt(p);  // x > 0 branch
    const double Yj = -dX / (4.0 * omega);
    const double vj = std::sqrt((model.G(Xj) / omega + Xj) / 2.0);
    const double uj = vj > 0.0 ? Yj / vj : 0.0;
    const int jm = N - 1 - j;
    w.v[j] = vj;
    w.v[jm] = vj;
    w.Y[j] = Yj;
    w.Y[jm] = -Yj;
    w.u[j] = uj;
    w.u[jm] = -uj;
  }
  if (N % 2 == 1) {
    // exact center: X(0) = gamma, u(0) = Y(0) = 0
    const int c = (N - 1) / 2;
    w.X[c] = gamma;
    w.v[c] = std::sqrt((model.G(gamma) / omega + gamma) / 2.0);
    w.u[c] = 0.0;
    w.Y[c] = 0.0;
  }

  std::vector<double> dens(N);
  for (int j = 0; j < N; ++j) dens[j] = w.v[j] * w.v[j] + w.u[j] * w.u[j];
  w.Q = quadrature(grid, dens);

  // residual of the stationary first-order system, 4th-order differentiation
  {
    const Eigen::MatrixXd D1 = diff_matrix_dense(grid, 1, 4);
    Eigen::Map<const Eigen::VectorXd> vv(w.v.data(), N), uu(w.u.data(), N);
    Eigen::VectorXd du = D1 * uu, dv = D1 * vv;
    for (int j = 0; j < N; ++j) {
      const double gX = model.g(w.X[j]);
      w.residual_u =
          std::max(w.residual_u, std::abs(du[j] - omega * w.v[j] + gX * w.v[j]));
      w.residual_v =
          std::max(w.residual_v, std::abs(dv[j] + omega * w.u[j] + gX * w.u[j]));
    }
  }
  return w;
}

/// Zero-amplitude reference wave (free Dirac operator); used for tolerance
/// calibration of the spectrum classifier.
inline SolitaryWave zero_wave(const NonlinearityModel& model, double omega,
                              const Grid& grid) {
  SolitaryWave w;
  w.omega = omega;
  w.gamma = 0.0;
  w.grid = grid;
  w.eps_dirac = std::sqrt(model.m * model.m - omega * omega);
  w.eps_nls = std::sqrt(2.0 * (model.m - omega));
  w.v.assign(grid.points, 0.0);
  w.u.assign(grid.points, 0.0);
  w.X.assign(grid.points, 0.0);
  w.Y.assign(grid.points, 0.0);
  return w;
}

inline double charge(const SolitaryWave& wave) {
  std::vector<double> dens(wave.grid.points);
  for (int j = 0; j < wave.grid.points; ++j)
    dens[j] = wave.v[j] * wave.v[j] + wave.u[j] * wave.u[j];
  return quadrature(wave.grid, dens);
}

}  // namespace soler
