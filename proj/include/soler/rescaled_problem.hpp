#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <complex>
#include <utility>
#include <vector>

#include "soler/dense_eigs.hpp"
#include "soler/dirac_operators.hpp"
#include "soler/nls_profile.hpp"
#include "soler/spectral_filters.hpp"

namespace soler {

/// The eigenvalue problem of the linearization in the rescaled variable
/// y = eps x with R2 = eps Rhat2, S2 = eps Shat2, written as
///   C eta = nu D eta,   nu = lambda / eps^2,   D = K1 + eps^2 K2,
/// together with the eps -> 0 limit matrix A_Lambda and the zero-order
/// residual W separating the two.
struct RescaledProblem {
  int k = 0;
  double omega = 0.0;
  double eps = 0.0;  // sqrt(m^2 - omega^2), m = 1
  Grid grid_y;
  Eigen::MatrixXd C;               // 4N x 4N, lambda-independent
  Eigen::VectorXd D_diag;          // diagonal of K1 + eps^2 K2
  Eigen::MatrixXd A_Lambda_limit;  // 4N x 4N at the supplied Lambda
  // nonzero entries of the multiplication operator W at each node:
  // (1,3), (2,4), (3,1), (3,2), (4,1), (4,2) in 1-based block indices
  std::vector<std::array<double, 6>> W_entries;
};

/// Nonzero entries of the zero-order residual operator W at each node,
/// ordered (1,3), (2,4), (3,1), (3,2), (4,1), (4,2): the coefficient gap
/// between the exact rescaled system and the limit matrix.
inline std::vector<std::array<double, 6>> residual_entries(
    const SolitaryWave& wave, const NonlinearityModel& model) {
  if (model.m != 1.0)
    throw ConfigError(
        "residual_entries: requires the m = 1 normalization (rescale first)");
  const int k = model.k;
  const int N = wave.grid.points;
  const double omega = wave.omega;
  const double eps = wave.eps_dirac;
  const double eps2 = eps * eps;
  std::vector<std::array<double, 6>> entries(N);
  for (int j = 0; j < N; ++j) {
    const double X = wave.X[j];
    const double f = model.f(X);
    const double fp = model.fprime(X);
    const double v = wave.v[j], u = wave.u[j];
    const double y = eps * wave.grid.nodes[j];
    const double Uk = std::pow(NlsProfile::value(k, y), k);
    auto& W = entries[j];
    W[0] = 0.5 - Uk - (1.0 - omega - f) / eps2;
    W[1] = -2.0 + 1.0 + omega - f;
    W[2] = -0.5 + (2.0 * k + 1.0) * Uk -
           (-1.0 + omega + f + 2.0 * fp * v * v) / eps2;
    W[3] = 2.0 * fp * v * u / eps;
    W[4] = 2.0 * fp * v * u / eps;
    W[5] = 2.0 - 1.0 - omega + f - 2.0 * fp * u * u;
  }
  return entries;
}

inline double w_norm_entries(const std::vector<std::array<double, 6>>& es) {
  double worst = 0.0;
  for (const auto& W : es) {
    const double row1 = std::abs(W[0]);
    const double row2 = std::abs(W[1]);
    const double row3 = std::abs(W[2]) + std::abs(W[3]);
    const double row4 = std::abs(W[4]) + std::abs(W[5]);
    worst = std::max({worst, row1, row2, row3, row4});
  }
  return worst;
}

/// sup-norm of W straight from a wave, without assembling the dense system.
inline double w_norm(const SolitaryWave& wave, const NonlinearityModel& model) {
  return w_norm_entries(residual_entries(wave, model));
}

/// Assemble the rescaled problem from a solved wave (m = 1 normalization).
/// The y grid is the wave's x grid scaled by eps, so profile samples carry
/// over node by node.
inline RescaledProblem rescaled_problem(const SolitaryWave& wave,
                                        const NonlinearityModel& model,
                                        double Lambda) {
  if (model.m != 1.0)
    throw ConfigError(
        "rescaled_problem: requires the m = 1 normalization (rescale first)");
  const int k = model.k;
  const int N = wave.grid.points;
  const double omega = wave.omega;
  const double eps = wave.eps_dirac;
  const double eps2 = eps * eps;

  RescaledProblem p;
  p.k = k;
  p.omega = omega;
  p.eps = eps;
  p.grid_y = Grid::uniform(wave.grid.half_width * eps, N);

  const Eigen::MatrixXd Dy = diff_matrix_dense(
      p.grid_y, 1, kDiracStencilAccuracy, EdgeClosure::wall);
  const int n4 = 4 * N;
  p.C = Eigen::MatrixXd::Zero(n4, n4);
  p.A_Lambda_limit = Eigen::MatrixXd::Zero(n4, n4);
  p.W_entries = residual_entries(wave, model);
  p.D_diag.resize(n4);

  // component blocks: [R1, Rhat2, S1, Shat2]
  const int R1 = 0, R2 = N, S1 = 2 * N, S2 = 3 * N;
  p.C.block(R1, S2, N, N) = Dy;
  p.C.block(R2, S1, N, N) = -Dy;
  p.C.block(S1, R2, N, N) = -Dy;
  p.C.block(S2, R1, N, N) = Dy;
  p.A_Lambda_limit.block(R1, S2, N, N) = Dy;
  p.A_Lambda_limit.block(R2, S1, N, N) = -Dy;
  p.A_Lambda_limit.block(S1, R2, N, N) = -Dy;
  p.A_Lambda_limit.block(S2, R1, N, N) = Dy;

  for (int j = 0; j < N; ++j) {
    const double X = wave.X[j];
    const double f = model.f(X);
    const double fp = model.fprime(X);
    const double v = wave.v[j], u = wave.u[j];
    const double y = p.grid_y.nodes[j];
    const double Uk = std::pow(NlsProfile::value(k, y), k);

    p.C(R1 + j, S1 + j) = (1.0 - omega - f) / eps2;
    p.C(R2 + j, S2 + j) = -1.0 - omega + f;
    p.C(S1 + j, R1 + j) = (-1.0 + omega + f + 2.0 * fp * v * v) / eps2;
    p.C(S1 + j, R2 + j) += -2.0 * fp * v * u / eps;
    p.C(S2 + j, R1 + j) += -2.0 * fp * v * u / eps;
    p.C(S2 + j, R2 + j) = 1.0 + omega - f + 2.0 * fp * u * u;

    p.A_Lambda_limit(R1 + j, R1 + j) = -Lambda;
    p.A_Lambda_limit(R1 + j, S1 + j) = 0.5 - Uk;
    p.A_Lambda_limit(R2 + j, S2 + j) = -2.0;
    p.A_Lambda_limit(S1 + j, R1 + j) = -0.5 + (2.0 * k + 1.0) * Uk;
    p.A_Lambda_limit(S1 + j, S1 + j) = -Lambda;
    p.A_Lambda_limit(S2 + j, R2 + j) = 2.0;

    p.D_diag[R1 + j] = 1.0;
    p.D_diag[R2 + j] = eps2;
    p.D_diag[S1 + j] = 1.0;
    p.D_diag[S2 + j] = eps2;
  }
  return p;
}

/// sup over the grid of the matrix infinity norm of the 4x4 zero-order
/// coefficient of W.
inline double w_norm(const RescaledProblem& p) {
  double worst = 0.0;
  for (const auto& W : p.W_entries) {
    const double row1 = std::abs(W[0]);
    const double row2 = std::abs(W[1]);
    const double row3 = std::abs(W[2]) + std::abs(W[3]);
    const double row4 = std::abs(W[4]) + std::abs(W[5]);
    worst = std::max({worst, row1, row2, row3, row4});
  }
  return worst;
}

struct RescaledEigenvalue {
  double nu = 0.0;   // lambda / eps^2
  double mu0 = 0.0;  // nu - Lambda
};

/// Real eigenvalue of D^{-1} C nearest to Lambda with a localized,
/// grid-resolved eigenvector. Throws DetectionError (with the three nearest
/// eigenvalues) when no admissible candidate exists near Lambda.
inline RescaledEigenvalue unstable_eigenvalue_rescaled(
    const RescaledProblem& p, double Lambda, double search_radius = 0.65) {
  const int N = p.grid_y.points;
  Eigen::MatrixXd DinvC = p.C;
  for (int i = 0; i < 4 * N; ++i) DinvC.row(i) /= p.D_diag[i];
  const EigenSet eig = dense_eigs(DinvC, true);

  double best_nu = 0.0, best_dist = 1e300;
  std::vector<std::pair<double, std::complex<double>>> near;
  for (size_t i = 0; i < eig.values.size(); ++i) {
    const auto z = eig.values[i];
    near.emplace_back(std::abs(z - Lambda), z);
    if (std::abs(z.imag()) > 1e-8 * std::max(1.0, std::abs(z.real()))) continue;
    const double dist = std::abs(z.real() - Lambda);
    if (dist > search_radius * std::max(1.0, Lambda)) continue;
    Eigen::VectorXcd v = eig.vectors->col(i);
    if (oscillation_score(v, 4) > kOscillationThreshold) continue;
    const Eigen::VectorXd refined =
        refine_eigenvector(DinvC, z.real(), v.real());
    if (!is_localized(refined, p.grid_y, 4) ||
        is_grid_oscillatory(refined, 4))
      continue;
    if (dist < best_dist) {
      best_dist = dist;
      best_nu = z.real();
    }
  }
  if (best_dist == 1e300) {
    std::sort(near.begin(), near.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::complex<double>> nearest;
    for (size_t i = 0; i < std::min<size_t>(3, near.size()); ++i)
      nearest.push_back(near[i].second);
    throw DetectionError(
        "unstable_eigenvalue_rescaled: no real eigenvalue near Lambda",
        nearest);
  }
  return {best_nu, best_nu - Lambda};
}

}  // namespace soler
