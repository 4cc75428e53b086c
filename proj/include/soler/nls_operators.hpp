#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "soler/dense_eigs.hpp"
#include "soler/grid.hpp"
#include "soler/linear_operator.hpp"
#include "soler/nls_profile.hpp"
#include "soler/spectral_filters.hpp"

namespace soler {

/// Schroedinger operators of the rescaled NLS linearization,
///   Lhat_- = -1/2 d^2/dy^2 + 1/2 - (k+1)/(2 cosh^2 ky),
///   Lhat_+ = -1/2 d^2/dy^2 + 1/2 - (2k+1)(k+1)/(2 cosh^2 ky),
/// with the kernel functions phi = cosh^{-1/k}(ky) and
/// theta = -y sinh(ky)/cosh^{1+1/k}(ky).
struct NlsOperators {
  int k = 1;
  Grid grid;  // variable y
  LinearOperator Lminus, Lplus;
  std::vector<double> phi_hat, theta_hat;
};

/// Stencil accuracy for the Schroedinger-operator assemblies. Order 8 is
/// needed to push the kernel-identity residuals below 1e-6 at N = 2048,
/// L = 20 for k up to 4.
inline constexpr int kNlsStencilAccuracy = 8;

inline double phi_hat_value(int k, double y) {
  return std::pow(std::cosh(k * y), -1.0 / k);
}
inline double phi_hat_derivative(int k, double y) {
  return -std::tanh(k * y) * phi_hat_value(k, y);
}
inline double theta_hat_value(int k, double y) {
  const double c = std::cosh(k * y);
  return -y * std::sinh(k * y) / std::pow(c, 1.0 + 1.0 / k);
}

/// One hat operator as a dense matrix with the requested edge closure.
inline Eigen::MatrixXd hat_matrix(int k, const Grid& grid, bool plus,
                                  EdgeClosure closure) {
  Eigen::MatrixXd A =
      -0.5 * diff_matrix_dense(grid, 2, kNlsStencilAccuracy, closure);
  const double coef =
      plus ? (2.0 * k + 1) * (k + 1) / 2.0 : (k + 1) / 2.0;
  for (int j = 0; j < grid.points; ++j) {
    const double c = std::cosh(k * grid.nodes[j]);
    A(j, j) += 0.5 - coef / (c * c);
  }
  return A;
}

inline NlsOperators assemble_nls(int k, const Grid& grid) {
  if (k < 1) throw ConfigError("assemble_nls: k must be a positive integer");
  if (grid.spacing * k > 0.1)
    throw ConfigError("assemble_nls: grid does not resolve the potential (h k > 0.1)");
  if (grid.half_width * k < 15.0)
    throw ConfigError("assemble_nls: domain too small (L k < 15)");
  NlsOperators ops;
  ops.k = k;
  ops.grid = grid;
  const Eigen::MatrixXd D2 = diff_matrix_dense(grid, 2, kNlsStencilAccuracy);
  const int N = grid.points;
  Eigen::MatrixXd Am = -0.5 * D2, Ap = -0.5 * D2;
  ops.phi_hat.resize(N);
  ops.theta_hat.resize(N);
  for (int j = 0; j < N; ++j) {
    const double y = grid.nodes[j];
    const double c = std::cosh(k * y);
    const double well = 1.0 / (2.0 * c * c);
    Am(j, j) += 0.5 - (k + 1.0) * well;
    Ap(j, j) += 0.5 - (2.0 * k + 1.0) * (k + 1.0) * well;
    ops.phi_hat[j] = phi_hat_value(k, y);
    ops.theta_hat[j] = theta_hat_value(k, y);
  }
  ops.Lminus = {std::move(Am), grid, {"even"}, Boundary::dirichlet};
  ops.Lplus = {std::move(Ap), grid, {"even"}, Boundary::dirichlet};
  return ops;
}

struct KernelResiduals {
  double r1 = 0.0;  // ||Lhat_- phi|| / ||phi||
  double r2 = 0.0;  // ||Lhat_+ phi'|| / ||phi'||
  double r3 = 0.0;  // ||Lhat_+ (-theta - phi/k) - phi|| / ||phi||
};

/// Residuals of the exact kernel identities, measured in sup norm on the
/// assembled matrices. Expected at discretization accuracy.
inline KernelResiduals kernel_residuals(const NlsOperators& ops) {
  const int N = ops.grid.points;
  Eigen::VectorXd phi(N), dphi(N), w(N);
  for (int j = 0; j < N; ++j) {
    const double y = ops.grid.nodes[j];
    phi[j] = ops.phi_hat[j];
    dphi[j] = phi_hat_derivative(ops.k, y);
    w[j] = -ops.theta_hat[j] - phi[j] / ops.k;
  }
  KernelResiduals r;
  r.r1 = (ops.Lminus.matrix * phi).cwiseAbs().maxCoeff() /
         phi.cwiseAbs().maxCoeff();
  r.r2 = (ops.Lplus.matrix * dphi).cwiseAbs().maxCoeff() /
         dphi.cwiseAbs().maxCoeff();
  r.r3 = (ops.Lplus.matrix * w - phi).cwiseAbs().maxCoeff() /
         phi.cwiseAbs().maxCoeff();
  return r;
}

enum class VkVerdict { stable_sign, degenerate, unstable_sign };

inline std::string to_string(VkVerdict v) {
  switch (v) {
    case VkVerdict::stable_sign: return "stable-sign";
    case VkVerdict::degenerate: return "degenerate";
    default: return "unstable-sign";
  }
}

struct VkReport {
  int k = 1;
  double f0_numeric = 0.0;  // <phi, Lhat_+^{-1} phi> on the even subspace
  double f0_closed = 0.0;   // (1/k)(1/2 - 1/k) * integral of cosh^{-2/k}
  double q_slope = 0.0;     // d log Q / d log eps^2 = 1/k - 1/2
  VkVerdict verdict = VkVerdict::degenerate;
};

/// Closed form of the integral of cosh^{-2/k} over the line.
inline double sech_power_integral(int k) {
  const double nu = 1.0 / k;
  return std::sqrt(M_PI) * std::tgamma(nu) / std::tgamma(nu + 0.5);
}

/// Vakhitov-Kolokolov integral f(0) = <phi, Lhat_+^{-1} phi>.
///
/// The solve is restricted to the even subspace by a half-domain reduction
/// with an even-reflection (Neumann) closure at y = 0: the even-restricted
/// operator is invertible because the kernel vector phi' is odd. Note the
/// closed form carries the 1/k substitution factor from z = ky; the sign
/// statement (negative for k = 1, zero for k = 2, positive for k >= 3) is
/// unchanged.
inline VkReport vk_integral(const NlsOperators& ops) {
  const int k = ops.k;
  const double L = ops.grid.half_width;
  int M = ops.grid.points / 2 + 1;
  if (M % 2 == 0) ++M;  // odd point count for the Simpson rule
  const double h = L / (M - 1);
  const int acc = kNlsStencilAccuracy, half = acc / 2;
  const auto c = detail::central_weights(2, acc, h);
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(M, M);
  for (int i = 0; i < M; ++i) {
    if (i < half) {
      // even reflection across y = 0: ghost node -j folds onto +j
      for (int o = -half; o <= half; ++o)
        A(i, std::abs(i + o)) += -0.5 * c[o + half];
    } else if (i < M - half) {
      for (int o = -half; o <= half; ++o) A(i, i + o) += -0.5 * c[o + half];
    } else {
      const int npts = acc + 2;
      std::vector<double> xs(npts);
      for (int j = 0; j < npts; ++j) xs[j] = -(j - (M - 1 - i)) * h;
      const auto w = detail::fornberg_weights(0.0, xs, 2);
      for (int j = 0; j < npts; ++j) A(i, i - (j - (M - 1 - i))) += -0.5 * w[j];
    }
  }
  Eigen::VectorXd phi(M);
  for (int i = 0; i < M; ++i) {
    const double y = i * h;
    const double ch = std::cosh(k * y);
    A(i, i) += 0.5 - (2.0 * k + 1.0) * (k + 1.0) / (2.0 * ch * ch);
    phi[i] = phi_hat_value(k, y);
  }
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
  const Eigen::VectorXd w = lu.solve(phi);
  if (!w.allFinite())
    throw NumericalFailureError("vk_integral: even-restricted solve failed", M);
  double s = 0.0;
  for (int i = 0; i + 2 < M; i += 2)
    s += h / 3.0 * (phi[i] * w[i] + 4.0 * phi[i + 1] * w[i + 1] +
                    phi[i + 2] * w[i + 2]);
  VkReport rep;
  rep.k = k;
  rep.f0_numeric = 2.0 * s;
  rep.f0_closed = (k == 2) ? 0.0
                           : (1.0 / k) * (0.5 - 1.0 / k) * sech_power_integral(k);
  rep.q_slope = 1.0 / k - 0.5;
  rep.verdict = (k == 2)   ? VkVerdict::degenerate
                : (k <= 1) ? VkVerdict::stable_sign
                           : VkVerdict::unstable_sign;
  return rep;
}

/// Negative-eigenvalue threshold for the product operator. The matrix
/// infinity norm of Lhat_- Lhat_+ is dominated by the 1/h^4 stencil scale,
/// so a norm-relative cut would mask order-one eigenvalues; the physical
/// sigma scale here is O(1) and the discretized kernel noise sits below
/// 1e-5, which this absolute threshold separates cleanly.
inline constexpr double kProductNegativeTol = 1e-3;

/// All admissible limit eigenvalues Lambda = sqrt(-sigma): negative real
/// localized eigenvalues of the N x N product Lhat_- Lhat_+, largest first.
/// The product is assembled with the wall closure, whose symmetric factors
/// leave no boundary quasi-modes to pollute the eigenvectors.
inline std::vector<double> limit_eigenvalue_candidates(const NlsOperators& ops) {
  const Eigen::MatrixXd Lm = hat_matrix(ops.k, ops.grid, false, EdgeClosure::wall);
  const Eigen::MatrixXd Lp = hat_matrix(ops.k, ops.grid, true, EdgeClosure::wall);
  const Eigen::MatrixXd P = matmul(Lm, Lp);
  const EigenSet eig = dense_eigs(P, true);
  const int N = ops.grid.points;
  std::vector<double> found;
  for (int i = 0; i < N; ++i) {
    const auto z = eig.values[i];
    if (std::abs(z.imag()) > 1e-10 * std::max(1.0, std::abs(z.real()))) continue;
    if (z.real() >= -kProductNegativeTol) continue;
    const auto& v = eig.vectors->col(i);
    if (!is_localized(v, ops.grid, 1) || is_grid_oscillatory(v, 1)) continue;
    found.push_back(std::sqrt(-z.real()));
  }
  std::sort(found.rbegin(), found.rend());
  return found;
}

/// Positive eigenvalue Lambda of the limit operator j Lhat, obtained from the
/// most negative localized eigenvalue sigma = -Lambda^2 of the N x N product
/// Lhat_- Lhat_+. Returns nullopt when no such eigenvalue exists (k <= 2).
inline std::optional<double> limit_eigenvalue(const NlsOperators& ops) {
  const auto found = limit_eigenvalue_candidates(ops);
  if (found.empty()) return std::nullopt;
  return found.front();
}

/// Relative mismatch |lambda / (eps^2 Lambda) - 1| between the real pair of
/// the unscaled NLS linearization at frequency omega and the rescaled limit
/// eigenvalue, with eps^2 = 2(m - omega). Nullopt when neither side has a
/// real pair (k <= 2).
inline std::optional<double> scaling_check(int k, double omega,
                                           const Grid& grid, double m = 1.0) {
  if (!(omega < m)) throw ConfigError("scaling_check: omega must be below m");
  const double eps2 = 2.0 * (m - omega);
  const double eps = std::sqrt(eps2);
  // unscaled operators on the x grid, potentials in closed form
  const Eigen::MatrixXd D2 =
      diff_matrix_dense(grid, 2, kNlsStencilAccuracy, EdgeClosure::wall);
  Eigen::MatrixXd Am = -0.5 * D2, Ap = -0.5 * D2;
  const int N = grid.points;
  for (int j = 0; j < N; ++j) {
    const double c = std::cosh(eps * k * grid.nodes[j]);
    const double well = eps2 / (2.0 * c * c);
    Am(j, j) += (m - omega) - (k + 1.0) * well;
    Ap(j, j) += (m - omega) - (2.0 * k + 1.0) * (k + 1.0) * well;
  }
  const Eigen::MatrixXd P = matmul(Am, Ap);
  const EigenSet eig = dense_eigs(P, true);
  double best = 0.0;
  for (int i = 0; i < N; ++i) {
    const auto z = eig.values[i];
    if (std::abs(z.imag()) > 1e-10 * std::max(1.0, std::abs(z.real()))) continue;
    if (z.real() >= -kProductNegativeTol * eps2 * eps2) continue;
    const auto& v = eig.vectors->col(i);
    if (!is_localized(v, grid, 1) || is_grid_oscillatory(v, 1)) continue;
    if (z.real() < best) best = z.real();
  }
  // limit problem on the matching y grid
  const Grid ygrid = Grid::uniform(grid.half_width * eps, N);
  const auto Lambda = limit_eigenvalue(assemble_nls(k, ygrid));
  if (best >= 0.0 && !Lambda) return std::nullopt;
  if (best < 0.0 && Lambda) {
    const double lambda = std::sqrt(-best);
    return std::abs(lambda / (eps2 * *Lambda) - 1.0);
  }
  throw DetectionError(
      "scaling_check: real pair found on only one side of the rescaling", {});
}

}  // namespace soler
