#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "soler/grid.hpp"
#include "soler/linear_operator.hpp"
#include "soler/nonlinearity.hpp"
#include "soler/solitary_wave.hpp"

namespace soler {

/// Blocks of the Dirac linearization at a solitary wave,
///   L_-  = [ m - omega - f,            d/dx              ]
///          [ -d/dx,                    -m - omega + f    ]
///   L_+  = L_- - 2 f' [ v^2, -v u; -v u, u^2 ]  (off-diagonal entering as
///          +2 f' v u next to the +-d/dx entries),
/// with f, f' evaluated at X = v^2 - u^2.
struct DiracBlocks {
  double omega = 0.0;
  Grid grid;
  LinearOperator Lminus, Lplus;  // each 2N x 2N on spinor pairs
  std::vector<double> pot_f, pot_fp, pot_fp_vv, pot_fp_uu, pot_fp_vu;
};

inline constexpr int kDiracStencilAccuracy = 4;

inline DiracBlocks assemble_dirac(const SolitaryWave& wave,
                                  const NonlinearityModel& model,
                                  const Grid& grid) {
  if (!grid.same_layout(wave.grid))
    throw ConfigError("assemble_dirac: grid does not match the wave's grid");
  const int N = grid.points;
  const double m = model.m, omega = wave.omega;
  const Eigen::MatrixXd D1 =
      diff_matrix_dense(grid, 1, kDiracStencilAccuracy, EdgeClosure::wall);

  DiracBlocks b;
  b.omega = omega;
  b.grid = grid;
  b.pot_f.resize(N);
  b.pot_fp.resize(N);
  b.pot_fp_vv.resize(N);
  b.pot_fp_uu.resize(N);
  b.pot_fp_vu.resize(N);

  Eigen::MatrixXd Lm = Eigen::MatrixXd::Zero(2 * N, 2 * N);
  Eigen::MatrixXd Lp = Eigen::MatrixXd::Zero(2 * N, 2 * N);
  Lm.block(0, N, N, N) = D1;
  Lm.block(N, 0, N, N) = -D1;
  Lp.block(0, N, N, N) = D1;
  Lp.block(N, 0, N, N) = -D1;
  for (int j = 0; j < N; ++j) {
    const double X = wave.X[j];
    const double f = model.f(X);
    const double fp = model.fprime(X);
    const double vv = wave.v[j] * wave.v[j];
    const double uu = wave.u[j] * wave.u[j];
    const double vu = wave.v[j] * wave.u[j];
    b.pot_f[j] = f;
    b.pot_fp[j] = fp;
    b.pot_fp_vv[j] = fp * vv;
    b.pot_fp_uu[j] = fp * uu;
    b.pot_fp_vu[j] = fp * vu;
    Lm(j, j) = m - omega - f;
    Lm(N + j, N + j) = -m - omega + f;
    Lp(j, j) = m - omega - f - 2.0 * fp * vv;
    Lp(N + j, N + j) = -m - omega + f - 2.0 * fp * uu;
    Lp(j, N + j) += 2.0 * fp * vu;
    Lp(N + j, j) += 2.0 * fp * vu;
  }
  b.Lminus = {std::move(Lm), grid, {"R1", "R2"}, Boundary::dirichlet};
  b.Lplus = {std::move(Lp), grid, {"S1", "S2"}, Boundary::dirichlet};
  return b;
}

}  // namespace soler
