#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "soler/fd_stencils.hpp"
#include "soler/grid.hpp"

namespace soler {

enum class Boundary { dirichlet };

/// Edge treatment of the differentiation matrices under the Dirichlet
/// truncation.
///
/// `one_sided` keeps full accuracy up to the last row (Fornberg stencils);
/// it is the right closure for pointwise residual measurements on decaying
/// functions. The long one-sided rows are however strongly non-normal: in
/// operator *products* they spawn boundary quasi-modes whose pseudospectra
/// contaminate dense-solver eigenvectors. `wall` drops the out-of-range
/// stencil entries instead (ghost values pinned to zero), which keeps the
/// centered symmetry/antisymmetry exactly and yields clean eigenvectors;
/// its boundary rows are only consistent for functions that vanish at the
/// wall, which all eigenmodes of interest do.
enum class EdgeClosure { one_sided, wall };

/// Dense real operator on b stacked grid functions (b = 1, 2 or 4).
struct LinearOperator {
  Eigen::MatrixXd matrix;
  Grid grid;
  std::vector<std::string> block_layout;  // component labels, length = b
  Boundary boundary = Boundary::dirichlet;

  int block_count() const { return static_cast<int>(block_layout.size()); }
  int dim() const { return static_cast<int>(matrix.rows()); }
};

/// Differentiation matrix for d/dx (order=1) or d^2/dx^2 (order=2) with
/// centered interior stencils of accuracy `acc`.
inline Eigen::MatrixXd diff_matrix_dense(const Grid& grid, int order,
                                         int acc = 4,
                                         EdgeClosure closure =
                                             EdgeClosure::one_sided) {
  const int N = grid.points;
  const double h = grid.spacing;
  const int half = acc / 2;
  if (N < acc + order + 1)
    throw ConfigError("diff_matrix: grid too small for requested accuracy");
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(N, N);
  const auto c = detail::central_weights(order, acc, h);
  for (int i = half; i < N - half; ++i)
    for (int o = -half; o <= half; ++o) D(i, i + o) = c[o + half];
  if (closure == EdgeClosure::wall) {
    for (int i = 0; i < half; ++i) {
      const int im = N - 1 - i;
      for (int o = -half; o <= half; ++o) {
        if (i + o >= 0) D(i, i + o) = c[o + half];
        if (im + o <= N - 1) D(im, im + o) = c[o + half];
      }
    }
    return D;
  }
  // full-accuracy one-sided rows at both edges
  const int npts = acc + order;
  for (int i = 0; i < half; ++i) {
    std::vector<double> xs(npts);
    for (int j = 0; j < npts; ++j) xs[j] = (j - i) * h;
    const auto w = detail::fornberg_weights(0.0, xs, order);
    for (int j = 0; j < npts; ++j) D(i, j) = w[j];
    std::vector<double> xs2(npts);
    for (int j = 0; j < npts; ++j) xs2[j] = -(j - i) * h;
    const auto w2 = detail::fornberg_weights(0.0, xs2, order);
    for (int j = 0; j < npts; ++j) D(N - 1 - i, N - 1 - j) = w2[j];
  }
  return D;
}

inline LinearOperator diff_matrix(const Grid& grid, int order, int acc = 4,
                                  EdgeClosure closure =
                                      EdgeClosure::one_sided) {
  LinearOperator op;
  op.matrix = diff_matrix_dense(grid, order, acc, closure);
  op.grid = grid;
  op.block_layout = {"scalar"};
  return op;
}

}  // namespace soler
