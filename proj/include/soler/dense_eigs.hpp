#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <optional>
#include <vector>

#include "soler/errors.hpp"
#include "soler/linear_operator.hpp"

extern "C" {
void dgeev_(const char* jobvl, const char* jobvr, const int* n, double* a,
            const int* lda, double* wr, double* wi, double* vl, const int* ldvl,
            double* vr, const int* ldvr, double* work, const int* lwork,
            int* info);
void dgemm_(const char* transa, const char* transb, const int* m, const int* n,
            const int* k, const double* alpha, const double* a, const int* lda,
            const double* b, const int* ldb, const double* beta, double* c,
            const int* ldc);
}

namespace soler {

/// C = alpha * A * B through BLAS; noticeably faster than the expression
/// template product for the operator-product matrices used here.
inline Eigen::MatrixXd matmul(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                              double alpha = 1.0) {
  const int m = static_cast<int>(A.rows());
  const int k = static_cast<int>(A.cols());
  const int n = static_cast<int>(B.cols());
  Eigen::MatrixXd C(m, n);
  const double beta = 0.0;
  dgemm_("N", "N", &m, &n, &k, &alpha, A.data(), &m, B.data(), &k, &beta,
         C.data(), &m);
  return C;
}

/// Full spectrum of a dense real matrix. Complex eigenvalues come in exact
/// conjugate pairs (real Schur form). `vectors` column j holds the eigenvector
/// for values[j].
struct EigenSet {
  std::vector<std::complex<double>> values;
  std::optional<Eigen::MatrixXcd> vectors;
  double residual_bound = 0.0;  // max ||M v - lambda v||_2 / ||v||_2
};

namespace detail {

struct RawEig {
  std::vector<double> wr, wi;
  Eigen::MatrixXd vr;  // LAPACK packed right eigenvectors
};

inline RawEig dgeev(Eigen::MatrixXd A, bool vectors) {
  const int n = static_cast<int>(A.rows());
  if (n == 0 || A.rows() != A.cols())
    throw ConfigError("dense_eigs: matrix must be square and nonempty");
  if (!A.allFinite())
    throw ConfigError("dense_eigs: matrix has non-finite entries");
  RawEig out;
  out.wr.resize(n);
  out.wi.resize(n);
  out.vr = Eigen::MatrixXd::Zero(vectors ? n : 1, vectors ? n : 1);
  int lwork = -1, info = 0;
  double wkopt = 0.0;
  const int ldvr = vectors ? n : 1;
  dgeev_("N", vectors ? "V" : "N", &n, A.data(), &n, out.wr.data(),
         out.wi.data(), nullptr, &n, out.vr.data(), &ldvr, &wkopt, &lwork,
         &info);
  lwork = static_cast<int>(wkopt);
  std::vector<double> work(lwork);
  dgeev_("N", vectors ? "V" : "N", &n, A.data(), &n, out.wr.data(),
         out.wi.data(), nullptr, &n, out.vr.data(), &ldvr, work.data(), &lwork,
         &info);
  if (info < 0)
    throw ConfigError("dense_eigs: bad argument to dgeev");
  if (info > 0)
    throw NumericalFailureError("dense_eigs: QR iteration failed to converge",
                                n);
  return out;
}

/// Unpack LAPACK's real-storage eigenvectors into complex columns.
inline Eigen::MatrixXcd unpack_vectors(const RawEig& raw) {
  const int n = static_cast<int>(raw.wr.size());
  Eigen::MatrixXcd V(n, n);
  for (int j = 0; j < n; ++j) {
    if (raw.wi[j] > 0.0) {
      V.col(j) = raw.vr.col(j).cast<std::complex<double>>() +
                 std::complex<double>(0, 1) * raw.vr.col(j + 1);
    } else if (raw.wi[j] < 0.0) {
      V.col(j) = raw.vr.col(j - 1).cast<std::complex<double>>() -
                 std::complex<double>(0, 1) * raw.vr.col(j);
    } else {
      V.col(j) = raw.vr.col(j).cast<std::complex<double>>();
    }
  }
  return V;
}

}  // namespace detail

/// Dense nonsymmetric eigendecomposition (LAPACK dgeev).
inline EigenSet dense_eigs(const Eigen::MatrixXd& M, bool want_vectors = true) {
  auto raw = detail::dgeev(M, true);
  const int n = static_cast<int>(M.rows());
  EigenSet set;
  set.values.reserve(n);
  for (int j = 0; j < n; ++j) set.values.emplace_back(raw.wr[j], raw.wi[j]);
  Eigen::MatrixXcd V = detail::unpack_vectors(raw);
  // residual bound over all reported pairs via one matrix product
  const Eigen::MatrixXd MVr = matmul(M, raw.vr);
  Eigen::MatrixXcd R(n, n);
  for (int j = 0; j < n; ++j) {
    if (raw.wi[j] > 0.0)
      R.col(j) = MVr.col(j).cast<std::complex<double>>() +
                 std::complex<double>(0, 1) * MVr.col(j + 1);
    else if (raw.wi[j] < 0.0)
      R.col(j) = MVr.col(j - 1).cast<std::complex<double>>() -
                 std::complex<double>(0, 1) * MVr.col(j);
    else
      R.col(j) = MVr.col(j).cast<std::complex<double>>();
  }
  double worst = 0.0;
  for (int j = 0; j < n; ++j) {
    const double vn = V.col(j).norm();
    if (vn == 0.0) continue;
    worst = std::max(worst,
                     (R.col(j) - set.values[j] * V.col(j)).norm() / vn);
  }
  set.residual_bound = worst;
  if (want_vectors) set.vectors = std::move(V);
  return set;
}

inline EigenSet dense_eigs(const LinearOperator& op, bool want_vectors = true) {
  return dense_eigs(op.matrix, want_vectors);
}

/// A few steps of shifted inverse iteration. The QR eigenvectors of strongly
/// non-normal matrices (differentiation-matrix products) can carry spurious
/// mass near the domain edges; this cleans up the vector for a known
/// eigenvalue before localization scoring.
inline Eigen::VectorXd refine_eigenvector(const Eigen::MatrixXd& M,
                                          double eigenvalue,
                                          const Eigen::VectorXd& start,
                                          int iterations = 3) {
  const int n = static_cast<int>(M.rows());
  // displace the shift off the eigenvalue on the same side for any sign
  const double shift = eigenvalue + 1e-9 * std::max(1.0, std::abs(eigenvalue));
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(
      M - shift * Eigen::MatrixXd::Identity(n, n));
  Eigen::VectorXd v = start;
  if (v.norm() == 0.0) v = Eigen::VectorXd::Random(n);
  v.normalize();
  for (int it = 0; it < iterations; ++it) {
    v = lu.solve(v);
    const double nv = v.norm();
    if (!std::isfinite(nv) || nv == 0.0) return start;
    v /= nv;
  }
  return v;
}

}  // namespace soler
