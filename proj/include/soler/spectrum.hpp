#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "soler/dense_eigs.hpp"
#include "soler/dirac_operators.hpp"
#include "soler/spectral_filters.hpp"

namespace soler {

enum class EigenClass {
  near_zero,
  exact_pair_2omega,
  essential_proxy,
  real_unstable,
  imaginary_point,
  other,
};

inline std::string to_string(EigenClass c) {
  switch (c) {
    case EigenClass::near_zero: return "near-zero";
    case EigenClass::exact_pair_2omega: return "exact-pair-2omega";
    case EigenClass::essential_proxy: return "essential-proxy";
    case EigenClass::real_unstable: return "real-unstable";
    case EigenClass::imaginary_point: return "imaginary-point";
    default: return "other";
  }
}

struct ClassifiedEigenvalue {
  std::complex<double> lambda;
  EigenClass cls = EigenClass::other;
  double localization = 0.0;
  double oscillation = 0.0;
};

/// Classified point spectrum of the linearization J L(omega), computed from
/// the 2N x 2N product reduction -L_- L_+ (sigma = lambda^2).
struct SpectrumReport {
  double omega = 0.0;
  int k = 0;
  double m = 1.0;
  double eps_dirac = 0.0;
  int N = 0;
  double L = 0.0;
  std::vector<ClassifiedEigenvalue> eigenvalues;
  std::optional<double> lambda_unstable;
  std::optional<double> mu0;          // lambda/eps^2 - Lambda_ref
  std::optional<double> lambda_ref;   // limit eigenvalue used for mu0
  int real_unstable_pairs = 0;
  double tol0 = 0.0;                  // near-zero radius used by the classifier
  double near_zero_radius = 0.0;      // measured cluster radius
  int near_zero_count = 0;
  double two_omega_rel_err = 1.0;     // min |lambda -+ 2 omega i| / (2 omega)
  double symmetry_defect = 0.0;       // quadruple-symmetry defect
  double residual_bound = 0.0;        // eigensolver residual bound
};

struct ClassifyTolerances {
  double free_noise_floor = 0.0;  // calibrated on the zero-amplitude wave
  double tol2_rel = 1e-3;         // bucket width for the 2 omega i pair
};

namespace detail {

struct ModeMetrics {
  double localization = 0.0;
  double oscillation = 0.0;
};

inline ModeMetrics metrics(const Eigen::VectorXcd& v, const Grid& grid,
                           int blocks) {
  return {localization_score(v, grid, blocks), oscillation_score(v, blocks)};
}

}  // namespace detail

/// Noise floor of the classification at a given grid: largest spurious
/// real part (and in-gap magnitude of localized artifacts) in the spectrum
/// of the zero-amplitude wave, whose exact spectrum is purely imaginary
/// outside the gap.
inline double calibrate_free_floor(const NonlinearityModel& model, double omega,
                                   const Grid& grid) {
  const SolitaryWave free = zero_wave(model, omega, grid);
  const DiracBlocks blocks = assemble_dirac(free, model, grid);
  const Eigen::MatrixXd M =
      matmul(blocks.Lminus.matrix, blocks.Lplus.matrix, -1.0);
  const EigenSet eig = dense_eigs(M, true);
  const double gap = model.m - omega;
  double floor = 0.0;
  for (size_t i = 0; i < eig.values.size(); ++i) {
    const std::complex<double> lam = std::sqrt(eig.values[i]);
    floor = std::max(floor, std::abs(lam.real()));
    if (std::abs(lam) < 0.8 * gap) {
      const auto mm = detail::metrics(eig.vectors->col(i), grid, 2);
      if (mm.localization >= kLocalizationThreshold &&
          mm.oscillation <= kOscillationThreshold)
        floor = std::max(floor, std::abs(lam));
    }
  }
  return floor;
}

/// Classify the spectrum of J L at the wave underlying `blocks`.
///
/// sigma values of -L_- L_+ are mapped to +-sqrt(sigma) (principal branch,
/// then symmetrized). Localization and grid-oscillation scores of the
/// eigenvectors separate genuine point spectrum from the discretized
/// essential spectrum, boundary-row artifacts and the spectral-doubling
/// branch of the centered first derivative. The near-zero tolerance tol0 is
/// self-calibrated: 10 x max(measured kernel-cluster radius, free-case noise
/// floor).
inline SpectrumReport dirac_spectrum(
    const DiracBlocks& blocks, const NonlinearityModel& model,
    std::optional<double> lambda_ref = std::nullopt,
    const ClassifyTolerances& tols = {}) {
  const Grid& grid = blocks.grid;
  const int N = grid.points;
  const double omega = blocks.omega;
  const double m = model.m;
  const double gap = m - omega;

  const Eigen::MatrixXd M =
      matmul(blocks.Lminus.matrix, blocks.Lplus.matrix, -1.0);
  const EigenSet eig = dense_eigs(M, true);

  SpectrumReport rep;
  rep.omega = omega;
  rep.k = model.k;
  rep.m = m;
  rep.eps_dirac = std::sqrt(m * m - omega * omega);
  rep.N = N;
  rep.L = grid.half_width;
  rep.residual_bound = eig.residual_bound;

  struct Mode {
    std::complex<double> sigma;
    std::complex<double> lambda;  // principal root
    detail::ModeMetrics mm;
    bool sigma_real = false;
  };
  std::vector<Mode> modes(2 * N);
  for (int i = 0; i < 2 * N; ++i) {
    Mode& md = modes[i];
    md.sigma = eig.values[i];
    md.sigma_real =
        std::abs(md.sigma.imag()) <= 1e-10 * std::max(1.0, std::abs(md.sigma));
    md.lambda = std::sqrt(md.sigma);
    md.mm = detail::metrics(eig.vectors->col(i), grid, 2);
    // candidates that decide the real-unstable count or the kernel cluster:
    // clean their vectors before trusting the scores
    const bool decision_critical =
        md.sigma_real && (md.sigma.real() > 0.0 ||
                          std::abs(md.lambda) < 0.5 * std::max(gap, 1e-12));
    if (decision_critical) {
      const Eigen::VectorXd refined = refine_eigenvector(
          M, md.sigma.real(), eig.vectors->col(i).real());
      md.mm = detail::metrics(refined.cast<std::complex<double>>(), grid, 2);
    }
  }

  // self-calibrated near-zero radius: the (up to) four smallest localized
  // smooth modes below half the gap form the numerical kernel cluster
  std::vector<double> cluster;
  for (const Mode& md : modes) {
    if (std::abs(md.lambda) >= 0.5 * gap) continue;
    if (md.mm.localization < kLocalizationThreshold) continue;
    if (md.mm.oscillation > kOscillationThreshold) continue;
    cluster.push_back(std::abs(md.lambda));
  }
  std::sort(cluster.begin(), cluster.end());
  if (cluster.size() > 4) cluster.resize(4);
  rep.near_zero_count = static_cast<int>(cluster.size());
  rep.near_zero_radius = cluster.empty() ? 0.0 : cluster.back();
  rep.tol0 =
      10.0 * std::max({rep.near_zero_radius, tols.free_noise_floor, 1e-14});

  const double tol2 = tols.tol2_rel * omega;
  const std::complex<double> two_omega_i(0.0, 2.0 * omega);

  rep.eigenvalues.reserve(4 * N);
  int unstable_positive = 0;
  double best_unstable = 0.0;
  for (const Mode& md : modes) {
    for (int sign : {+1, -1}) {
      const std::complex<double> lam =
          double(sign) * md.lambda;
      ClassifiedEigenvalue ce;
      ce.lambda = lam;
      ce.localization = md.mm.localization;
      ce.oscillation = md.mm.oscillation;
      const bool localized = md.mm.localization >= kLocalizationThreshold;
      const bool oscillatory = md.mm.oscillation > kOscillationThreshold;
      const bool lam_real = md.sigma_real && md.sigma.real() >= 0.0;
      const bool lam_imag = md.sigma_real && md.sigma.real() < 0.0;
      rep.two_omega_rel_err =
          std::min({rep.two_omega_rel_err,
                    std::abs(lam - two_omega_i) / (2.0 * omega),
                    std::abs(lam + two_omega_i) / (2.0 * omega)});
      if (std::abs(lam) < rep.tol0 && localized && !oscillatory) {
        ce.cls = EigenClass::near_zero;
      } else if (std::abs(lam - two_omega_i) < tol2 ||
                 std::abs(lam + two_omega_i) < tol2) {
        ce.cls = EigenClass::exact_pair_2omega;
      } else if (!localized) {
        ce.cls = (std::abs(lam.imag()) >= gap * (1.0 - 1e-6) - tol2)
                     ? EigenClass::essential_proxy
                     : EigenClass::other;
      } else if (oscillatory) {
        // localized but alternating at the grid scale: a bound state of the
        // spectral-doubling branch of the centered first derivative, which
        // is a pure discretization artifact and never point spectrum
        ce.cls = EigenClass::other;
      } else if (lam_real && std::abs(lam) > rep.tol0) {
        ce.cls = EigenClass::real_unstable;
        if (sign > 0) {
          ++unstable_positive;
          best_unstable = std::max(best_unstable, lam.real());
        }
      } else if (lam_imag) {
        ce.cls = EigenClass::imaginary_point;
      } else {
        ce.cls = EigenClass::other;
      }
      rep.eigenvalues.push_back(ce);
    }
  }
  rep.real_unstable_pairs = unstable_positive;
  if (unstable_positive > 0) {
    rep.lambda_unstable = best_unstable;
    if (lambda_ref) {
      rep.lambda_ref = lambda_ref;
      rep.mu0 = best_unstable / (rep.eps_dirac * rep.eps_dirac) - *lambda_ref;
    }
  }

  // quadruple-symmetry defect of the reported multiset
  double defect = 0.0;
  for (const auto& a : rep.eigenvalues) {
    double dneg = 1e300, dconj = 1e300;
    for (const auto& b : rep.eigenvalues) {
      dneg = std::min(dneg, std::abs(b.lambda + a.lambda));
      dconj = std::min(dconj, std::abs(b.lambda - std::conj(a.lambda)));
    }
    defect = std::max({defect, dneg, dconj});
  }
  rep.symmetry_defect = defect;
  return rep;
}

}  // namespace soler
