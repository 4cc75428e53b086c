#include <catch2/catch.hpp>
#include <cmath>

#include "evans_oracle.hpp"
#include "soler/scan.hpp"
#include "soler/spectrum.hpp"

using namespace soler;

namespace {
// Evans-oracle references (compound-matrix shooting on the 4x4 ODE system)
constexpr double kLambdaOmega90K3 = 0.11388454;
constexpr double kLambdaK3 = 1.4525443;
}  // namespace

TEST_CASE("free Dirac operator") {
  const auto model = make_model(1);
  const double omega = 0.9;
  const Grid grid = Grid::uniform(46.0, 512);
  const SolitaryWave free = zero_wave(model, omega, grid);
  const DiracBlocks blocks = assemble_dirac(free, model, grid);

  SECTION("blocks coincide when the wave vanishes") {
    CHECK((blocks.Lminus.matrix - blocks.Lplus.matrix).cwiseAbs().maxCoeff() ==
          0.0);
  }

  SECTION("purely imaginary spectrum with the right gap") {
    const SpectrumReport rep = dirac_spectrum(blocks, model);
    CHECK(rep.near_zero_count == 0);
    CHECK(rep.real_unstable_pairs == 0);
    double edge = 1e300;
    for (const auto& e : rep.eigenvalues) {
      CHECK(std::abs(e.lambda.real()) < 1e-8);
      if (std::abs(e.lambda) > 1e-8)
        edge = std::min(edge, std::abs(e.lambda.imag()));
    }
    CHECK(edge == Approx(model.m - omega).epsilon(0.01));
  }
}

TEST_CASE("Dirac block assembly") {
  const auto model = make_model(1);
  const double omega = 0.9;
  const Grid grid = Grid::uniform(46.0, 1025);
  const SolitaryWave wave = solve_profile(model, omega, grid);
  const DiracBlocks blocks = assemble_dirac(wave, model, grid);

  SECTION("central potential value") {
    // f(X(0)) = Gamma = 2(m - omega) for k = 1
    CHECK(blocks.pot_f[512] == Approx(0.2).margin(1e-12));
  }

  SECTION("grid mismatch is rejected") {
    CHECK_THROWS_AS(assemble_dirac(wave, model, Grid::uniform(46.0, 512)),
                    ConfigError);
  }

  SECTION("parity classes are preserved") {
    // (even, odd) spinor pairs map to (even, odd) under both blocks
    const int N = grid.points;
    Eigen::VectorXd vec(2 * N);
    for (int j = 0; j < N; ++j) {
      const double x = grid.nodes[j];
      vec[j] = std::exp(-0.1 * x * x);            // even component
      vec[N + j] = x * std::exp(-0.1 * x * x);    // odd component
    }
    for (const auto* B : {&blocks.Lminus.matrix, &blocks.Lplus.matrix}) {
      const Eigen::VectorXd out = (*B) * vec;
      double defect = 0.0;
      for (int j = 0; j < N; ++j) {
        defect = std::max(defect, std::abs(out[j] - out[N - 1 - j]));
        defect = std::max(defect, std::abs(out[N + j] + out[N + N - 1 - j]));
      }
      CHECK(defect < 1e-8);
    }
  }
}

TEST_CASE("unstable eigenvalue for k = 3") {
  const auto model = make_model(3);
  const double omega = 0.9;
  const Grid grid = auto_spectrum_grid(1.0, omega);
  const SolitaryWave wave = solve_profile(model, omega, grid);
  const SpectrumReport rep =
      dirac_spectrum(assemble_dirac(wave, model, grid), model, kLambdaK3);

  SECTION("exactly one real pair, matching the shooting oracle") {
    CHECK(rep.real_unstable_pairs == 1);
    REQUIRE(rep.lambda_unstable);
    CHECK(*rep.lambda_unstable ==
          Approx(kLambdaOmega90K3).epsilon(5e-3));
    REQUIRE(rep.mu0);
    CHECK(*rep.mu0 < 0.0);  // lambda/eps^2 approaches Lambda from below
  }

  SECTION("live Evans oracle agrees with the frozen constant") {
    const auto root = evans_oracle::real_eigenvalue(3, 0.9, 0.05, 0.3, 25);
    REQUIRE(root);
    CHECK(*root == Approx(kLambdaOmega90K3).epsilon(1e-3));
    CHECK(*rep.lambda_unstable == Approx(*root).epsilon(5e-3));
  }

  SECTION("exact pair and cluster bookkeeping") {
    CHECK(rep.two_omega_rel_err < 1e-4);
    CHECK(rep.near_zero_count >= 2);
    CHECK(rep.near_zero_radius < rep.tol0);
    CHECK(*rep.lambda_unstable > rep.tol0);
  }

  SECTION("essential proxies sit in the band; doubling artifacts are 'other'") {
    const double gap = model.m - omega;
    int doubler = 0;
    for (const auto& e : rep.eigenvalues) {
      if (e.cls == EigenClass::essential_proxy)
        REQUIRE(std::abs(e.lambda.imag()) >= gap * 0.98);
      if (e.cls == EigenClass::other && e.oscillation > 1.0 &&
          std::abs(e.lambda.imag()) < 1e-8)
        ++doubler;
    }
    CHECK(doubler >= 2);  // the spectral-doubling real pair is filtered out
  }

  SECTION("quadruple symmetry") {
    CHECK(rep.symmetry_defect < 1e-8);
  }
}

TEST_CASE("stable case k = 1") {
  const auto model = make_model(1);
  const Grid grid = auto_spectrum_grid(1.0, 0.9);
  const SolitaryWave wave = solve_profile(model, 0.9, grid);
  ClassifyTolerances tols;
  tols.free_noise_floor = calibrate_free_floor(model, 0.9, grid);
  const SpectrumReport rep = dirac_spectrum(assemble_dirac(wave, model, grid),
                                            model, std::nullopt, tols);
  CHECK(rep.real_unstable_pairs == 0);
  CHECK(rep.two_omega_rel_err < 1e-4);
  CHECK(rep.near_zero_count >= 2);
}

TEST_CASE("product reduction matches the full block eigenproblem") {
  const auto model = make_model(3);
  const double omega = 0.9;
  const Grid grid = Grid::uniform(20.0 / std::sqrt(1.0 - omega * omega), 192);
  const SolitaryWave wave = solve_profile(model, omega, grid);
  const DiracBlocks blocks = assemble_dirac(wave, model, grid);
  const SpectrumReport rep = dirac_spectrum(blocks, model);

  const int n2 = 2 * grid.points;
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(2 * n2, 2 * n2);
  J.block(0, n2, n2, n2) = blocks.Lminus.matrix;
  J.block(n2, 0, n2, n2) = -blocks.Lplus.matrix;
  const EigenSet full = dense_eigs(J, false);
  double worst = 0.0;
  for (const auto& lam : full.values) {
    if (std::abs(lam) < std::max(1e-3, rep.tol0)) continue;
    double best = 1e300;
    for (const auto& e : rep.eigenvalues)
      best = std::min(best, std::abs(lam - e.lambda));
    worst = std::max(worst, best / std::abs(lam));
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("spectrum report export") {
  const auto model = make_model(1);
  const Grid grid = Grid::uniform(46.0, 256);
  const SolitaryWave wave = solve_profile(model, 0.9, grid);
  const SpectrumReport rep =
      dirac_spectrum(assemble_dirac(wave, model, grid), model);
  const std::string csv = spectrum_csv(rep);
  CHECK(csv.rfind("re_lambda,im_lambda,class,localization\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') ==
        1 + static_cast<long>(rep.eigenvalues.size()));
  const auto j = spectrum_report_json(rep);
  CHECK(j["omega"] == 0.9);
  CHECK(j["checks"].contains("two_omega_resid"));
  CHECK(j["lambda_unstable"].is_null());
}
