#include <catch2/catch.hpp>
#include <cmath>
#include <random>

#include "soler/dense_eigs.hpp"
#include "soler/grid.hpp"
#include "soler/linear_operator.hpp"
#include "soler/quadrature.hpp"
#include "soler/root_finding.hpp"

using namespace soler;

TEST_CASE("grid construction") {
  const Grid g = Grid::uniform(1.0, 3);
  REQUIRE(g.nodes.size() == 3);
  CHECK(g.nodes[0] == Approx(-1.0));
  CHECK(g.nodes[1] == Approx(0.0).margin(1e-16));
  CHECK(g.nodes[2] == Approx(1.0));
  CHECK(g.spacing == Approx(1.0));

  const Grid big = build_grid(20.0, 2048);
  CHECK(big.spacing == Approx(40.0 / 2047));
  CHECK(big.nodes[1] - big.nodes[0] == big.spacing);
  for (int j = 1; j < big.points; ++j) REQUIRE(big.nodes[j] > big.nodes[j - 1]);

  CHECK_THROWS_AS(build_grid(0.0, 100), ConfigError);
  CHECK_THROWS_AS(build_grid(-1.0, 100), ConfigError);
  CHECK_THROWS_AS(build_grid(1.0, 3), ConfigError);  // validated entry: N >= 16
}

TEST_CASE("differentiation matrices") {
  const Grid g = build_grid(10.0, 2048);

  SECTION("derivative of a constant vanishes") {
    const auto D1 = diff_matrix(g, 1);
    Eigen::VectorXd ones = Eigen::VectorXd::Ones(g.points);
    CHECK((D1.matrix * ones).cwiseAbs().maxCoeff() < 1e-12);
  }

  SECTION("second derivative exact on x^2 in the interior") {
    const auto D2 = diff_matrix(g, 2);
    Eigen::VectorXd x2(g.points);
    for (int j = 0; j < g.points; ++j) x2[j] = g.nodes[j] * g.nodes[j];
    const Eigen::VectorXd r = D2.matrix * x2;
    for (int j = 4; j < g.points - 4; ++j) CHECK(r[j] == Approx(2.0).margin(1e-10));
  }

  SECTION("first derivative of sin against cos") {
    const auto D1 = diff_matrix(g, 1);
    Eigen::VectorXd s(g.points);
    for (int j = 0; j < g.points; ++j) s[j] = std::sin(g.nodes[j]);
    const Eigen::VectorXd d = D1.matrix * s;
    double worst = 0.0;
    for (int j = 4; j < g.points - 4; ++j)
      worst = std::max(worst, std::abs(d[j] - std::cos(g.nodes[j])));
    CHECK(worst < 1e-8);
  }

  SECTION("interior antisymmetry and zero row sums") {
    const Grid small = build_grid(5.0, 64);
    const auto D1 = diff_matrix(small, 1);
    for (int i = 2; i < 62; ++i) {
      CHECK(std::abs(D1.matrix.row(i).sum()) < 1e-13 / small.spacing);
      for (int j = 2; j < 62; ++j)
        REQUIRE(D1.matrix(i, j) == -D1.matrix(j, i));
    }
  }

  SECTION("accuracy order parameter") {
    for (int acc : {2, 4, 6, 8}) {
      const auto D2 = diff_matrix(g, 2, acc);
      Eigen::VectorXd s(g.points);
      for (int j = 0; j < g.points; ++j) s[j] = std::sin(g.nodes[j]);
      const Eigen::VectorXd d = D2.matrix * s;
      double worst = 0.0;
      for (int j = 8; j < g.points - 8; ++j)
        worst = std::max(worst, std::abs(d[j] + std::sin(g.nodes[j])));
      // truncation bound plus the 1/h^2 roundoff floor of high orders
      CHECK(worst < 1e-9 + 20.0 * std::pow(g.spacing, acc));
    }
  }
}

TEST_CASE("dense eigensolver") {
  SECTION("rotation generator") {
    Eigen::MatrixXd A(2, 2);
    A << 0, 1, -1, 0;
    const EigenSet e = dense_eigs(A);
    std::vector<double> ims = {e.values[0].imag(), e.values[1].imag()};
    std::sort(ims.begin(), ims.end());
    CHECK(ims[0] == Approx(-1.0));
    CHECK(ims[1] == Approx(1.0));
    CHECK(e.values[0].real() == Approx(0.0).margin(1e-14));
  }

  SECTION("diagonal") {
    Eigen::MatrixXd A(2, 2);
    A << 3, 0, 0, -1;
    const EigenSet e = dense_eigs(A);
    std::vector<double> res = {e.values[0].real(), e.values[1].real()};
    std::sort(res.begin(), res.end());
    CHECK(res[0] == Approx(-1.0));
    CHECK(res[1] == Approx(3.0));
  }

  SECTION("defective Jordan block does not crash") {
    Eigen::MatrixXd A(2, 2);
    A << 2, 1, 0, 2;
    const EigenSet e = dense_eigs(A);
    CHECK(e.values[0].real() == Approx(2.0).margin(1e-6));
    CHECK(e.values[1].real() == Approx(2.0).margin(1e-6));
    CHECK(std::isfinite(e.residual_bound));
  }

  SECTION("conjugation closure and residual bound on random matrices") {
    std::mt19937 rng(1234);
    std::normal_distribution<double> gauss;
    for (int trial = 0; trial < 8; ++trial) {
      const int n = 20 + 15 * trial;
      Eigen::MatrixXd A(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) A(i, j) = gauss(rng);
      const EigenSet e = dense_eigs(A);
      const double norm = A.cwiseAbs().rowwise().sum().maxCoeff();
      CHECK(e.residual_bound < 1e-8 * norm);
      for (const auto& z : e.values) {
        double best = 1e300;
        for (const auto& w : e.values) best = std::min(best, std::abs(w - std::conj(z)));
        REQUIRE(best < 1e-10 * std::max(1.0, std::abs(z)));
      }
    }
  }

  SECTION("invalid input") {
    Eigen::MatrixXd bad(2, 2);
    bad << 1, 2, std::nan(""), 0;
    CHECK_THROWS_AS(dense_eigs(bad), ConfigError);
  }
}

TEST_CASE("quadrature") {
  SECTION("constant on a small grid") {
    const Grid g = build_grid(1.0, 17);
    std::vector<double> ones(17, 1.0);
    const auto r = quadrature_checked(g, ones);
    CHECK(r.value == Approx(2.0).epsilon(1e-12));
    CHECK_FALSE(r.tails_decayed);
  }

  SECTION("sech^2 integrates to 2 tanh(L)") {
    const Grid g = build_grid(20.0, 2049);
    std::vector<double> s(g.points);
    for (int j = 0; j < g.points; ++j) {
      const double c = std::cosh(g.nodes[j]);
      s[j] = 1.0 / (c * c);
    }
    CHECK(quadrature(g, s) == Approx(2.0 * std::tanh(20.0)).margin(1e-10));
    CHECK(quadrature(g, s) == Approx(2.0).margin(1e-10));
  }

  SECTION("Gaussian against the error function") {
    const Grid g = build_grid(10.0, 2049);
    std::vector<double> s(g.points);
    for (int j = 0; j < g.points; ++j) s[j] = std::exp(-g.nodes[j] * g.nodes[j]);
    CHECK(quadrature(g, s) == Approx(std::sqrt(M_PI)).margin(1e-10));
  }

  SECTION("length mismatch") {
    const Grid g = build_grid(1.0, 17);
    std::vector<double> wrong(5, 1.0);
    CHECK_THROWS_AS(quadrature(g, wrong), ConfigError);
  }

  SECTION("odd integrands on symmetric grids") {
    std::mt19937 rng(77);
    std::uniform_real_distribution<double> coef(-2.0, 2.0);
    const Grid g = build_grid(8.0, 513);
    for (int trial = 0; trial < 20; ++trial) {
      const double a = coef(rng), b = coef(rng), c = coef(rng);
      std::vector<double> s(g.points);
      double sup = 0.0;
      for (int j = 0; j < g.points; ++j) {
        const double x = g.nodes[j];
        s[j] = a * std::sin(b * x) * std::exp(-0.2 * x * x) + c * x * std::exp(-std::abs(x));
        sup = std::max(sup, std::abs(s[j]));
      }
      REQUIRE(std::abs(quadrature(g, s)) < 1e-12 * sup * g.half_width);
    }
  }
}

TEST_CASE("root finding") {
  CHECK(find_root([](double x) { return x - 1.0; }, 0.0, 2.0, 1e-13) ==
        Approx(1.0).margin(1e-12));
  CHECK(find_root([](double x) { return x * x - 2.0; }, 1.0, 2.0, 1e-13) ==
        Approx(std::sqrt(2.0)).margin(1e-12));
  CHECK_THROWS_AS(
      find_root([](double x) { return x * x + 1.0; }, 0.0, 1.0, 1e-13),
      BracketingError);
}
