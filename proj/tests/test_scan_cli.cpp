#include <catch2/catch.hpp>
#include <cmath>

#include "soler/scan.hpp"

using namespace soler;

TEST_CASE("config round trip") {
  const std::string text =
      "k = 3\n"
      "omega_min = 0.9\n"
      "omega_max = 0.98\n"
      "omega_count = 5\n"
      "spacing = geometric\n"
      "# comment line\n"
      "N = 512\n"
      "grid = manual\n"
      "L = 42.5\n"
      "out = results\n";
  const ScanConfig c = ScanConfig::from_kv(KeyValueFile::parse(text));
  CHECK(c.k == 3);
  CHECK(c.spacing == OmegaSpacing::geometric_in_gap);
  CHECK_FALSE(c.grid_auto);
  CHECK(c.L == 42.5);

  // parse -> serialize -> parse -> serialize is a fixed point
  const std::string s1 = c.to_kv().serialize();
  const ScanConfig c2 = ScanConfig::from_kv(KeyValueFile::parse(s1));
  const std::string s2 = c2.to_kv().serialize();
  CHECK(s1 == s2);

  CHECK_THROWS_AS(KeyValueFile::parse("no equals sign"), ConfigError);
}

TEST_CASE("omega spacing") {
  ScanConfig c;
  c.omega_min = 0.9;
  c.omega_max = 0.99;
  c.omega_count = 4;
  c.spacing = OmegaSpacing::geometric_in_gap;
  const auto ws = c.omegas();
  REQUIRE(ws.size() == 4);
  CHECK(ws.front() == Approx(0.9));
  CHECK(ws.back() == Approx(0.99));
  // gaps shrink geometrically
  const double r1 = (1.0 - ws[1]) / (1.0 - ws[0]);
  const double r2 = (1.0 - ws[2]) / (1.0 - ws[1]);
  CHECK(r1 == Approx(r2).epsilon(1e-12));

  c.omega_max = 1.5;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("scan over omega") {
  ScanConfig cfg;
  cfg.k = 3;
  cfg.omega_list = {0.92, 0.9};  // deliberately unsorted
  cfg.grid_auto = false;
  cfg.N = 512;
  cfg.L = 46.0;
  cfg.check_spectrum = true;
  cfg.check_rescaled = false;
  cfg.jobs = 2;
  const ScanOutput out = run_scan(cfg);
  REQUIRE(out.rows.size() == 2);
  CHECK(out.rows[0].omega == 0.9);  // sorted
  CHECK(out.rows[1].omega == 0.92);
  for (const auto& row : out.rows) {
    CHECK(row.status == "ok");
    CHECK(row.verdict == "real-pair");
    REQUIRE(row.lambda_unstable);
    CHECK(*row.lambda_unstable > 0.0);
    CHECK(row.Q > 0.0);
  }
  REQUIRE(out.Lambda_ref);
  CHECK(*out.Lambda_ref == Approx(1.4525443).margin(1e-3));

  SECTION("per-omega failures are recorded, scan continues") {
    cfg.omega_list = {0.9, 0.999};  // the second cannot decay on this L
    cfg.check_spectrum = false;
    const ScanOutput bad = run_scan(cfg);
    REQUIRE(bad.rows.size() == 2);
    CHECK(bad.rows[0].status == "ok");
    CHECK(bad.rows[1].status != "ok");
  }
}

TEST_CASE("scan csv format") {
  std::vector<ScanRow> rows(1);
  rows[0].omega = 0.9;
  rows[0].eps = std::sqrt(0.19);
  rows[0].gamma = 0.2;
  rows[0].Q = 0.4;
  rows[0].verdict = "no-real-pair";
  const std::string csv = scan_csv(rows);
  CHECK(csv.rfind("omega,eps,gamma,Q,lambda_unstable,lambda_over_eps2,mu0,"
                  "verdict,status\n", 0) == 0);
  CHECK(csv.find(",,,no-real-pair,ok") != std::string::npos);
  // 17-significant-digit round trip
  CHECK(std::stod(fmt17(rows[0].eps)) == rows[0].eps);
}

TEST_CASE("profile csv carries metadata") {
  const auto model = make_model(1);
  const SolitaryWave w = solve_profile(model, 0.9, Grid::uniform(46.0, 257));
  const std::string csv = profile_csv(w, model);
  CHECK(csv.rfind("# k=1, a=1, m=1, omega=0.9", 0) == 0);
  CHECK(csv.find("\nx,v,u,X,Y\n") != std::string::npos);
}

TEST_CASE("charge slopes against the power law") {
  ScanConfig cfg;
  cfg.omega_min = 0.99;
  cfg.omega_max = 0.9999;
  cfg.omega_count = 4;
  cfg.spacing = OmegaSpacing::geometric_in_gap;
  for (int k : {1, 3}) {
    cfg.k = k;
    const ChargeSlope cs = charge_slope(cfg);
    CHECK(cs.expected == Approx(1.0 / k - 0.5));
    CHECK(cs.slope == Approx(cs.expected).margin(0.03));
  }
  cfg.spacing = OmegaSpacing::linear;
  CHECK_THROWS_AS(charge_slope(cfg), ConfigError);
  cfg.spacing = OmegaSpacing::geometric_in_gap;
  cfg.omega_count = 3;
  CHECK_THROWS_AS(charge_slope(cfg), ConfigError);
}

TEST_CASE("convergence study", "[heavy]") {
  ScanConfig cfg;
  cfg.k = 3;
  cfg.omega_list = {0.9};
  const ConvergenceStudy st = convergence_study(cfg);
  REQUIRE(st.rows.size() == 5);
  for (const auto& row : st.rows) CHECK(row.status == "ok");
  // lambda drift N = 1024 -> 2048 below 1e-3 relative
  CHECK(st.converged);
  CHECK(st.lambda_refine_drift < 1e-3);
  // widening the domain at fixed spacing only moves lambda exponentially
  CHECK(st.lambda_domain_drift < 1e-6);
  // free reference: gap edge at m - omega within 1%
  CHECK(st.free_gap_edge_rel_err < 0.01);
  // interacting runs carry a near-zero cluster, free run sets the edge
  CHECK(st.rows[1].near_zero_radius > 0.0);
  CHECK(st.rows[1].two_omega_rel_err < 1e-4);
}

TEST_CASE("scan artifacts are deterministic") {
  ScanConfig cfg;
  cfg.k = 1;
  cfg.omega_list = {0.9};
  cfg.grid_auto = false;
  cfg.N = 256;
  cfg.L = 46.0;
  cfg.check_rescaled = false;
  const ScanOutput a = run_scan(cfg);
  const ScanOutput b = run_scan(cfg);
  CHECK(scan_csv(a.rows) == scan_csv(b.rows));
  REQUIRE(a.reports[0].N == b.reports[0].N);
  CHECK(spectrum_csv(a.reports[0]) == spectrum_csv(b.reports[0]));
  // stable nonlinearity: no real pair reported anywhere
  CHECK_FALSE(a.rows[0].lambda_unstable);
  CHECK(a.rows[0].verdict == "no-real-pair");
}
