#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "soler/io_util.hpp"
#include "soler/nls_operators.hpp"
#include "soler/rescaled_problem.hpp"
#include "soler/spectrum.hpp"

namespace soler {

enum class OmegaSpacing { linear, geometric_in_gap };

/// Batch-scan configuration. Serializes to / parses from a flat key=value
/// file; every field can be overridden from the command line.
struct ScanConfig {
  int k = 3;
  double a = 1.0;
  double m = 1.0;
  std::vector<double> omega_list;  // explicit list wins over the range
  double omega_min = 0.9;
  double omega_max = 0.98;
  int omega_count = 3;
  OmegaSpacing spacing = OmegaSpacing::linear;
  bool grid_auto = true;
  int N = 2048;
  double L = 40.0;
  std::string out_dir = "out";
  bool check_spectrum = true;
  bool check_rescaled = true;
  int jobs = 1;

  std::vector<double> omegas() const {
    if (!omega_list.empty()) return omega_list;
    std::vector<double> ws(omega_count);
    if (omega_count == 1) {
      ws[0] = omega_min;
      return ws;
    }
    for (int i = 0; i < omega_count; ++i) {
      const double t = double(i) / (omega_count - 1);
      if (spacing == OmegaSpacing::linear) {
        ws[i] = omega_min + t * (omega_max - omega_min);
      } else {
        // geometric in (m - omega), from the widest gap to the narrowest
        const double g0 = m - omega_min, g1 = m - omega_max;
        ws[i] = m - g0 * std::pow(g1 / g0, t);
      }
    }
    return ws;
  }

  void validate() const {
    for (double w : omegas())
      if (!(w > 0.0) || !(w < m))
        throw ConfigError("scan: omega values must lie in (0, m)");
    if (N > 4096) throw ConfigError("scan: N > 4096 exceeds the dense-solver budget");
    if (jobs < 1) throw ConfigError("scan: jobs must be >= 1");
  }

  static ScanConfig from_kv(const KeyValueFile& kv) {
    ScanConfig c;
    c.k = std::stoi(kv.get_or("k", "3"));
    c.a = std::stod(kv.get_or("a", "1"));
    c.m = std::stod(kv.get_or("m", "1"));
    if (kv.has("omega_list")) {
      std::stringstream ss(kv.get("omega_list"));
      std::string tok;
      while (std::getline(ss, tok, ',')) c.omega_list.push_back(std::stod(tok));
    }
    c.omega_min = std::stod(kv.get_or("omega_min", "0.9"));
    c.omega_max = std::stod(kv.get_or("omega_max", "0.98"));
    c.omega_count = std::stoi(kv.get_or("omega_count", "3"));
    const std::string sp = kv.get_or("spacing", "linear");
    if (sp == "linear") c.spacing = OmegaSpacing::linear;
    else if (sp == "geometric") c.spacing = OmegaSpacing::geometric_in_gap;
    else throw ConfigError("scan: spacing must be linear or geometric");
    const std::string gp = kv.get_or("grid", "auto");
    if (gp == "auto") c.grid_auto = true;
    else if (gp == "manual") c.grid_auto = false;
    else throw ConfigError("scan: grid must be auto or manual");
    c.N = std::stoi(kv.get_or("N", "2048"));
    c.L = std::stod(kv.get_or("L", "40"));
    c.out_dir = kv.get_or("out", "out");
    c.check_spectrum = kv.get_or("check_spectrum", "true") == "true";
    c.check_rescaled = kv.get_or("check_rescaled", "true") == "true";
    c.jobs = std::stoi(kv.get_or("jobs", "1"));
    return c;
  }

  KeyValueFile to_kv() const {
    KeyValueFile kv;
    kv.set("k", std::to_string(k));
    kv.set("a", fmt17(a));
    kv.set("m", fmt17(m));
    if (!omega_list.empty()) {
      std::string s;
      for (size_t i = 0; i < omega_list.size(); ++i)
        s += (i ? "," : "") + fmt17(omega_list[i]);
      kv.set("omega_list", s);
    }
    kv.set("omega_min", fmt17(omega_min));
    kv.set("omega_max", fmt17(omega_max));
    kv.set("omega_count", std::to_string(omega_count));
    kv.set("spacing",
           spacing == OmegaSpacing::linear ? "linear" : "geometric");
    kv.set("grid", grid_auto ? "auto" : "manual");
    kv.set("N", std::to_string(N));
    kv.set("L", fmt17(L));
    kv.set("out", out_dir);
    kv.set("check_spectrum", check_spectrum ? "true" : "false");
    kv.set("check_rescaled", check_rescaled ? "true" : "false");
    kv.set("jobs", std::to_string(jobs));
    return kv;
  }
};

/// Spectrum-capable grid for one frequency: L = 20 / eps resolves the wave
/// and the in-gap eigenmodes; N keeps h at or below 0.1 within the dense
/// budget.
inline Grid auto_spectrum_grid(double m, double omega, int max_points = 3072) {
  const double eps = std::sqrt(m * m - omega * omega);
  const double L = 20.0 / eps;
  int N = 0;
  for (int cand : {1024, 1536, 2048, 3072}) {
    if (cand > max_points) break;
    N = cand;
    if (2.0 * L / (N - 1) <= 0.1) break;
  }
  if (N == 0 || 2.0 * L / (N - 1) > 0.1)
    throw ConfigError(
        "auto grid: omega too close to m for the direct dense path; use the "
        "rescaled path");
  return Grid::uniform(L, N);
}

/// Profile-only grid (quadrature of the wave, no spectra): odd point count
/// for the Simpson rule.
inline Grid auto_profile_grid(double m, double omega) {
  const double eps = std::sqrt(m * m - omega * omega);
  return Grid::uniform(16.0 / eps, 4097);
}

struct ScanRow {
  double omega = 0.0;
  double eps = 0.0;
  double gamma = 0.0;
  double Q = 0.0;
  std::optional<double> lambda_unstable;
  std::optional<double> lambda_over_eps2;
  std::optional<double> mu0;
  std::string verdict;  // real-pair / no-real-pair / profile-only
  std::string status = "ok";
  double runtime_ms = 0.0;  // informational; kept out of the CSV
};

struct ScanOutput {
  std::vector<ScanRow> rows;
  std::vector<SpectrumReport> reports;  // one per omega when spectra were run
  std::optional<double> Lambda_ref;
};

inline std::string scan_csv(const std::vector<ScanRow>& rows) {
  std::string out =
      "omega,eps,gamma,Q,lambda_unstable,lambda_over_eps2,mu0,verdict,status\n";
  const auto opt = [](const std::optional<double>& v) {
    return v ? fmt17(*v) : std::string();
  };
  for (const auto& r : rows) {
    out += fmt17(r.omega) + "," + fmt17(r.eps) + "," + fmt17(r.gamma) + "," +
           fmt17(r.Q) + "," + opt(r.lambda_unstable) + "," +
           opt(r.lambda_over_eps2) + "," + opt(r.mu0) + "," + r.verdict + "," +
           r.status + "\n";
  }
  return out;
}

inline std::string spectrum_csv(const SpectrumReport& rep) {
  std::string out = "re_lambda,im_lambda,class,localization\n";
  for (const auto& e : rep.eigenvalues)
    out += fmt17(e.lambda.real()) + "," + fmt17(e.lambda.imag()) + "," +
           to_string(e.cls) + "," + fmt17(e.localization) + "\n";
  return out;
}

inline std::string profile_csv(const SolitaryWave& w,
                               const NonlinearityModel& model) {
  std::string out;
  out += "# k=" + std::to_string(model.k) + ", a=" + fmt17(model.a) +
         ", m=" + fmt17(model.m) + ", omega=" + fmt17(w.omega) +
         ", gamma=" + fmt17(w.gamma) + ", Q=" + fmt17(w.Q) + "\n";
  out += "x,v,u,X,Y\n";
  for (int j = 0; j < w.grid.points; ++j)
    out += fmt17(w.grid.nodes[j]) + "," + fmt17(w.v[j]) + "," + fmt17(w.u[j]) +
           "," + fmt17(w.X[j]) + "," + fmt17(w.Y[j]) + "\n";
  return out;
}

inline nlohmann::json spectrum_report_json(const SpectrumReport& rep,
                                           std::optional<double> wnorm = {}) {
  nlohmann::json j;
  j["omega"] = rep.omega;
  j["k"] = rep.k;
  j["N"] = rep.N;
  j["L"] = rep.L;
  j["eps"] = rep.eps_dirac;
  j["lambda_unstable"] =
      rep.lambda_unstable ? nlohmann::json(*rep.lambda_unstable)
                          : nlohmann::json(nullptr);
  j["Lambda_ref"] = rep.lambda_ref ? nlohmann::json(*rep.lambda_ref)
                                   : nlohmann::json(nullptr);
  j["mu0"] = rep.mu0 ? nlohmann::json(*rep.mu0) : nlohmann::json(nullptr);
  j["checks"] = {
      {"zero_pair_resid", rep.near_zero_radius},
      {"two_omega_resid", rep.two_omega_rel_err},
      {"symmetry_defect", rep.symmetry_defect},
      {"w_norm", wnorm ? nlohmann::json(*wnorm) : nlohmann::json(nullptr)}};
  return j;
}

/// Reference limit eigenvalue for a given k on the standard Lambda grid
/// (L = 48/k keeps h k <= 0.1 at N = 1024 while the potential still decays).
inline std::optional<double> reference_limit_eigenvalue(int k, int N = 1024) {
  const Grid ygrid = Grid::uniform(48.0 / k, N);
  return limit_eigenvalue(assemble_nls(k, ygrid));
}

/// Run the scan: one row per omega; failures are recorded in the row's
/// status and do not abort the scan. Rows come out sorted by omega.
inline ScanOutput run_scan(const ScanConfig& config) {
  config.validate();
  const auto omegas_sorted = [&] {
    auto ws = config.omegas();
    std::sort(ws.begin(), ws.end());
    return ws;
  }();
  const NonlinearityModel model = make_model(config.k, config.a, {}, config.m);

  ScanOutput out;
  out.rows.resize(omegas_sorted.size());
  out.reports.resize(omegas_sorted.size());
  if (config.check_spectrum && config.k >= 3)
    out.Lambda_ref = reference_limit_eigenvalue(config.k);

  std::atomic<size_t> next{0};
  const auto worker = [&]() {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= omegas_sorted.size()) return;
      const double omega = omegas_sorted[i];
      ScanRow& row = out.rows[i];
      row.omega = omega;
      const auto t0 = std::chrono::steady_clock::now();
      try {
        const Grid grid = config.grid_auto
                              ? (config.check_spectrum
                                     ? auto_spectrum_grid(config.m, omega)
                                     : auto_profile_grid(config.m, omega))
                              : Grid::uniform(config.L, config.N);
        const SolitaryWave wave = solve_profile(model, omega, grid);
        row.eps = wave.eps_dirac;
        row.gamma = wave.gamma;
        row.Q = wave.Q;
        row.verdict = "profile-only";
        if (config.check_spectrum) {
          const DiracBlocks blocks = assemble_dirac(wave, model, grid);
          SpectrumReport rep =
              dirac_spectrum(blocks, model, out.Lambda_ref);
          row.lambda_unstable = rep.lambda_unstable;
          if (rep.lambda_unstable)
            row.lambda_over_eps2 =
                *rep.lambda_unstable / (wave.eps_dirac * wave.eps_dirac);
          row.mu0 = rep.mu0;
          row.verdict = rep.lambda_unstable ? "real-pair" : "no-real-pair";
          if (config.check_rescaled && config.k >= 3 && out.Lambda_ref &&
              config.m == 1.0) {
            // compact companion wave: the 4N eigenproblem needs far fewer
            // nodes than the direct path
            const Grid small = Grid::uniform(15.0 / wave.eps_dirac, 640);
            const SolitaryWave ws = solve_profile(model, omega, small);
            const RescaledProblem rp =
                rescaled_problem(ws, model, *out.Lambda_ref);
            const auto re = unstable_eigenvalue_rescaled(rp, *out.Lambda_ref);
            row.mu0 = re.mu0;  // rescaled path reading, reliable as eps -> 0
          }
          out.reports[i] = std::move(rep);
        }
      } catch (const Error& e) {
        row.status = e.what();
      }
      row.runtime_ms = std::chrono::duration<double, std::milli>(
                           std::chrono::steady_clock::now() - t0)
                           .count();
    }
  };
  const int jobs = std::max(1, std::min<int>(config.jobs,
                                             (int)omegas_sorted.size()));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return out;
}

/// Write scan artifacts under config.out_dir: scan.csv plus one spectrum CSV
/// per omega when spectra were computed. Identical configs produce
/// byte-identical files.
inline void write_scan_output(const ScanConfig& config, const ScanOutput& out) {
  namespace fs = std::filesystem;
  fs::create_directories(config.out_dir);
  write_text_file(fs::path(config.out_dir) / "scan.csv", scan_csv(out.rows));
  for (size_t i = 0; i < out.rows.size(); ++i) {
    if (out.reports[i].N == 0) continue;
    char name[64];
    std::snprintf(name, sizeof(name), "spectrum_w%.6f.csv",
                  out.rows[i].omega);
    write_text_file(fs::path(config.out_dir) / name,
                    spectrum_csv(out.reports[i]));
  }
}

struct ChargeSlope {
  double slope = 0.0;
  double expected = 0.0;  // 1/k - 1/2
  std::vector<std::pair<double, double>> points;  // (log 2(m-omega), log Q)
};

/// Least-squares slope of log Q against log(2(m - omega)) over the scan's
/// frequencies; compares against the closed-form exponent 1/k - 1/2.
inline ChargeSlope charge_slope(const ScanConfig& config) {
  const auto ws = config.omegas();
  if (ws.size() < 4 || config.spacing != OmegaSpacing::geometric_in_gap)
    throw ConfigError(
        "charge_slope: need at least 4 points with geometric spacing");
  const NonlinearityModel model = make_model(config.k, config.a, {}, config.m);
  ChargeSlope cs;
  cs.expected = 1.0 / config.k - 0.5;
  for (double omega : ws) {
    const Grid grid = auto_profile_grid(config.m, omega);
    const SolitaryWave wave = solve_profile(model, omega, grid);
    cs.points.emplace_back(std::log(2.0 * (config.m - omega)),
                           std::log(wave.Q));
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto [x, y] : cs.points) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(cs.points.size());
  cs.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return cs;
}

struct ConvergenceRow {
  int N = 0;
  double L = 0.0;
  std::optional<double> lambda_unstable;
  double near_zero_radius = 0.0;
  double two_omega_rel_err = 1.0;
  std::string status = "ok";
};

struct ConvergenceStudy {
  std::vector<ConvergenceRow> rows;
  bool converged = false;  // lambda at N = 1024 -> 2048 differs by < 1e-3 rel
  double lambda_refine_drift = 1.0;  // N = 1024 -> 2048 at fixed L
  double lambda_domain_drift = 1.0;  // L -> 1.5 L at fixed spacing
  double free_gap_edge_rel_err = 1.0;
};

/// Resolution study at fixed (k, omega): N in {512, 1024, 2048} at the policy
/// half-width L, the same spacings on the 1.5 L domain (exponential
/// truncation check), plus the exactly-solvable free reference (gap edge at
/// m - omega).
inline ConvergenceStudy convergence_study(const ScanConfig& config) {
  const double omega = config.omegas().front();
  const NonlinearityModel model = make_model(config.k, config.a, {}, config.m);
  const double eps = std::sqrt(config.m * config.m - omega * omega);
  const double L0 = config.grid_auto ? 20.0 / eps : config.L;
  ConvergenceStudy study;
  const auto run_one = [&](int N, double L) {
    ConvergenceRow row;
    row.N = N;
    row.L = L;
    try {
      const Grid grid = Grid::uniform(L, N);
      const SolitaryWave wave = solve_profile(model, omega, grid);
      const SpectrumReport rep =
          dirac_spectrum(assemble_dirac(wave, model, grid), model);
      row.lambda_unstable = rep.lambda_unstable;
      row.near_zero_radius = rep.near_zero_radius;
      row.two_omega_rel_err = rep.two_omega_rel_err;
    } catch (const Error& e) {
      row.status = e.what();
    }
    study.rows.push_back(row);
    return study.rows.back();
  };
  for (const int N : {512, 1024, 2048}) run_one(N, L0);
  // wider domain at the spacings of the first two rows
  for (const int N : {768, 1536}) run_one(N, 1.5 * L0);

  const auto& at_1024 = study.rows[1];
  const auto& at_2048 = study.rows[2];
  if (at_1024.lambda_unstable && at_2048.lambda_unstable) {
    study.lambda_refine_drift =
        std::abs(*at_2048.lambda_unstable - *at_1024.lambda_unstable) /
        *at_2048.lambda_unstable;
    study.converged = study.lambda_refine_drift < 1e-3;
  }
  const auto& wide_1536 = study.rows[4];  // same spacing as N = 1024 at L0
  if (at_1024.lambda_unstable && wide_1536.lambda_unstable)
    study.lambda_domain_drift =
        std::abs(*wide_1536.lambda_unstable - *at_1024.lambda_unstable) /
        *at_1024.lambda_unstable;

  // free reference: gap edge within the smallest |lambda| of the free run
  {
    const Grid grid = Grid::uniform(L0, 1024);
    const SolitaryWave free = zero_wave(model, omega, grid);
    const auto rep = dirac_spectrum(assemble_dirac(free, model, grid), model);
    double edge = 1e300;
    for (const auto& e : rep.eigenvalues)
      if (std::abs(e.lambda) > 1e-8) edge = std::min(edge, std::abs(e.lambda));
    study.free_gap_edge_rel_err =
        std::abs(edge - (config.m - omega)) / (config.m - omega);
  }
  return study;
}

}  // namespace soler
