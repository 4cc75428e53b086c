// Batch front-end for the solitary-wave instability laboratory:
// profile construction, NLS-limit reports, Dirac spectra, omega scans,
// convergence studies and the one-shot reproduction suite.
#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <iostream>

#include "soler/acceptance.hpp"
#include "soler/blas_threads.hpp"
#include "soler/scan.hpp"

namespace fs = std::filesystem;
using namespace soler;

namespace {

int env_job_cap() {
  if (const char* s = std::getenv("SOLERLAB_JOBS")) {
    const int n = std::atoi(s);
    if (n >= 1) return n;
  }
  return 1 << 20;
}

Grid resolve_grid(double m, double omega, int N, double L, bool spectral) {
  if (N > 0 && L > 0.0) return Grid::uniform(L, N);
  return spectral ? auto_spectrum_grid(m, omega) : auto_profile_grid(m, omega);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"soler-lab: spectra of the 1D Soler-model linearization"};
  app.require_subcommand(1);

  int k = 3, N = 0, jobs = 1;
  double a = 1.0, m = 1.0, omega = 0.9, L = 0.0;
  std::string out = "out";

  const auto add_common = [&](CLI::App* sub, bool with_omega = true) {
    sub->add_option("--k", k, "nonlinearity exponent");
    sub->add_option("--a", a, "leading coefficient");
    sub->add_option("--m", m, "mass");
    if (with_omega) sub->add_option("--omega", omega, "wave frequency");
    sub->add_option("--N", N, "grid points (0 = auto)");
    sub->add_option("--L", L, "half-width (0 = auto)");
    sub->add_option("--out", out, "output directory");
    sub->add_option("--jobs", jobs, "worker count");
  };

  auto* cmd_profile = app.add_subcommand("profile", "solve one solitary wave");
  add_common(cmd_profile);

  auto* cmd_nls = app.add_subcommand(
      "nls", "NLS-limit report: kernel residuals, VK integral, Lambda");
  add_common(cmd_nls, false);

  auto* cmd_spectrum =
      app.add_subcommand("spectrum", "Dirac linearization spectrum at omega");
  add_common(cmd_spectrum);
  bool no_lambda_ref = false;
  cmd_spectrum->add_flag("--no-lambda-ref", no_lambda_ref,
                         "skip the NLS-limit reference eigenvalue");

  auto* cmd_scan = app.add_subcommand("scan", "omega scan");
  std::string config_path;
  double omega_min = 0.9, omega_max = 0.98;
  int omega_count = 3;
  std::string spacing = "linear";
  bool no_spectrum = false, no_rescaled = false;
  cmd_scan->add_option("--config", config_path, "key=value config file");
  add_common(cmd_scan, false);
  cmd_scan->add_option("--omega-min", omega_min, "lowest frequency");
  cmd_scan->add_option("--omega-max", omega_max, "highest frequency");
  cmd_scan->add_option("--count", omega_count, "number of frequencies");
  cmd_scan->add_option("--spacing", spacing, "linear | geometric");
  cmd_scan->add_flag("--no-spectrum", no_spectrum, "profiles and charges only");
  cmd_scan->add_flag("--no-rescaled", no_rescaled, "skip the rescaled check");

  auto* cmd_converge =
      app.add_subcommand("converge", "resolution study at one (k, omega)");
  add_common(cmd_converge);

  auto* cmd_repro = app.add_subcommand(
      "reproduce", "run the full acceptance suite and emit summary data");
  cmd_repro->add_option("--out", out, "output directory");
  cmd_repro->add_option("--jobs", jobs, "worker count");

  CLI11_PARSE(app, argc, argv);
  jobs = std::min(jobs, env_job_cap());
  if (jobs > 1) set_blas_threads(1);

  try {
    if (*cmd_profile) {
      const NonlinearityModel model = make_model(k, a, {}, m);
      const Grid grid = resolve_grid(m, omega, N, L, false);
      const SolitaryWave w = solve_profile(model, omega, grid);
      fs::create_directories(out);
      write_text_file(fs::path(out) / "profile.csv", profile_csv(w, model));
      std::cout << "omega=" << w.omega << " gamma=" << w.gamma << " Q=" << w.Q
                << " eps=" << w.eps_dirac << " residuals=(" << w.residual_u
                << ", " << w.residual_v << ")\n"
                << "wrote " << (fs::path(out) / "profile.csv").string() << "\n";
    } else if (*cmd_nls) {
      const Grid grid =
          (N > 0 && L > 0.0) ? Grid::uniform(L, N) : Grid::uniform(48.0 / k, 2048);
      const NlsOperators ops = assemble_nls(k, grid);
      const KernelResiduals res = kernel_residuals(ops);
      const VkReport vk = vk_integral(ops);
      const auto Lambda = limit_eigenvalue(ops);
      nlohmann::json j;
      j["k"] = k;
      j["N"] = grid.points;
      j["L"] = grid.half_width;
      j["r1"] = res.r1;
      j["r2"] = res.r2;
      j["r3"] = res.r3;
      j["f0_numeric"] = vk.f0_numeric;
      j["f0_closed"] = vk.f0_closed;
      j["Lambda"] = Lambda ? nlohmann::json(*Lambda) : nlohmann::json(nullptr);
      j["verdict"] = to_string(vk.verdict);
      fs::create_directories(out);
      write_text_file(fs::path(out) / "nls_report.json", j.dump(2) + "\n");
      std::cout << j.dump(2) << "\n";
    } else if (*cmd_spectrum) {
      const NonlinearityModel model = make_model(k, a, {}, m);
      const Grid grid = resolve_grid(m, omega, N, L, true);
      const SolitaryWave w = solve_profile(model, omega, grid);
      std::optional<double> Lref;
      if (!no_lambda_ref && k >= 3) Lref = reference_limit_eigenvalue(k);
      ClassifyTolerances tols;
      tols.free_noise_floor = calibrate_free_floor(model, omega, grid);
      const SpectrumReport rep =
          dirac_spectrum(assemble_dirac(w, model, grid), model, Lref, tols);
      std::optional<double> wn;
      if (m == 1.0) wn = w_norm(w, model);
      fs::create_directories(out);
      write_text_file(fs::path(out) / "spectrum.csv", spectrum_csv(rep));
      write_text_file(fs::path(out) / "spectrum_report.json",
                      spectrum_report_json(rep, wn).dump(2) + "\n");
      std::cout << "N=" << rep.N << " L=" << rep.L
                << " real-unstable pairs=" << rep.real_unstable_pairs;
      if (rep.lambda_unstable)
        std::cout << " lambda=" << *rep.lambda_unstable
                  << " lambda/eps^2=" << *rep.lambda_unstable /
                                             (rep.eps_dirac * rep.eps_dirac);
      std::cout << " 2wi-rel-err=" << rep.two_omega_rel_err
                << " tol0=" << rep.tol0 << "\n";
    } else if (*cmd_scan) {
      ScanConfig cfg;
      if (!config_path.empty())
        cfg = ScanConfig::from_kv(KeyValueFile::parse_file(config_path));
      // command-line overrides
      if (cmd_scan->count("--k")) cfg.k = k;
      if (cmd_scan->count("--a")) cfg.a = a;
      if (cmd_scan->count("--m")) cfg.m = m;
      if (cmd_scan->count("--omega-min")) cfg.omega_min = omega_min;
      if (cmd_scan->count("--omega-max")) cfg.omega_max = omega_max;
      if (cmd_scan->count("--count")) cfg.omega_count = omega_count;
      if (cmd_scan->count("--spacing"))
        cfg.spacing = spacing == "geometric" ? OmegaSpacing::geometric_in_gap
                                             : OmegaSpacing::linear;
      if (cmd_scan->count("--N")) {
        cfg.N = N;
        cfg.grid_auto = false;
      }
      if (cmd_scan->count("--L")) {
        cfg.L = L;
        cfg.grid_auto = false;
      }
      if (cmd_scan->count("--out")) cfg.out_dir = out;
      if (cmd_scan->count("--jobs")) cfg.jobs = jobs;
      cfg.jobs = std::min(cfg.jobs, env_job_cap());
      if (cfg.jobs > 1) set_blas_threads(1);
      if (no_spectrum) cfg.check_spectrum = false;
      if (no_rescaled) cfg.check_rescaled = false;
      const ScanOutput so = run_scan(cfg);
      write_scan_output(cfg, so);
      write_text_file(fs::path(cfg.out_dir) / "config.resolved",
                      cfg.to_kv().serialize());
      int failures = 0;
      for (const auto& row : so.rows) {
        if (row.status != "ok") ++failures;
        std::cerr << "omega=" << row.omega << " status=" << row.status
                  << " runtime_ms=" << row.runtime_ms << "\n";
      }
      std::cout << "wrote " << (fs::path(cfg.out_dir) / "scan.csv").string()
                << " (" << so.rows.size() << " rows, " << failures
                << " failures)\n";
    } else if (*cmd_converge) {
      ScanConfig cfg;
      cfg.k = k;
      cfg.a = a;
      cfg.m = m;
      cfg.omega_list = {omega};
      if (N > 0 && L > 0.0) {
        cfg.grid_auto = false;
        cfg.N = N;
        cfg.L = L;
      }
      const ConvergenceStudy st = convergence_study(cfg);
      std::string csv = "N,L,lambda_unstable,near_zero_radius,two_omega_rel_err,status\n";
      for (const auto& row : st.rows) {
        csv += std::to_string(row.N) + "," + fmt17(row.L) + "," +
               (row.lambda_unstable ? fmt17(*row.lambda_unstable) : "") + "," +
               fmt17(row.near_zero_radius) + "," +
               fmt17(row.two_omega_rel_err) + "," + row.status + "\n";
        std::cout << "N=" << row.N << " L=" << row.L << " lambda="
                  << (row.lambda_unstable ? fmt17(*row.lambda_unstable)
                                          : std::string("-"))
                  << " cluster=" << row.near_zero_radius << "\n";
      }
      fs::create_directories(out);
      write_text_file(fs::path(out) / "convergence.csv", csv);
      std::cout << "converged=" << (st.converged ? "yes" : "no")
                << " refine-drift=" << st.lambda_refine_drift
                << " domain-drift=" << st.lambda_domain_drift
                << " free-gap-edge-rel-err=" << st.free_gap_edge_rel_err
                << "\n";
    } else if (*cmd_repro) {
      std::vector<CriterionResult> results;
      const bool ok = reproduce_paper(out, jobs, &results, &std::cout);
      std::cout << (ok ? "ALL CRITERIA PASSED\n" : "CRITERIA FAILED\n");
      return ok ? 0 : 1;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
