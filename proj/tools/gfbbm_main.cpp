// Command-line front end: solve / classify / evolve / spectrum / sweep.
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gfbbm/evolution.hpp"
#include "gfbbm/io.hpp"
#include "gfbbm/solitary.hpp"
#include "gfbbm/stability.hpp"

namespace {

int exit_code_for(const gfbbm::Error& err) {
  const std::string kind = err.kind();
  if (kind == "config" || kind == "dimension") return 2;
  if (kind == "hamiltonian-undefined") return 3;
  if (kind == "existence") return 4;
  if (kind == "non-convergence" || kind == "divergence") return 5;
  if (kind == "blow-up") return 6;
  if (kind == "resource") return 7;
  if (kind == "numeric" || kind == "symmetry") return 8;
  if (kind == "io") return 9;
  return 1;
}

struct GridArgs {
  double half_length = 512.0;
  int n_points = 1 << 13;

  void attach(CLI::App* cmd) {
    cmd->add_option("-L,--half-length", half_length,
                    "half of the periodic domain [-L, L)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("-N,--n-points", n_points,
                    "number of collocation points (power of two)");
  }
};

struct ParamArgs {
  double alpha = 2.0;
  int p = 1;
  double c = 1.5;

  void attach(CLI::App* cmd) {
    cmd->add_option("-a,--alpha", alpha, "fractional order, in (0, 2]")
        ->required();
    cmd->add_option("-p", p, "nonlinearity order (positive integer)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("-c", c, "wave speed")->required();
  }

  gfbbm::ModelParams params() const { return {alpha, p, c}; }
};

gfbbm::PetviashviliSettings solver_settings(double tolerance, int max_iter) {
  gfbbm::PetviashviliSettings s;
  s.tolerance = tolerance;
  s.max_iterations = max_iter;
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Solitary waves of the generalized fractional BBM equation: "
               "Petviashvili solver, stability classification, spectra and "
               "pseudo-spectral time evolution"};
  app.require_subcommand(1);
  // flags override config-file keys, which override the desk-scale defaults
  app.set_config("--config", "", "read options from an INI/TOML file");

  // ---- solve ----
  auto* solve = app.add_subcommand(
      "solve", "construct a solitary wave by Petviashvili iteration");
  ParamArgs solve_params;
  solve_params.attach(solve);
  GridArgs solve_grid;
  solve_grid.attach(solve);
  double solve_tol = 1e-12;
  int solve_maxit = 500;
  std::string solve_out = "wave";
  solve->add_option("--tolerance", solve_tol, "iteration tolerance")
      ->check(CLI::PositiveNumber);
  solve->add_option("--max-iterations", solve_maxit, "iteration cap")
      ->check(CLI::PositiveNumber);
  solve->add_option("-o,--output", solve_out,
                    "output basename (writes <name>.csv and <name>.json)");

  // ---- classify ----
  auto* classify_cmd = app.add_subcommand(
      "classify", "analytic stability verdicts on an (alpha, c) lattice, or "
                  "for a single point");
  double cl_alpha_min = 0.35, cl_alpha_max = 2.0;
  double cl_c_min = 0.05, cl_c_max = 1.5;
  double cl_resolution = 0.01;
  int cl_p = 1;
  std::string cl_out;
  bool cl_point = false;
  double cl_alpha = 0.6, cl_c = 1.1;
  classify_cmd->add_option("--alpha-min", cl_alpha_min, "lattice alpha lower bound");
  classify_cmd->add_option("--alpha-max", cl_alpha_max, "lattice alpha upper bound");
  classify_cmd->add_option("--c-min", cl_c_min, "lattice c lower bound");
  classify_cmd->add_option("--c-max", cl_c_max, "lattice c upper bound");
  classify_cmd->add_option("--resolution", cl_resolution, "lattice spacing")
      ->check(CLI::PositiveNumber);
  classify_cmd->add_option("-p", cl_p, "nonlinearity order")
      ->check(CLI::PositiveNumber);
  classify_cmd->add_option("-o,--output", cl_out, "region-map CSV path");
  auto* cl_a = classify_cmd->add_option("-a,--alpha", cl_alpha,
                                        "single-point alpha");
  auto* cl_c_opt = classify_cmd->add_option("-c", cl_c, "single-point c");
  cl_a->needs(cl_c_opt);
  classify_cmd->callback([&]() { cl_point = cl_a->count() > 0; });

  // ---- evolve ----
  auto* evolve = app.add_subcommand(
      "evolve", "run the perturbation experiment u0 = gamma * Q_c");
  ParamArgs ev_params;
  ev_params.attach(evolve);
  GridArgs ev_grid;
  ev_grid.attach(evolve);
  double ev_gamma = 1.1, ev_dt = 5e-4, ev_tfinal = 50.0, ev_sample = 0.5;
  double ev_tol = 1e-12;
  std::string ev_out = "trace.csv";
  std::string ev_load, ev_snapshots;
  evolve->add_option("--gamma", ev_gamma, "perturbation multiplier")
      ->check(CLI::PositiveNumber);
  evolve->add_option("--dt", ev_dt, "time step")->check(CLI::PositiveNumber);
  evolve->add_option("--t-final", ev_tfinal, "final time")
      ->check(CLI::PositiveNumber);
  evolve->add_option("--sample-interval", ev_sample, "trace sampling interval")
      ->check(CLI::PositiveNumber);
  evolve->add_option("--tolerance", ev_tol, "solver tolerance")
      ->check(CLI::PositiveNumber);
  evolve->add_option("-o,--output", ev_out, "trace CSV path");
  evolve->add_option("--load", ev_load,
                     "load the base wave from <name>.csv/<name>.json instead "
                     "of solving");
  evolve->add_option("--snapshots", ev_snapshots,
                     "also write full-field snapshots (flat binary)");

  // ---- spectrum ----
  auto* spectrum = app.add_subcommand(
      "spectrum", "discretized spectra of the linearized operator plus the "
                  "analytic verdict");
  ParamArgs sp_params;
  sp_params.attach(spectrum);
  GridArgs sp_grid;
  sp_grid.half_length = 64.0;
  sp_grid.n_points = 1 << 10;
  sp_grid.attach(spectrum);
  double sp_tol = 1e-12;
  bool sp_growing = false;
  std::string sp_out = "spectrum.json";
  spectrum->add_option("--tolerance", sp_tol, "solver tolerance")
      ->check(CLI::PositiveNumber);
  spectrum->add_flag("--growing-modes", sp_growing,
                     "also compute the spectrum of J L_c");
  spectrum->add_option("-o,--output", sp_out, "report JSON path");

  // ---- sweep ----
  auto* sweep = app.add_subcommand(
      "sweep", "solve waves over an (alpha, c) lattice on a worker pool");
  double sw_alpha_min = 0.8, sw_alpha_max = 2.0, sw_alpha_step = 0.2;
  double sw_c_min = 1.1, sw_c_max = 2.0, sw_c_step = 0.1;
  int sw_p = 1, sw_threads = 0;
  double sw_tol = 1e-12;
  GridArgs sw_grid;
  sw_grid.half_length = 64.0;
  sw_grid.n_points = 1 << 10;
  sw_grid.attach(sweep);
  std::string sw_out = "sweep.csv";
  sweep->add_option("--alpha-min", sw_alpha_min, "alpha lower bound");
  sweep->add_option("--alpha-max", sw_alpha_max, "alpha upper bound");
  sweep->add_option("--alpha-step", sw_alpha_step, "alpha increment")
      ->check(CLI::PositiveNumber);
  sweep->add_option("--c-min", sw_c_min, "c lower bound");
  sweep->add_option("--c-max", sw_c_max, "c upper bound");
  sweep->add_option("--c-step", sw_c_step, "c increment")
      ->check(CLI::PositiveNumber);
  sweep->add_option("-p", sw_p, "nonlinearity order")
      ->check(CLI::PositiveNumber);
  sweep->add_option("--threads", sw_threads, "worker count (0 = hardware)");
  sweep->add_option("--tolerance", sw_tol, "solver tolerance")
      ->check(CLI::PositiveNumber);
  sweep->add_option("-o,--output", sw_out, "sweep CSV path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) {
      const gfbbm::SpectralGrid grid(solve_grid.half_length,
                                     solve_grid.n_points);
      const gfbbm::SolitaryWave wave = gfbbm::solve_petviashvili(
          solve_params.params(), grid, solver_settings(solve_tol, solve_maxit));
      gfbbm::write_profile_csv(solve_out + ".csv", wave);
      gfbbm::write_wave_sidecar(solve_out + ".json", wave);
      std::printf("residual %s after %d iterations -> %s.csv\n",
                  gfbbm::format_double(wave.residual).c_str(), wave.iterations,
                  solve_out.c_str());
      if (wave.domain_warning)
        std::fprintf(stderr,
                     "warning [domain]: boundary value above 1e-8 of the "
                     "peak; consider a larger half-length\n");
      if (wave.aliasing_warning)
        std::fprintf(stderr,
                     "warning [aliasing]: top third of the spectrum of "
                     "Q^{p+1} above 1e-12; consider more points\n");
    } else if (classify_cmd->parsed()) {
      if (cl_point) {
        const gfbbm::StabilityReport report =
            gfbbm::classify({cl_alpha, cl_p, cl_c});
        std::printf("%s\n", gfbbm::to_string(report.verdict));
      } else {
        const auto points = gfbbm::region_scan(
            cl_alpha_min, cl_alpha_max, cl_c_min, cl_c_max, cl_resolution,
            cl_p);
        if (cl_out.empty())
          throw gfbbm::ConfigError(
              "classify needs --output for a lattice scan (or -a/-c for a "
              "single point)");
        gfbbm::write_region_csv(cl_out, points);
        std::printf("%zu lattice points -> %s\n", points.size(),
                    cl_out.c_str());
      }
    } else if (evolve->parsed()) {
      const gfbbm::SpectralGrid grid(ev_grid.half_length, ev_grid.n_points);
      gfbbm::SolitaryWave wave =
          ev_load.empty()
              ? gfbbm::solve_petviashvili(ev_params.params(), grid,
                                          solver_settings(ev_tol, 500))
              : gfbbm::read_profile(ev_load + ".csv", ev_load + ".json");
      gfbbm::ExperimentOptions options;
      options.sample_interval = ev_sample;
      options.record_snapshots = !ev_snapshots.empty();
      const gfbbm::EvolutionTrace trace = gfbbm::run_experiment(
          {ev_gamma}, wave, ev_dt, ev_tfinal, options);
      gfbbm::write_trace_csv(ev_out, trace);
      if (!ev_snapshots.empty())
        gfbbm::write_snapshots(ev_snapshots, trace, wave.grid);
      const double drift = std::abs(trace.invariant_series.back().momentum -
                                    trace.invariant_series.front().momentum);
      std::printf("final |F(t)-F(0)| = %s -> %s\n",
                  gfbbm::format_double(drift).c_str(), ev_out.c_str());
      if (trace.aliasing_warning)
        std::fprintf(stderr,
                     "warning [aliasing]: top third of the spectrum of "
                     "u^{p+1} above 1e-12 at some sample time\n");
    } else if (spectrum->parsed()) {
      const gfbbm::SpectralGrid grid(sp_grid.half_length, sp_grid.n_points);
      const gfbbm::SpectrumReport report = gfbbm::spectral_stability_report(
          sp_params.params(), grid, solver_settings(sp_tol, 500), sp_growing);
      gfbbm::write_spectrum_report_json(sp_out, report);
      std::printf(
          "n_negative=%d n_I=%d index=%d verdict=%s agreement=%s -> %s\n",
          report.report.n_negative, report.report.n_I, report.index,
          gfbbm::to_string(report.report.verdict),
          report.verdict_agreement ? "true" : "false", sp_out.c_str());
    } else if (sweep->parsed()) {
      const gfbbm::SpectralGrid grid(sw_grid.half_length, sw_grid.n_points);
      std::vector<double> alphas, cs;
      for (double a = sw_alpha_min; a <= sw_alpha_max + 1e-12;
           a += sw_alpha_step)
        alphas.push_back(a);
      for (double c = sw_c_min; c <= sw_c_max + 1e-12; c += sw_c_step)
        cs.push_back(c);
      const auto points = gfbbm::sweep_waves(
          alphas, cs, sw_p, grid, solver_settings(sw_tol, 500), sw_threads);
      gfbbm::write_sweep_csv(sw_out, points);
      std::printf("%zu sweep points -> %s\n", points.size(), sw_out.c_str());
    }
  } catch (const gfbbm::Error& err) {
    std::fprintf(stderr, "error [%s]: %s\n", err.kind(), err.what());
    return exit_code_for(err);
  } catch (const std::exception& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return 1;
  }
  return 0;
}
