// levylab: command-line front end for the experiments.
#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>

#include "levylab/error.hpp"
#include "levylab/experiment.hpp"
#include "levylab/fixed_point.hpp"
#include "levylab/io.hpp"
#include "levylab/kernel_spectrum.hpp"
#include "levylab/matrix_model.hpp"
#include "levylab/population.hpp"

using namespace levylab;

namespace {

// Options shared by every subcommand. Flags that were given override the config file.
struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<double> alpha;
  std::optional<std::string> out;

  void attach(CLI::App* app) {
    app->add_option("--config", config, "JSON experiment config")->check(CLI::ExistingFile);
    app->add_option("--seed", seed, "seed (master seed for sweeps, sample seed otherwise)");
    app->add_option("--alpha", alpha, "stability index in (0,2)");
    app->add_option("--out", out, "output directory");
  }

  ExperimentConfig resolve() const {
    ExperimentConfig cfg = config.empty() ? ExperimentConfig{} : load_config(config);
    if (alpha) cfg.alpha = *alpha;
    if (out) cfg.output_dir = *out;
    if (seed) {
      cfg.master_seed = *seed;
      cfg.seeds.clear();
    }
    return cfg;
  }
};

std::string join(const std::string& dir, const std::string& file) {
  std::filesystem::create_directories(dir);
  return (std::filesystem::path(dir) / file).string();
}

void print_aggregates(const RunRecord& rec) {
  std::printf("%8s %8s %12s %12s %12s %12s\n", "n", "E", "frac", "Q_mean", "Q_se", "mu_star");
  for (const auto& a : rec.aggregates) {
    std::printf("%8d %8.3f %12.6f %12.6f %12.6f %12.6f\n", a.n, a.energy, a.count_fraction.mean, a.Q.mean, a.Q.se,
                a.mu_star);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heavy-tailed random matrices: spectra, localization and fixed-point solvers"};
  app.require_subcommand(1);

  // sample-spectrum
  Common c_spec;
  int spec_n = 0;
  auto* spec = app.add_subcommand("sample-spectrum", "eigenvalues of one Levy matrix per (n, seed)");
  c_spec.attach(spec);
  spec->add_option("--n", spec_n, "matrix size (default: n_list of the config)");

  // localization-sweep / local-law
  Common c_sweep, c_law;
  std::vector<int> sweep_n, law_n;
  std::vector<double> sweep_e, law_e;
  auto* sweep = app.add_subcommand("localization-sweep", "Q_I, Pi_I across (n, seed, E)");
  c_sweep.attach(sweep);
  sweep->add_option("--n", sweep_n, "matrix sizes");
  sweep->add_option("--energies", sweep_e, "interval centers");
  auto* law = app.add_subcommand("local-law", "|Lambda_I|/n against mu_star(I)");
  c_law.attach(law);
  law->add_option("--n", law_n, "matrix sizes");
  law->add_option("--energies", law_e, "interval centers");

  // solve-fixed-point
  Common c_fp;
  double fp_re = 0.0, fp_im = 0.2;
  int fp_grid = 129;
  auto* fp = app.add_subcommand("solve-fixed-point", "solve gamma = G_z(gamma) and write a checkpoint");
  c_fp.attach(fp);
  fp->add_option("--z-re", fp_re, "Re z");
  fp->add_option("--z-im", fp_im, "Im z");
  fp->add_option("--grid", fp_grid, "angular grid size");

  // density
  Common c_den;
  std::vector<double> den_e;
  bool den_mass = false;
  auto* den = app.add_subcommand("density", "spectral density of mu_star by Stieltjes inversion");
  c_den.attach(den);
  den->add_option("--energies", den_e, "energies")->required();
  den->add_flag("--mass", den_mass, "also report the total mass");

  // population-dynamics
  Common c_pop;
  double pop_re = 0.0, pop_im = 0.2;
  PopulationConfig pcfg;
  int pop_reps = 8, pop_grid = 33;
  auto* pop = app.add_subcommand("population-dynamics", "population dynamics for the resolvent RDE");
  c_pop.attach(pop);
  pop->add_option("--z-re", pop_re, "Re z");
  pop->add_option("--z-im", pop_im, "Im z");
  pop->add_option("--pool", pcfg.pool_size, "pool size");
  pop->add_option("--sweeps", pcfg.sweeps, "equilibration sweeps");
  pop->add_option("--K", pcfg.K, "Poisson truncation");
  pop->add_option("--replicates", pop_reps, "independent pools");
  pop->add_option("--grid", pop_grid, "angular grid size for gamma");

  // kernel-scan
  Common c_ker;
  double ker_lo = 0.55, ker_hi = 1.95;
  int ker_steps = 15, ker_nodes = 64;
  double ker_kappa = 0.5;
  auto* ker = app.add_subcommand("kernel-scan", "det(I - H^m) along a real alpha grid");
  c_ker.attach(ker);
  ker->add_option("--from", ker_lo, "first alpha");
  ker->add_option("--to", ker_hi, "last alpha");
  ker->add_option("--steps", ker_steps, "grid points");
  ker->add_option("--nodes", ker_nodes, "Nystrom nodes (even)");
  ker->add_option("--kappa", ker_kappa, "weight exponent in [0,1)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*spec) {
      ExperimentConfig cfg = c_spec.resolve();
      const std::vector<int> sizes = spec_n > 0 ? std::vector<int>{spec_n} : cfg.n_list;
      const std::vector<std::uint64_t> seeds = c_spec.seed ? std::vector<std::uint64_t>{*c_spec.seed} : resolve_seeds(cfg);
      for (int n : sizes) {
        for (auto s : seeds) {
          const auto path = join(cfg.output_dir, cfg.name + "_spectrum_n" + std::to_string(n) + "_s" + std::to_string(s) + ".csv");
          write_spectrum_csv(eigendecompose(build_levy_matrix(n, cfg.alpha, s)), path);
          std::cout << path << '\n';
        }
      }
      return 0;
    }
    if (*sweep || *law) {
      const bool is_law = static_cast<bool>(*law);
      ExperimentConfig cfg = (is_law ? c_law : c_sweep).resolve();
      const auto& ns = is_law ? law_n : sweep_n;
      const auto& es = is_law ? law_e : sweep_e;
      if (!ns.empty()) cfg.n_list = ns;
      if (!es.empty()) cfg.energies = es;
      const RunRecord rec = is_law ? run_local_law(cfg) : run_transition_sweep(cfg);
      for (const auto& p : emit(rec, cfg.output_dir)) std::cout << p << '\n';
      print_aggregates(rec);
      return exit_code(rec);
    }
    if (*fp) {
      ExperimentConfig cfg = c_fp.resolve();
      SolverConfig scfg = cfg.density.solver;
      scfg.grid_size = fp_grid;
      const auto sol = solve_gamma_star({fp_re, fp_im}, cfg.alpha, scfg);
      char name[128];
      std::snprintf(name, sizeof name, "%s_gamma_a%.4g_z%.4g%+.4gi.json", cfg.name.c_str(), cfg.alpha, fp_re, fp_im);
      const auto path = join(cfg.output_dir, name);
      save_checkpoint(sol, scfg.quadrature, path);
      std::printf("%s\nresidual %.3e after %d iterations\n", path.c_str(), sol.residual, sol.iterations);
      return 0;
    }
    if (*den) {
      ExperimentConfig cfg = c_den.resolve();
      const auto pts = spectral_density(den_e, cfg.alpha, cfg.density);
      const auto path = join(cfg.output_dir, cfg.name + "_density.csv");
      write_density_csv(pts, path);
      std::cout << path << '\n';
      for (const auto& p : pts) std::printf("E=%9.4f  f=%.6e  err=%.1e\n", p.E, p.f_star, p.extrapolation_error);
      if (den_mass) std::printf("mass %.6f\n", density_mass(cfg.alpha, cfg.density).mass);
      return 0;
    }
    if (*pop) {
      ExperimentConfig cfg = c_pop.resolve();
      pcfg.seed = c_pop.seed.value_or(cfg.master_seed);
      const cplx z(pop_re, pop_im);
      const auto pools = population_replicates(z, cfg.alpha, pop_reps, pcfg);
      const auto g = population_gamma(pools, angular_grid(pop_grid));
      const auto path = join(cfg.output_dir, cfg.name + "_population_gamma.csv");
      std::FILE* f = std::fopen(path.c_str(), "w");
      if (!f) throw Error("cannot open " + path);
      std::fprintf(f, "theta,gamma_re,gamma_im\n");
      for (std::size_t j = 0; j < g.size(); ++j) std::fprintf(f, "%.17g,%.17g,%.17g\n", g.theta(j), g.value(j).real(), g.value(j).imag());
      std::fclose(f);
      std::cout << path << '\n';
      for (double p : {1.0, 2.0}) {
        const auto e = replicate_estimate(pools, [p](cplx r) { return std::pow(std::abs(r), p); });
        std::printf("E|R|^%g = %.6f +- %.6f\n", p, e.mean, e.se);
      }
      return 0;
    }
    if (*ker) {
      ExperimentConfig cfg = c_ker.resolve();
      std::vector<double> grid;
      for (int i = 0; i < ker_steps; ++i) grid.push_back(ker_steps == 1 ? ker_lo : ker_lo + (ker_hi - ker_lo) * i / (ker_steps - 1));
      const auto scan = alpha_scan(grid, ker_nodes, ker_kappa);
      const auto path = join(cfg.output_dir, cfg.name + "_kernel_scan.csv");
      write_scan_csv(scan, path);
      std::cout << path << '\n';
      for (const auto& p : scan) {
        if (!p.error.empty()) {
          std::printf("alpha=%.4f  skipped: %s\n", p.result.alpha.real(), p.error.c_str());
        } else {
          std::printf("alpha=%.4f  m=%d  |det|=%.4e  delta=%.2e%s\n", p.result.alpha.real(), p.result.m,
                      std::abs(p.result.det_value), p.result.refinement_delta, p.candidate ? "  (local min)" : "");
        }
      }
      return 0;
    }
  } catch (const levylab::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
