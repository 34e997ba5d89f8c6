// sparselv: command-line driver for the sparse Lotka-Volterra experiments.
//
// Exit codes: 0 success, 2 invalid configuration, 3 numerical failure.

#include <chrono>
#include <fstream>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sparselv/config.hpp"
#include "sparselv/errors.hpp"
#include "sparselv/experiments.hpp"
#include "sparselv/graph_patterns.hpp"
#include "sparselv/reports.hpp"
#include "sparselv/version.hpp"

namespace fs = std::filesystem;
using namespace sparselv;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct GlobalFlags {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> threads;
  std::string out;
  std::string format = "csv";
  std::string config;
};

// Flags shared by the experiment subcommands; unset ones keep the config value.
struct ModelFlags {
  std::optional<std::size_t> n, d, trials;
  std::optional<double> beta;
  std::optional<std::string> model;
  std::optional<bool> fix_pattern;

  void attach(CLI::App* app) {
    app->add_option("-n,--n", n, "number of species");
    app->add_option("-d,--d", d, "degree");
    app->add_option("--beta", beta, "d/n ratio for the proportional model");
    app->add_option("--model", model,
                    "block_permutation|proportional|general_regular|full");
    app->add_option("--trials", trials, "trials per grid point");
    app->add_option("--fix-pattern", fix_pattern,
                    "reuse one adjacency pattern for all trials");
  }

  void apply(SweepConfig& cfg) const {
    if (n) cfg.n = *n;
    if (d) cfg.d = *d;
    if (beta) cfg.beta = *beta;
    if (model) cfg.model = parse_pattern_model(*model);
    if (trials) cfg.trials_per_point = *trials;
    if (fix_pattern) cfg.fix_pattern = *fix_pattern;
  }
};

SweepConfig build_config(const GlobalFlags& g, const ModelFlags& m) {
  SweepConfig cfg;
  if (!g.config.empty()) cfg = load_config_file(g.config);
  m.apply(cfg);
  if (g.seed) cfg.master_seed = *g.seed;
  if (g.threads) cfg.threads = *g.threads;
  if (!g.out.empty()) cfg.out_dir = g.out;
  cfg.format = g.format;
  cfg.validate();
  return cfg;
}

class Output {
 public:
  Output(const SweepConfig& cfg, std::string command)
      : cfg_(cfg), command_(std::move(command)),
        start_(std::chrono::steady_clock::now()) {}

  bool json() const { return cfg_.format == "json"; }

  // Writes `name` under the output directory, or prints it when no
  // directory was given and `primary` is set.
  void emit(const std::string& name, const std::string& content,
            bool primary = false) const {
    if (!cfg_.out_dir.empty()) {
      write_text_file(fs::path(cfg_.out_dir) / name, content);
    } else if (primary) {
      std::cout << content;
    }
  }

  void emit(const std::string& stem, const nlohmann::json& j,
            const std::string& csv, bool primary = false) const {
    if (json()) {
      emit(stem + ".json", j.dump(2) + "\n", primary);
    } else {
      emit(stem + ".csv", csv, primary);
    }
  }

  void finish() const {
    if (cfg_.out_dir.empty()) return;
    const double wall = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - start_)
                            .count();
    write_text_file(fs::path(cfg_.out_dir) / "meta.json",
                    meta_json(command_, cfg_, wall).dump(2) + "\n");
  }

 private:
  const SweepConfig& cfg_;
  std::string command_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse Lotka-Volterra feasibility experiments"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(kVersion));

  GlobalFlags g;
  app.add_option("--seed", g.seed, "master seed");
  app.add_option("--threads", g.threads, "worker threads");
  app.add_option("--out", g.out, "output directory");
  app.add_option("--format", g.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--config", g.config, "flat key = value config file")
      ->check(CLI::ExistingFile);

  // pattern
  ModelFlags pattern_flags;
  std::string import_path;
  auto* pattern_cmd = app.add_subcommand("pattern", "generate or check an adjacency pattern");
  pattern_flags.attach(pattern_cmd);
  pattern_cmd->add_option("--import", import_path, "validate a pattern file")
      ->check(CLI::ExistingFile);

  // solve
  ModelFlags solve_flags;
  double solve_kappa = 3.0;
  std::optional<double> solve_alpha;
  std::size_t solve_trial = 0;
  bool full_state = false;
  auto* solve_cmd = app.add_subcommand("solve", "solve x = 1 + Mx for one instance");
  solve_flags.attach(solve_cmd);
  solve_cmd->add_option("--kappa", solve_kappa, "alpha = sqrt(kappa log n)");
  solve_cmd->add_option("--alpha", solve_alpha, "explicit alpha (overrides kappa)");
  solve_cmd->add_option("--trial", solve_trial, "trial index");
  solve_cmd->add_flag("--full-state", full_state, "include x in the report");

  // sweep
  ModelFlags sweep_flags;
  std::vector<double> kappa_grid;
  auto* sweep_cmd = app.add_subcommand("sweep", "feasibility fraction over a kappa grid");
  sweep_flags.attach(sweep_cmd);
  sweep_cmd->add_option("--kappa-grid", kappa_grid, "kappa values")->delimiter(',');

  // histogram
  ModelFlags hist_flags;
  double hist_kappa = 4.0;
  std::optional<std::size_t> bins;
  auto* hist_cmd = app.add_subcommand("histogram", "pooled equilibrium abundances");
  hist_flags.attach(hist_cmd);
  hist_cmd->add_option("--kappa", hist_kappa, "kappa");
  hist_cmd->add_option("--bins", bins, "histogram bins");

  // dynamics
  ModelFlags dyn_flags;
  double dyn_kappa = 3.0;
  std::optional<double> t_end, x0;
  std::optional<std::size_t> samples, traced;
  std::vector<double> snapshot_times;
  auto* dyn_cmd = app.add_subcommand("dynamics", "integrate the LV system");
  dyn_flags.attach(dyn_cmd);
  dyn_cmd->add_option("--kappa", dyn_kappa, "kappa");
  dyn_cmd->add_option("--t-end", t_end, "final time");
  dyn_cmd->add_option("--x0", x0, "uniform initial abundance");
  dyn_cmd->add_option("--samples", samples, "sample count");
  dyn_cmd->add_option("--traced", traced, "traced species");
  dyn_cmd->add_option("--snapshot-times", snapshot_times, "full-state snapshot times")
      ->delimiter(',');

  // spectrum
  ModelFlags spec_flags;
  double spec_kappa = 4.0;
  auto* spec_cmd = app.add_subcommand("spectrum", "Jacobian spectra at feasible equilibria");
  spec_flags.attach(spec_cmd);
  spec_cmd->add_option("--kappa", spec_kappa, "kappa");

  // gap
  ModelFlags gap_flags;
  auto* gap_cmd = app.add_subcommand("gap", "singular-gap Monte Carlo");
  gap_flags.attach(gap_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (pattern_cmd->parsed()) {
      const SweepConfig cfg = build_config(g, pattern_flags);
      Output out(cfg, "pattern");
      std::shared_ptr<const AdjacencyPattern> p;
      if (!import_path.empty()) {
        std::ifstream in(import_path, std::ios::binary);
        std::string text((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
        p = std::make_shared<const AdjacencyPattern>(import_pattern_text(text));
      } else {
        p = make_pattern(cfg, 0, 0);
      }
      const auto reg = validate_regularity(*p);
      nlohmann::json j{{"n", p->n()},
                       {"d", p->d()},
                       {"model", to_string(p->model())},
                       {"seed", p->seed()},
                       {"nnz", reg.nnz},
                       {"row_degrees_ok", reg.row_degrees_ok},
                       {"col_degrees_ok", reg.col_degrees_ok}};
      out.emit("pattern.txt", export_pattern_text(*p), !out.json());
      if (out.json()) out.emit("pattern.json", j.dump(2) + "\n", true);
      out.finish();
      return reg.row_degrees_ok && reg.col_degrees_ok ? 0 : kExitNumerical;
    }

    if (solve_cmd->parsed()) {
      const SweepConfig cfg = build_config(g, solve_flags);
      Output out(cfg, "solve");
      auto pattern = make_pattern(cfg, 0, solve_trial);
      auto m = make_trial_matrix(cfg, pattern, solve_kappa, 0, solve_trial);
      if (solve_alpha) m = m.with_alpha(*solve_alpha);
      SpectralOptions so;
      so.tol = cfg.norm_tol;
      const auto spectral = spectral_norm(m, so);
      FeasibilityOptions fo;
      fo.tol = cfg.solve_tol;
      fo.max_iterations = cfg.solve_max_iterations;
      const auto rep = solve_feasibility(m, fo);
      out.emit("equilibrium", to_json(rep, full_state),
               equilibrium_csv_header() + equilibrium_csv_row(rep), true);
      out.emit("spectral.json", to_json(spectral).dump(2) + "\n");
      out.finish();
      if (!rep.converged) {
        std::cerr << "solve: iteration did not reach tolerance\n";
        return kExitNumerical;
      }
      return 0;
    }

    if (sweep_cmd->parsed()) {
      SweepConfig cfg = build_config(g, sweep_flags);
      if (!kappa_grid.empty()) cfg.kappa_grid = kappa_grid;
      cfg.validate();
      Output out(cfg, "sweep");
      const auto res = run_feasibility_sweep(cfg);
      out.emit("sweep", to_json(res), sweep_csv(res), true);
      out.finish();
      return 0;
    }

    if (hist_cmd->parsed()) {
      SweepConfig cfg = build_config(g, hist_flags);
      if (bins) cfg.bins = *bins;
      cfg.validate();
      Output out(cfg, "histogram");
      const auto res = run_abundance_histogram(cfg, hist_kappa, cfg.bins);
      for (const auto& w : res.warnings) std::cerr << "warning: " << w << '\n';
      out.emit("histogram", to_json(res), histogram_csv(res), true);
      out.finish();
      return 0;
    }

    if (dyn_cmd->parsed()) {
      SweepConfig cfg = build_config(g, dyn_flags);
      if (t_end) cfg.t_end = *t_end;
      if (x0) cfg.x0 = *x0;
      if (samples) cfg.sample_count = *samples;
      if (traced) cfg.traced_species = *traced;
      if (!snapshot_times.empty()) cfg.snapshot_times = snapshot_times;
      cfg.validate();
      Output out(cfg, "dynamics");
      const auto res = run_dynamics_trace(cfg, dyn_kappa);
      out.emit("trajectory", to_json(res), trajectory_csv(res.trajectory), true);
      out.emit("species.csv", tracked_species_csv(res.trajectory));
      if (!res.trajectory.snapshots.empty()) {
        out.emit("snapshots.csv", snapshots_csv(res.trajectory));
      }
      out.finish();
      if (res.trajectory.aborted) {
        std::cerr << "dynamics: " << res.trajectory.diagnostic << '\n';
        return kExitNumerical;
      }
      return 0;
    }

    if (spec_cmd->parsed()) {
      const SweepConfig cfg = build_config(g, spec_flags);
      Output out(cfg, "spectrum");
      const auto res = run_spectrum_check(cfg, spec_kappa);
      out.emit("spectrum", to_json(res), spectrum_trials_csv(res), true);
      out.emit("eigenvalues.csv", eigenvalues_csv(res.sample_eigenvalues));
      out.finish();
      return 0;
    }

    if (gap_cmd->parsed()) {
      const SweepConfig cfg = build_config(g, gap_flags);
      Output out(cfg, "gap");
      const auto res = run_gap_check(cfg);
      out.emit("gap", to_json(res), gap_csv(res), true);
      out.finish();
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "invalid configuration: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
