#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "sparselv/config.hpp"
#include "sparselv/dynamics.hpp"
#include "sparselv/equilibrium.hpp"
#include "sparselv/interaction.hpp"
#include "sparselv/statistics.hpp"

namespace sparselv {

/// alpha = sqrt(kappa log n).
double alpha_for_kappa(double kappa, std::size_t n);

/// Seed of trial `trial` at grid point `kappa_index`; a pure function of the
/// master seed and the two indices.
std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t kappa_index,
                         std::size_t trial);

/// Pattern used by a trial. With fix_pattern the same pattern serves the
/// whole run.
std::shared_ptr<const AdjacencyPattern> make_pattern(const SweepConfig& cfg,
                                                     std::size_t kappa_index,
                                                     std::size_t trial);

/// Assembled matrix for one trial (zero weights when zero_interactions).
InteractionMatrix make_trial_matrix(
    const SweepConfig& cfg, std::shared_ptr<const AdjacencyPattern> pattern,
    double kappa, std::size_t kappa_index, std::size_t trial);

// ---------------------------------------------------------------------------
// Feasibility sweep

struct SweepRow {
  double kappa = 0.0;
  double alpha = 0.0;
  std::size_t trials = 0;
  std::size_t feasible_count = 0;
  double feasible_fraction = 0.0;
  /// Trials where the Neumann iteration diverged or did not reach tol.
  std::size_t diverged = 0;
  /// Trials where the spectral-norm guard found ||M|| >= 1.
  std::size_t norm_ge_one = 0;
  /// Means over non-diverged trials.
  double mean_min_x = 0.0;
  /// Mean of max_k |R_k| / (alpha sqrt(2 log n)).
  double mean_max_r_normalized = 0.0;
  /// Mean of ||M|| over all trials.
  double mean_spectral_norm = 0.0;
};

struct SweepResult {
  SweepConfig config;
  std::vector<SweepRow> rows;
  double wall_seconds = 0.0;
};

SweepResult run_feasibility_sweep(const SweepConfig& cfg);

// ---------------------------------------------------------------------------
// Abundance histogram

struct HistogramResult {
  double kappa = 0.0;
  double alpha = 0.0;
  std::size_t trials = 0;
  std::size_t diverged = 0;
  stats::Histogram histogram;
  double mean = 0.0;
  double variance = 0.0;
  std::vector<std::string> warnings;
  double wall_seconds = 0.0;
};

HistogramResult run_abundance_histogram(const SweepConfig& cfg, double kappa,
                                        std::size_t bins);

// ---------------------------------------------------------------------------
// Dynamics trace

struct DynamicsTraceResult {
  double kappa = 0.0;
  double alpha = 0.0;
  std::uint64_t seed = 0;
  /// The linear solution is positive; it then serves as the reference.
  bool feasible = false;
  TrajectoryRecord trajectory;
  /// Only meaningful for feasible runs; NaN otherwise.
  RateFit rate;
  double wall_seconds = 0.0;
};

DynamicsTraceResult run_dynamics_trace(const SweepConfig& cfg, double kappa);

// ---------------------------------------------------------------------------
// Jacobian spectra

struct SpectrumTrial {
  std::size_t trial = 0;
  bool feasible = false;
  double max_real_part = 0.0;
  double localization_error = 0.0;
  double stability_margin_bound = 0.0;
};

struct SpectrumCheckResult {
  double kappa = 0.0;
  double alpha = 0.0;
  std::vector<SpectrumTrial> trials;
  /// Infeasible or diverged trials, skipped.
  std::size_t skipped = 0;
  double mean_max_real_part = 0.0;
  double mean_localization_error = 0.0;
  /// Eigenvalues of the first analysed trial.
  std::vector<std::complex<double>> sample_eigenvalues;
  double wall_seconds = 0.0;
};

SpectrumCheckResult run_spectrum_check(const SweepConfig& cfg, double kappa);

// ---------------------------------------------------------------------------
// Singular-gap Monte Carlo

struct GapCheckResult {
  std::vector<double> gaps;
  double smallest_gap = 0.0;
  /// Trials with gap <= 1e-10.
  std::size_t degenerate = 0;
  double wall_seconds = 0.0;
};

GapCheckResult run_gap_check(const SweepConfig& cfg);

}  // namespace sparselv
