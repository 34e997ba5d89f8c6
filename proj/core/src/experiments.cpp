#include "sparselv/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iostream>
#include <limits>
#include <numeric>
#include <optional>

#include "sparselv/errors.hpp"
#include "sparselv/parallel.hpp"
#include "sparselv/rng.hpp"

namespace sparselv {

namespace {

constexpr std::uint64_t kPatternTag = 0x7061747465726EULL;  // "pattern"
constexpr std::uint64_t kTrialTag = 0x747269616CULL;        // "trial"
constexpr std::uint64_t kTraceTag = 0x7472616365ULL;        // "trace"

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// One pattern for the run, or a fresh one per trial.
class PatternSource {
 public:
  explicit PatternSource(const SweepConfig& cfg) : cfg_(cfg) {
    if (cfg_.fix_pattern) fixed_ = make_pattern(cfg_, 0, 0);
  }
  std::shared_ptr<const AdjacencyPattern> get(std::size_t kappa_index,
                                              std::size_t trial) const {
    return fixed_ ? fixed_ : make_pattern(cfg_, kappa_index, trial);
  }

 private:
  const SweepConfig& cfg_;
  std::shared_ptr<const AdjacencyPattern> fixed_;
};

struct SolveOutcome {
  bool diverged = false;
  std::optional<EquilibriumReport> report;
};

SolveOutcome try_solve(const InteractionMatrix& m, const SweepConfig& cfg) {
  SolveOutcome out;
  FeasibilityOptions opts;
  opts.tol = cfg.solve_tol;
  opts.max_iterations = cfg.solve_max_iterations;
  try {
    auto rep = solve_feasibility(m, opts);
    if (rep.converged) {
      out.report = std::move(rep);
    } else {
      out.diverged = true;
    }
  } catch (const DivergenceError&) {
    out.diverged = true;
  }
  return out;
}

}  // namespace

double alpha_for_kappa(double kappa, std::size_t n) {
  return std::sqrt(kappa * std::log(static_cast<double>(n)));
}

std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t kappa_index,
                         std::size_t trial) {
  return derive_seed(master_seed, {kTrialTag, kappa_index, trial});
}

std::shared_ptr<const AdjacencyPattern> make_pattern(const SweepConfig& cfg,
                                                     std::size_t kappa_index,
                                                     std::size_t trial) {
  cfg.validate();
  const std::uint64_t seed =
      cfg.fix_pattern ? derive_seed(cfg.master_seed, {kPatternTag})
                      : derive_seed(cfg.master_seed,
                                    {kPatternTag, kappa_index, trial});
  const std::size_t d = cfg.degree();
  switch (cfg.model) {
    case PatternModel::BlockPermutation:
      return std::make_shared<const AdjacencyPattern>(
          random_block_permutation_pattern(cfg.n / d, d, seed));
    case PatternModel::Proportional:
      return std::make_shared<const AdjacencyPattern>(proportional_pattern(
          cfg.n, static_cast<double>(d) / static_cast<double>(cfg.n), seed));
    case PatternModel::GeneralRegular:
      return std::make_shared<const AdjacencyPattern>(
          general_regular_pattern(cfg.n, d, seed));
    case PatternModel::Full:
      return std::make_shared<const AdjacencyPattern>(full_pattern(cfg.n));
  }
  throw ConfigError("unknown pattern model");
}

InteractionMatrix make_trial_matrix(
    const SweepConfig& cfg, std::shared_ptr<const AdjacencyPattern> pattern,
    double kappa, std::size_t kappa_index, std::size_t trial) {
  const double alpha = alpha_for_kappa(kappa, cfg.n);
  if (cfg.zero_interactions) {
    std::vector<double> zeros(pattern->nnz(), 0.0);
    return InteractionMatrix::from_weights(std::move(pattern), std::move(zeros),
                                           alpha);
  }
  return InteractionMatrix::assemble(
      std::move(pattern), alpha, trial_seed(cfg.master_seed, kappa_index, trial));
}

// ---------------------------------------------------------------------------

SweepResult run_feasibility_sweep(const SweepConfig& cfg) {
  cfg.validate();
  const auto start = Clock::now();
  const PatternSource patterns(cfg);
  const double alpha_star = std::sqrt(2.0 * std::log(static_cast<double>(cfg.n)));

  struct TrialOutcome {
    double norm = 0.0;
    bool diverged = false;
    bool feasible = false;
    double min_x = 0.0;
    double max_r = 0.0;
  };

  SweepResult result;
  result.config = cfg;
  for (std::size_t ki = 0; ki < cfg.kappa_grid.size(); ++ki) {
    const double kappa = cfg.kappa_grid[ki];
    std::vector<TrialOutcome> outcomes(cfg.trials_per_point);
    parallel_for(cfg.trials_per_point, cfg.threads, [&](std::size_t t) {
      const auto m = make_trial_matrix(cfg, patterns.get(ki, t), kappa, ki, t);
      SpectralOptions so;
      so.tol = cfg.norm_tol;
      TrialOutcome& o = outcomes[t];
      o.norm = spectral_norm(m, so).spectral_norm;
      auto solved = try_solve(m, cfg);
      o.diverged = solved.diverged;
      if (solved.report) {
        const auto& rep = *solved.report;
        o.feasible = rep.feasible;
        o.min_x = rep.min_x;
        for (double r : rep.r) o.max_r = std::max(o.max_r, std::abs(r));
      }
    });

    // Aggregate in trial order so sums do not depend on scheduling.
    SweepRow row;
    row.kappa = kappa;
    row.alpha = alpha_for_kappa(kappa, cfg.n);
    row.trials = cfg.trials_per_point;
    std::size_t solved = 0;
    double norm_sum = 0.0, min_x_sum = 0.0, r_sum = 0.0;
    for (const auto& o : outcomes) {
      norm_sum += o.norm;
      if (o.norm >= 1.0) ++row.norm_ge_one;
      if (o.diverged) {
        ++row.diverged;
        continue;
      }
      ++solved;
      if (o.feasible) ++row.feasible_count;
      min_x_sum += o.min_x;
      r_sum += o.max_r / (row.alpha * alpha_star);
    }
    row.feasible_fraction = static_cast<double>(row.feasible_count) /
                            static_cast<double>(row.trials);
    row.mean_spectral_norm = norm_sum / static_cast<double>(row.trials);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    row.mean_min_x = solved ? min_x_sum / static_cast<double>(solved) : nan;
    row.mean_max_r_normalized = solved ? r_sum / static_cast<double>(solved) : nan;
    result.rows.push_back(row);
  }
  result.wall_seconds = seconds_since(start);
  return result;
}

// ---------------------------------------------------------------------------

HistogramResult run_abundance_histogram(const SweepConfig& cfg, double kappa,
                                        std::size_t bins) {
  cfg.validate();
  if (!(kappa > 0.0)) throw ConfigError("kappa must be positive");
  const auto start = Clock::now();
  const PatternSource patterns(cfg);

  HistogramResult out;
  out.kappa = kappa;
  out.alpha = alpha_for_kappa(kappa, cfg.n);
  out.trials = cfg.trials_per_point;
  if (kappa < 2.0) {
    out.warnings.push_back(
        "kappa < 2 is below the feasibility threshold; abundances may be "
        "negative and the Gaussian approximation does not apply");
  }

  std::vector<std::vector<double>> per_trial(cfg.trials_per_point);
  std::vector<char> diverged(cfg.trials_per_point, 0);
  parallel_for(cfg.trials_per_point, cfg.threads, [&](std::size_t t) {
    const auto m = make_trial_matrix(cfg, patterns.get(0, t), kappa, 0, t);
    auto solved = try_solve(m, cfg);
    if (solved.report) {
      per_trial[t] = std::move(solved.report->x);
    } else {
      diverged[t] = 1;
    }
  });

  std::vector<double> pooled;
  pooled.reserve(cfg.trials_per_point * cfg.n);
  for (std::size_t t = 0; t < per_trial.size(); ++t) {
    out.diverged += static_cast<std::size_t>(diverged[t]);
    pooled.insert(pooled.end(), per_trial[t].begin(), per_trial[t].end());
  }
  out.histogram = stats::histogram(pooled, bins);
  out.mean = stats::mean(pooled);
  out.variance = stats::variance(pooled);
  out.wall_seconds = seconds_since(start);
  return out;
}

// ---------------------------------------------------------------------------

DynamicsTraceResult run_dynamics_trace(const SweepConfig& cfg, double kappa) {
  cfg.validate();
  if (!(kappa > 0.0)) throw ConfigError("kappa must be positive");
  const auto start = Clock::now();
  const auto m = make_trial_matrix(cfg, make_pattern(cfg, 0, 0), kappa, 0, 0);

  DynamicsTraceResult out;
  out.kappa = kappa;
  out.alpha = m.alpha();
  out.seed = m.seed();

  IntegrationControls controls;
  controls.rel_tol = cfg.rel_tol;
  controls.abs_tol = cfg.abs_tol;
  controls.sample_count = cfg.sample_count;
  controls.snapshot_times = cfg.snapshot_times;

  // Partial Fisher-Yates picks the traced species.
  const std::size_t traced = std::min(cfg.traced_species, cfg.n);
  std::vector<std::size_t> order(cfg.n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  CounterStream rng(derive_seed(cfg.master_seed, {kTraceTag}));
  for (std::size_t i = 0; i < traced; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.uniform_index(cfg.n - i));
    std::swap(order[i], order[j]);
  }
  controls.tracked_species.assign(order.begin(), order.begin() + traced);
  std::sort(controls.tracked_species.begin(), controls.tracked_species.end());

  auto solved = try_solve(m, cfg);
  if (solved.report && solved.report->feasible) {
    out.feasible = true;
    controls.reference = solved.report->x;
  }

  const std::vector<double> x0(cfg.n, cfg.x0);
  out.trajectory = integrate_lv(m, x0, cfg.t_end, controls);
  out.rate.rate = std::numeric_limits<double>::quiet_NaN();
  if (out.feasible) out.rate = convergence_rate(out.trajectory);
  out.wall_seconds = seconds_since(start);
  return out;
}

// ---------------------------------------------------------------------------

SpectrumCheckResult run_spectrum_check(const SweepConfig& cfg, double kappa) {
  cfg.validate();
  if (!(kappa > 0.0)) throw ConfigError("kappa must be positive");
  const auto start = Clock::now();
  const PatternSource patterns(cfg);

  struct Slot {
    bool analysed = false;
    SpectrumTrial row;
    std::vector<std::complex<double>> eigenvalues;
  };
  std::vector<Slot> slots(cfg.trials_per_point);
  parallel_for(cfg.trials_per_point, cfg.threads, [&](std::size_t t) {
    const auto m = make_trial_matrix(cfg, patterns.get(0, t), kappa, 0, t);
    auto solved = try_solve(m, cfg);
    Slot& slot = slots[t];
    slot.row.trial = t;
    if (!solved.report || !solved.report->feasible) return;
    auto spectrum = jacobian_spectrum(m, solved.report->x);
    slot.analysed = true;
    slot.row.feasible = true;
    slot.row.max_real_part = spectrum.max_real_part;
    slot.row.localization_error = spectrum.localization_error;
    slot.row.stability_margin_bound = spectrum.stability_margin_bound;
    slot.eigenvalues = std::move(spectrum.eigenvalues);
  });

  SpectrumCheckResult out;
  out.kappa = kappa;
  out.alpha = alpha_for_kappa(kappa, cfg.n);
  double re_sum = 0.0, loc_sum = 0.0;
  for (auto& slot : slots) {
    if (!slot.analysed) {
      ++out.skipped;
      continue;
    }
    if (out.trials.empty()) out.sample_eigenvalues = std::move(slot.eigenvalues);
    re_sum += slot.row.max_real_part;
    loc_sum += slot.row.localization_error;
    out.trials.push_back(slot.row);
  }
  if (!out.trials.empty()) {
    out.mean_max_real_part = re_sum / static_cast<double>(out.trials.size());
    out.mean_localization_error = loc_sum / static_cast<double>(out.trials.size());
  } else {
    out.mean_max_real_part = std::numeric_limits<double>::quiet_NaN();
    out.mean_localization_error = std::numeric_limits<double>::quiet_NaN();
  }
  out.wall_seconds = seconds_since(start);
  return out;
}

// ---------------------------------------------------------------------------

GapCheckResult run_gap_check(const SweepConfig& cfg) {
  cfg.validate();
  const auto start = Clock::now();
  const PatternSource patterns(cfg);
  GapCheckResult out;
  out.gaps.assign(cfg.trials_per_point, 0.0);
  parallel_for(cfg.trials_per_point, cfg.threads, [&](std::size_t t) {
    const auto m = make_trial_matrix(cfg, patterns.get(0, t), 1.0, 0, t);
    out.gaps[t] = singular_gap(m);
  });
  out.smallest_gap = *std::min_element(out.gaps.begin(), out.gaps.end());
  out.degenerate = static_cast<std::size_t>(std::count_if(
      out.gaps.begin(), out.gaps.end(), [](double g) { return g <= 1e-10; }));
  out.wall_seconds = seconds_since(start);
  return out;
}

}  // namespace sparselv
