// Acceptance checks for the sparse Lotka-Volterra toolkit. Each criterion
// prints one PASS / FAIL line with the measured quantities; the exit status
// is non-zero when any selected criterion fails.
//
//   sparselv_acceptance                 run all criteria
//   sparselv_acceptance --criterion 4   run one

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "oracles.hpp"
#include "sparselv/dynamics.hpp"
#include "sparselv/equilibrium.hpp"
#include "sparselv/errors.hpp"
#include "sparselv/experiments.hpp"
#include "sparselv/reports.hpp"
#include "sparselv/rng.hpp"
#include "sparselv/statistics.hpp"

using namespace sparselv;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v, int precision = 4) {
  std::ostringstream os;
  os.precision(precision);
  os << v;
  return os.str();
}

std::shared_ptr<const AdjacencyPattern> share(AdjacencyPattern p) {
  return std::make_shared<const AdjacencyPattern>(std::move(p));
}

SweepConfig model_a(std::size_t n, std::size_t d, std::size_t trials) {
  SweepConfig cfg;
  cfg.n = n;
  cfg.d = d;
  cfg.model = PatternModel::BlockPermutation;
  cfg.trials_per_point = trials;
  cfg.master_seed = 20240601;
  return cfg;
}

// ---------------------------------------------------------------------------

Outcome phase_transition() {
  auto cfg = model_a(2000, 16, 200);
  cfg.kappa_grid = {0.5, 1.0, 1.25, 1.5, 1.75, 2.0, 2.5, 3.0, 3.5, 8.0};
  const auto res = run_feasibility_sweep(cfg);
  const auto& rows = res.rows;
  const double low = rows.front().feasible_fraction;
  const double high = rows.back().feasible_fraction;
  double crossing = NAN;
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    const double f0 = rows[i].feasible_fraction, f1 = rows[i + 1].feasible_fraction;
    if (f0 < 0.5 && f1 >= 0.5) {
      crossing = rows[i].kappa + (0.5 - f0) / (f1 - f0) * (rows[i + 1].kappa - rows[i].kappa);
      break;
    }
  }
  std::string curve;
  for (const auto& r : rows) curve += " " + fmt(r.kappa) + ":" + fmt(r.feasible_fraction, 3);
  Outcome o;
  o.pass = low <= 0.05 && high >= 0.95 && crossing >= 1.2 && crossing <= 3.5;
  o.detail = "f(0.5)=" + fmt(low) + " f(8)=" + fmt(high) + " crossing kappa=" +
             fmt(crossing) + " [" + curve.substr(1) + "] " + fmt(res.wall_seconds, 3) + "s";
  return o;
}

Outcome solver_correctness() {
  std::size_t solved = 0, diverged = 0;
  double worst_residual = 0.0, worst_identity = 0.0;
  const PatternModel models[] = {PatternModel::BlockPermutation, PatternModel::Proportional,
                                 PatternModel::GeneralRegular};
  for (auto model : models) {
    SweepConfig cfg = model_a(2000, 16, 25);
    cfg.model = model;
    cfg.beta = model == PatternModel::Proportional ? 0.01 : 0.0;
    cfg.fix_pattern = false;
    for (std::size_t ki = 0; ki < 4; ++ki) {
      const double kappa = std::array{1.0, 2.0, 4.0, 8.0}[ki];
      for (std::size_t t = 0; t < cfg.trials_per_point; ++t) {
        const auto m = make_trial_matrix(cfg, make_pattern(cfg, ki, t), kappa, ki, t);
        EquilibriumReport r;
        try {
          r = solve_feasibility(m);
        } catch (const DivergenceError&) {
          ++diverged;
          continue;
        }
        if (!r.converged) {
          ++diverged;
          continue;
        }
        ++solved;
        // Residual and Z recomputed from the dense expansion.
        const Eigen::MatrixXd c = oracle::dense_m(m, true);
        const Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(r.x.data(), long(r.x.size()));
        const Eigen::VectorXd res = x - Eigen::VectorXd::Ones(x.size()) - c * x / m.alpha();
        const Eigen::VectorXd z = c * Eigen::VectorXd::Ones(x.size());
        worst_residual = std::max(worst_residual, res.cwiseAbs().maxCoeff());
        const double a = m.alpha();
        for (std::size_t k = 0; k < r.x.size(); ++k) {
          const double rebuilt = 1.0 + z[long(k)] / a + r.r[k] / (a * a);
          worst_identity = std::max(worst_identity, std::abs(r.x[k] - rebuilt));
        }
      }
    }
  }
  Outcome o;
  o.pass = solved > 0 && worst_residual <= 1e-10 && worst_identity <= 1e-9;
  o.detail = "solved=" + std::to_string(solved) + " diverged=" + std::to_string(diverged) +
             " max residual=" + fmt(worst_residual) + " max identity error=" +
             fmt(worst_identity);
  return o;
}

Outcome oracle_equivalence() {
  std::size_t instances = 0, bad_solve = 0, bad_tail = 0;
  double worst_rel = 0.0, worst_tail_ratio = 0.0;
  const std::size_t sizes[] = {8, 12, 16, 20, 24, 32};
  const FeasibilityOptions fo;
  for (std::size_t i = 0; instances < 100; ++i) {
    const std::size_t n = sizes[i % 6];
    const std::uint64_t seed = derive_seed(77, {i});
    std::shared_ptr<const AdjacencyPattern> p;
    switch (i % 3) {
      case 0:
        p = share(random_block_permutation_pattern(n / 4, 4, seed));
        break;
      case 1:
        p = share(proportional_pattern(n, 0.25, seed));
        break;
      default:
        p = share(general_regular_pattern(n, 3 + i % 4, seed));
        break;
    }
    auto m = InteractionMatrix::assemble(p, 1.0, seed + 1);
    const double sigma = oracle::singular_values(oracle::dense_m(m, true))[0];
    const double alpha = std::max(std::sqrt(8.0 * std::log(double(n))), 1.25 * sigma);
    m = m.with_alpha(alpha);
    ++instances;

    const auto r = solve_feasibility(m, fo);
    const Eigen::VectorXd x = oracle::solve_equilibrium(oracle::dense_m(m));
    double err = 0.0;
    for (std::size_t k = 0; k < n; ++k) err = std::max(err, std::abs(r.x[k] - x[long(k)]));
    const double rel = err / x.cwiseAbs().maxCoeff();
    worst_rel = std::max(worst_rel, rel);
    if (!(rel <= 1e-10)) ++bad_solve;

    const double q = sigma / alpha;
    const auto rho = neumann_summands(m, 32);
    for (std::size_t L : {4u, 8u, 16u, 32u}) {
      const double tail = alpha * alpha * std::sqrt(double(n)) * std::pow(q, double(L + 1)) /
                              (1.0 - q) +
                          alpha * alpha * fo.tol / (1.0 - q);
      for (std::size_t k = 0; k < n; ++k) {
        double partial = 0.0;
        for (std::size_t l = 2; l <= L; ++l) partial += rho[l - 2][k];
        const double gap = std::abs(partial - r.r[k]);
        worst_tail_ratio = std::max(worst_tail_ratio, gap / tail);
        if (gap > tail) ++bad_tail;
      }
    }
  }
  Outcome o;
  o.pass = bad_solve == 0 && bad_tail == 0;
  o.detail = "instances=" + std::to_string(instances) + " max rel error=" + fmt(worst_rel) +
             " solve failures=" + std::to_string(bad_solve) + " tail violations=" +
             std::to_string(bad_tail) + " max |partial-R|/bound=" + fmt(worst_tail_ratio);
  return o;
}

Outcome gaussianity() {
  auto cfg = model_a(1000, 8, 500);
  const auto pattern = make_pattern(cfg, 0, 0);
  std::vector<double> pooled;
  pooled.reserve(500 * 1000);
  std::vector<double> z(1000);
  const std::vector<double> ones(1000, 1.0);
  for (std::size_t t = 0; t < 500; ++t) {
    const auto m = make_trial_matrix(cfg, pattern, 4.0, 0, t);
    m.unscaled_matvec(ones, z);
    pooled.insert(pooled.end(), z.begin(), z.end());
  }
  const double d = stats::ks_statistic(pooled, stats::normal_cdf);
  const double p = stats::ks_pvalue(d, pooled.size());

  const std::size_t n = 10000, replicates = 2000;
  const auto g = gumbel_constants(n);
  std::size_t survived = 0;
  std::vector<double> sample(n);
  for (std::size_t r = 0; r < replicates; ++r) {
    const std::uint64_t seed = derive_seed(cfg.master_seed, {0x6576, r});
    for (std::size_t k = 0; k < n; ++k) sample[k] = gaussian_at(seed, k);
    if (extreme_value_stat(sample, g) >= 0.0) ++survived;
  }
  const double survival = double(survived) / double(replicates);
  const double target = gumbel_min_survival_limit(0.0);
  Outcome o;
  const bool ks_ok = p > 0.01;
  const bool ev_ok = std::abs(survival - target) <= 0.04;
  o.pass = ks_ok && ev_ok;
  o.detail = "KS D=" + fmt(d) + " p=" + fmt(p) + (ks_ok ? " (ok)" : " (FAIL)") +
             "; EV survival at 0=" + fmt(survival) + " vs e^-1=" + fmt(target) +
             " |diff|=" + fmt(std::abs(survival - target)) + (ev_ok ? " (ok)" : " (FAIL)");
  return o;
}

Outcome norm_envelope() {
  SweepConfig cfg = model_a(500, 7, 200);
  cfg.model = PatternModel::GeneralRegular;
  cfg.fix_pattern = false;
  SpectralOptions opts;
  opts.unscaled = true;
  opts.tol = 1e-8;
  std::size_t violations = 0;
  double largest = 0.0;
  for (std::size_t t = 0; t < cfg.trials_per_point; ++t) {
    const auto m = make_trial_matrix(cfg, make_pattern(cfg, 0, t), 1.0, 0, t);
    const auto r = spectral_norm(m, opts);
    largest = std::max(largest, r.spectral_norm);
    if (!r.norm_bound_holds || !(r.spectral_norm < kNormEnvelope)) ++violations;
  }
  return {violations == 0, "trials=200 violations=" + std::to_string(violations) +
                               " largest norm=" + fmt(largest)};
}

Outcome singular_distinctness() {
  SweepConfig cfg = model_a(10, 3, 1000);
  cfg.model = PatternModel::GeneralRegular;
  cfg.fix_pattern = false;
  const auto res = run_gap_check(cfg);
  return {res.degenerate == 0 && res.smallest_gap > 1e-10,
          "trials=" + std::to_string(res.gaps.size()) + " degenerate=" +
              std::to_string(res.degenerate) + " smallest gap=" + fmt(res.smallest_gap)};
}

Outcome stability_and_spectrum() {
  auto cfg = model_a(1000, 8, 50);
  const auto at8 = run_spectrum_check(cfg, 8.0);
  std::size_t unstable = 0;
  for (const auto& t : at8.trials) unstable += t.max_real_part < 0.0 ? 0 : 1;
  const bool spectrum_ok = !at8.trials.empty() && unstable == 0;

  const auto at4 = run_spectrum_check(cfg, 4.0);
  const auto at16 = run_spectrum_check(cfg, 16.0);
  const bool localization_ok = at16.mean_localization_error < at4.mean_localization_error;

  // Convergence rate of the ODE toward the feasible equilibrium.
  const double alpha = alpha_for_kappa(8.0, cfg.n);
  const double bound = -(1.0 - gumbel_constants(cfg.n).alpha_star / alpha) + 0.1;
  const auto pattern = make_pattern(cfg, 0, 0);
  std::size_t fitted = 0, rate_violations = 0;
  double worst_rate = -INFINITY;
  for (std::size_t t = 0; t < cfg.trials_per_point; ++t) {
    const auto m = make_trial_matrix(cfg, pattern, 8.0, 0, t);
    const auto lin = solve_feasibility(m);
    if (!lin.feasible) continue;
    IntegrationControls c;
    c.reference = lin.x;
    const auto rec = integrate_lv(m, std::vector<double>(cfg.n, cfg.x0), cfg.t_end, c);
    const auto fit = convergence_rate(rec);
    ++fitted;
    if (rec.aborted || fit.converged_to_precision || !(fit.rate <= bound)) {
      ++rate_violations;
    } else {
      worst_rate = std::max(worst_rate, fit.rate);
    }
  }
  const bool rate_ok = fitted > 0 && rate_violations == 0;
  return {spectrum_ok && localization_ok && rate_ok,
          "kappa=8 analysed=" + std::to_string(at8.trials.size()) + " skipped=" +
              std::to_string(at8.skipped) + " nonnegative max Re=" + std::to_string(unstable) +
              "; localization kappa4=" + fmt(at4.mean_localization_error) +
              " kappa16=" + fmt(at16.mean_localization_error) + "; rate worst=" +
              fmt(worst_rate) + " bound=" + fmt(bound) + " violations=" +
              std::to_string(rate_violations) + "/" + std::to_string(fitted)};
}

Outcome equilibrium_consistency() {
  // Feasible regime.
  auto feas = model_a(5000, 10, 5);
  feas.t_end = 50.0;
  const auto pattern = make_pattern(feas, 0, 0);
  double worst_gap = 0.0, worst_min_x = NAN;
  std::size_t feasible_runs = 0, matched = 0;
  for (std::size_t t = 0; t < feas.trials_per_point; ++t) {
    const auto m = make_trial_matrix(feas, pattern, 3.0, 0, t);
    const auto lin = solve_feasibility(m);
    if (!lin.feasible) continue;
    ++feasible_runs;
    const auto rec = integrate_lv(m, std::vector<double>(feas.n, feas.x0), feas.t_end);
    double gap = rec.aborted ? INFINITY : 0.0;
    for (std::size_t k = 0; k < feas.n && !rec.aborted; ++k) {
      gap = std::max(gap, std::abs(rec.final_state[k] - lin.x[k]));
    }
    if (gap <= 1e-4) ++matched;
    if (gap > worst_gap) {
      worst_gap = gap;
      worst_min_x = lin.min_x;
    }
  }
  const bool feasible_ok = feasible_runs > 0 && matched == feasible_runs;

  // Subcritical regime: two routes to the saturated equilibrium.
  auto sub = model_a(2000, 16, 50);
  const auto sub_pattern = make_pattern(sub, 0, 0);
  SaturationOptions piv;
  SaturationOptions ode;
  ode.method = SaturationMethod::OdeLimit;
  std::size_t agree = 0, failures = 0;
  double survivor_fraction = 0.0;
  for (std::size_t t = 0; t < sub.trials_per_point; ++t) {
    const auto m = make_trial_matrix(sub, sub_pattern, 1.0, 0, t);
    try {
      const auto a = saturated_equilibrium(m, piv);
      const auto b = saturated_equilibrium(m, ode);
      survivor_fraction += double(a.survivors.size()) / double(sub.n);
      bool same = a.survivors == b.survivors;
      for (std::size_t k = 0; same && k < sub.n; ++k) {
        same = std::abs(a.x[k] - b.x[k]) <= 10.0 * piv.tol;
      }
      agree += same ? 1 : 0;
    } catch (const NumericalError&) {
      ++failures;
    }
  }
  const double agreement = double(agree) / double(sub.trials_per_point);
  const bool sub_ok = agreement >= 0.95;
  return {feasible_ok && sub_ok,
          "feasible: within 1e-4 at t=50 " + std::to_string(matched) + "/" +
              std::to_string(feasible_runs) + ", max |x(50)-x*|=" + fmt(worst_gap) +
              " (that trial min_x=" + fmt(worst_min_x) + "); subcritical agreement=" + fmt(agreement) + " (" +
              std::to_string(agree) + "/50, errors=" + std::to_string(failures) +
              ", mean survivor fraction=" + fmt(survivor_fraction / 50.0) + ")"};
}

Outcome abundance_moments() {
  auto cfg = model_a(2000, 16, 50);
  const auto res = run_abundance_histogram(cfg, 4.0, cfg.bins);
  const double scaled = res.variance * res.alpha * res.alpha;
  return {std::abs(res.mean - 1.0) < 0.01 && std::abs(scaled - 1.0) < 0.15,
          "mean=" + fmt(res.mean, 6) + " variance*alpha^2=" + fmt(scaled) +
              " diverged=" + std::to_string(res.diverged)};
}

Outcome determinism() {
  auto cfg = model_a(500, 10, 16);
  cfg.kappa_grid = {0.5, 2.0, 6.0};
  cfg.fix_pattern = false;
  cfg.t_end = 10.0;
  cfg.sample_count = 51;
  const auto render = [](SweepConfig c) {
    std::string out = sweep_csv(run_feasibility_sweep(c));
    out += histogram_csv(run_abundance_histogram(c, 4.0, 30));
    const auto dyn = run_dynamics_trace(c, 3.0);
    out += trajectory_csv(dyn.trajectory) + tracked_species_csv(dyn.trajectory);
    SweepConfig small = c;
    small.n = 100;
    small.trials_per_point = 6;
    const auto spec = run_spectrum_check(small, 6.0);
    out += spectrum_trials_csv(spec) + eigenvalues_csv(spec.sample_eigenvalues);
    SweepConfig tiny = c;
    tiny.n = 10;
    tiny.d = 2;
    tiny.trials_per_point = 40;
    out += gap_csv(run_gap_check(tiny));
    return out;
  };
  cfg.threads = 1;
  const auto first = render(cfg);
  const auto rerun = render(cfg);
  cfg.threads = 8;
  const auto eight = render(cfg);
  const bool ok = first == rerun && first == eight;
  return {ok, "bytes=" + std::to_string(first.size()) + " rerun identical=" +
                  (first == rerun ? "yes" : "no") + " 1-vs-8 workers identical=" +
                  (first == eight ? "yes" : "no")};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance checks"};
  int only = 0;
  app.add_option("--criterion", only, "run a single criterion (1-10)")
      ->check(CLI::Range(1, 10));
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria = {
      {1, "phase transition", phase_transition},
      {2, "solver correctness", solver_correctness},
      {3, "oracle equivalence", oracle_equivalence},
      {4, "gaussianity of Z", gaussianity},
      {5, "spectral norm envelope", norm_envelope},
      {6, "singular-value distinctness", singular_distinctness},
      {7, "stability and spectrum", stability_and_spectrum},
      {8, "equilibrium consistency", equilibrium_consistency},
      {9, "abundance moments", abundance_moments},
      {10, "determinism", determinism},
  };

  bool all = true;
  for (const auto& c : criteria) {
    if (only != 0 && c.id != only) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %2d %-28s %s  %s  (%.1fs)\n", c.id, c.name,
                o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
    std::fflush(stdout);
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
