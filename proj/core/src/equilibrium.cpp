#include "sparselv/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>

#include "sparselv/dynamics.hpp"
#include "sparselv/errors.hpp"
#include "sparselv/reports.hpp"

namespace sparselv {

namespace {

struct FixedPoint {
  std::vector<double> x;
  double residual = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

// Iterates x_S <- 1 + (M x)_S with x fixed to zero off the support. An empty
// support mask means every species.
FixedPoint fixed_point(const InteractionMatrix& m,
                       const std::vector<bool>& support,
                       const FeasibilityOptions& options) {
  const std::size_t n = m.n();
  const bool all = support.empty();
  const auto active = [&](std::size_t k) { return all || support[k]; };

  FixedPoint fp;
  fp.x.assign(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) fp.x[k] = active(k) ? 1.0 : 0.0;
  std::vector<double> mx(n);
  double previous = std::numeric_limits<double>::infinity();
  std::size_t growth = 0;

  for (std::size_t it = 0;; ++it) {
    m.matvec(fp.x, mx);
    double res = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      if (active(k)) res = std::max(res, std::abs(1.0 + mx[k] - fp.x[k]));
    }
    fp.residual = res;
    fp.iterations = it;
    if (!std::isfinite(res)) {
      throw DivergenceError("Neumann iteration overflowed after " +
                            std::to_string(it) + " iterations (||M|| >= 1)");
    }
    if (res <= options.tol) {
      fp.converged = true;
      return fp;
    }
    if (it == options.max_iterations) return fp;
    growth = res > previous ? growth + 1 : 0;
    if (growth >= options.divergence_window) {
      throw DivergenceError(
          "Neumann residual grew for " + std::to_string(growth) +
          " consecutive iterations (||M|| >= 1); residual = " +
          std::to_string(res));
    }
    previous = res;
    for (std::size_t k = 0; k < n; ++k) {
      if (active(k)) fp.x[k] = 1.0 + mx[k];
    }
  }
}

}  // namespace

EquilibriumReport solve_feasibility(const InteractionMatrix& m,
                                    const FeasibilityOptions& options) {
  if (!(options.tol > 0.0)) throw ConfigError("solve_feasibility: tol must be > 0");
  const std::size_t n = m.n();
  auto fp = fixed_point(m, {}, options);

  EquilibriumReport rep;
  rep.x = std::move(fp.x);
  rep.residual_inf = fp.residual;
  rep.iterations = fp.iterations;
  rep.converged = fp.converged;
  rep.alpha = m.alpha();
  rep.n = n;
  rep.d = m.d();
  rep.seed = m.seed();

  const std::vector<double> ones(n, 1.0);
  rep.z.assign(n, 0.0);
  m.unscaled_matvec(ones, rep.z);
  const double a = m.alpha();
  rep.r.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    rep.r[k] = a * a * (rep.x[k] - 1.0 - rep.z[k] / a);
  }
  const auto it = std::min_element(rep.x.begin(), rep.x.end());
  rep.argmin = static_cast<std::size_t>(it - rep.x.begin());
  rep.min_x = *it;
  rep.min_z = *std::min_element(rep.z.begin(), rep.z.end());
  rep.feasible = rep.min_x > 0.0;
  return rep;
}

double neumann_summand(const InteractionMatrix& m, std::size_t k,
                       std::size_t l) {
  if (l < 2) throw ConfigError("neumann_summand needs l >= 2");
  if (k >= m.n()) throw ConfigError("neumann_summand: index out of range");
  return neumann_summands(m, l).back()[k];
}

std::vector<std::vector<double>> neumann_summands(const InteractionMatrix& m,
                                                  std::size_t max_order) {
  if (max_order < 2) throw ConfigError("neumann_summands needs max_order >= 2");
  const std::size_t n = m.n();
  std::vector<double> v(n, 1.0), next(n);
  std::vector<std::vector<double>> out;
  out.reserve(max_order - 1);
  double inv_alpha_pow = 1.0;  // alpha^{2-l}
  for (std::size_t l = 1; l <= max_order; ++l) {
    m.unscaled_matvec(v, next);
    v.swap(next);
    if (l >= 2) {
      std::vector<double> rho(v);
      for (double& x : rho) x *= inv_alpha_pow;
      out.push_back(std::move(rho));
      inv_alpha_pow /= m.alpha();
    }
  }
  return out;
}

GumbelConstants gumbel_constants(std::size_t n) {
  if (n < 2) throw ConfigError("gumbel_constants needs n >= 2");
  GumbelConstants g;
  g.n = n;
  const double log_n = std::log(static_cast<double>(n));
  g.alpha_star = std::sqrt(2.0 * log_n);
  g.beta_star = g.alpha_star - std::log(4.0 * std::numbers::pi * log_n) /
                                   (2.0 * g.alpha_star);
  return g;
}

double extreme_value_stat(std::span<const double> z, const GumbelConstants& g) {
  if (z.size() != g.n) {
    throw ConfigError("extreme_value_stat: sample size differs from n");
  }
  const double min_z = *std::min_element(z.begin(), z.end());
  return g.alpha_star * (min_z + g.beta_star);
}

double gumbel_min_survival_limit(double x) { return std::exp(-std::exp(x)); }

std::string_view to_string(SaturationMethod method) {
  return method == SaturationMethod::Pivoting ? "pivoting" : "ode_limit";
}

namespace {

void finalize(const InteractionMatrix& m, SaturatedEquilibrium& eq,
              double tol) {
  const std::size_t n = m.n();
  std::vector<double> mx(n);
  m.matvec(eq.x, mx);
  eq.survivors.clear();
  eq.complementarity_residual = 0.0;
  eq.kkt_violation = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double growth = 1.0 - eq.x[k] + mx[k];
    eq.complementarity_residual =
        std::max(eq.complementarity_residual, std::abs(eq.x[k] * growth));
    if (eq.x[k] > 0.0) {
      eq.survivors.push_back(k);
    } else {
      eq.kkt_violation = std::max(eq.kkt_violation, std::max(0.0, growth));
    }
  }
  if (eq.complementarity_residual > tol || eq.kkt_violation > tol) {
    throw NumericalError(
        "saturated equilibrium (" + std::string(to_string(eq.method)) +
        ") fails the KKT check: complementarity " +
        format_number(eq.complementarity_residual) + ", invasion growth " +
        format_number(eq.kkt_violation) + " (tol " + format_number(tol) + ")");
  }
}

// Support extracted from the state: species at or above the cutoff survive.
// Abundances on that support come from the restricted linear solve. Returns
// false when the polished point is not a valid KKT point yet.
bool polish_support(const InteractionMatrix& m, std::span<const double> state,
                    const SaturationOptions& options, SaturatedEquilibrium& eq) {
  const std::size_t n = m.n();
  std::vector<bool> support(n);
  for (std::size_t k = 0; k < n; ++k) {
    support[k] = state[k] >= options.vanishing_cutoff;
  }
  FeasibilityOptions linear;
  linear.tol = std::min(1e-13, 1e-3 * options.tol);
  FixedPoint fp;
  try {
    fp = fixed_point(m, support, linear);
  } catch (const DivergenceError&) {
    return false;
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (support[k] && !(fp.x[k] > 0.0)) return false;
  }
  std::vector<double> mx(n);
  m.matvec(fp.x, mx);
  for (std::size_t k = 0; k < n; ++k) {
    if (!support[k] && 1.0 + mx[k] > options.tol) return false;
  }
  eq.x = std::move(fp.x);
  return true;
}

SaturatedEquilibrium ode_limit(const InteractionMatrix& m,
                               const SaturationOptions& options) {
  const std::size_t n = m.n();
  SaturatedEquilibrium eq;
  eq.method = SaturationMethod::OdeLimit;

  StepTolerances tolerances;
  tolerances.rel_tol = 1e-10;
  tolerances.abs_tol = 1e-13;
  LvIntegrator integrator(m, std::vector<double>(n, 0.5), tolerances);

  double t = 0.0;
  bool done = false;
  while (!done) {
    if (t >= options.max_time) {
      eq.warnings.push_back("ode_limit reached max_time without quiescence");
      break;
    }
    t = std::min(t + options.check_interval, options.max_time);
    if (!integrator.advance_to(t)) {
      throw NumericalError("ode_limit integration aborted: " +
                           integrator.diagnostic());
    }
    double field = 0.0;
    for (double f : integrator.derivative()) field = std::max(field, std::abs(f));
    // Quiescent state; the polish fails while a declining species is still
    // above the cutoff, in which case integration continues.
    if (field <= options.tol) done = polish_support(m, integrator.state(), options, eq);
  }
  eq.integration_time = integrator.time();
  if (!done) {
    const auto x = integrator.state();
    if (!polish_support(m, x, options, eq)) {
      eq.x.assign(x.begin(), x.end());
      for (double& v : eq.x) {
        if (v < options.vanishing_cutoff) v = 0.0;
      }
    }
  }
  finalize(m, eq, options.tol);
  return eq;
}

SaturatedEquilibrium pivoting(const InteractionMatrix& m,
                              const SaturationOptions& options) {
  const std::size_t n = m.n();
  SaturatedEquilibrium eq;
  eq.method = SaturationMethod::Pivoting;

  FeasibilityOptions linear;
  linear.tol = std::min(1e-13, 1e-3 * options.tol);

  std::vector<bool> support(n, true);
  std::set<std::vector<bool>> visited;
  const std::size_t max_rounds =
      options.max_rounds == 0 ? n + 16 : options.max_rounds;
  std::vector<double> mx(n);

  for (std::size_t round = 1; round <= max_rounds; ++round) {
    eq.rounds = round;
    if (!visited.insert(support).second) {
      auto fallback = ode_limit(m, options);
      fallback.fell_back = true;
      fallback.rounds = round;
      fallback.warnings.insert(fallback.warnings.begin(),
                               "support pivoting cycled; used ode_limit");
      return fallback;
    }
    auto fp = fixed_point(m, support, linear);
    if (!fp.converged) {
      eq.warnings.push_back("restricted solve stopped at residual " +
                            format_number(fp.residual));
    }
    bool dropped = false;
    for (std::size_t k = 0; k < n; ++k) {
      if (support[k] && fp.x[k] <= 0.0) {
        support[k] = false;
        dropped = true;
      }
    }
    if (dropped) continue;

    // Re-admit excluded species that could invade the current community.
    m.matvec(fp.x, mx);
    bool added = false;
    for (std::size_t k = 0; k < n; ++k) {
      if (!support[k] && 1.0 + mx[k] > options.tol) {
        support[k] = true;
        added = true;
      }
    }
    if (added) continue;

    eq.x = std::move(fp.x);
    finalize(m, eq, options.tol);
    return eq;
  }

  auto fallback = ode_limit(m, options);
  fallback.fell_back = true;
  fallback.warnings.insert(fallback.warnings.begin(),
                           "support pivoting hit the round limit; used ode_limit");
  return fallback;
}

}  // namespace

SaturatedEquilibrium saturated_equilibrium(const InteractionMatrix& m,
                                           const SaturationOptions& options) {
  if (!(options.tol > 0.0)) throw ConfigError("saturated_equilibrium: tol must be > 0");
  return options.method == SaturationMethod::Pivoting ? pivoting(m, options)
                                                      : ode_limit(m, options);
}

}  // namespace sparselv
