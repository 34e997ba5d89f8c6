#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sparselv/interaction.hpp"

namespace sparselv {

struct FeasibilityOptions {
  double tol = 1e-12;
  std::size_t max_iterations = 10000;
  /// Consecutive residual increases that count as divergence.
  std::size_t divergence_window = 20;
};

/// Solution of x = 1 + Mx with its Gaussian / remainder split
/// x_k = 1 + Z_k / alpha + R_k / alpha^2.
struct EquilibriumReport {
  std::vector<double> x;
  /// Z_k = e_k^T (Delta o A / sqrt(d)) 1.
  std::vector<double> z;
  /// R_k = alpha^2 (x_k - 1 - Z_k / alpha).
  std::vector<double> r;
  /// min_k x_k > 0 (strict; min_x = 0 counts as infeasible).
  bool feasible = false;
  double min_x = 0.0;
  std::size_t argmin = 0;
  double min_z = 0.0;
  /// ||x - 1 - Mx||_inf for the returned x.
  double residual_inf = 0.0;
  std::size_t iterations = 0;
  /// False when tol was not reached within max_iterations (partial report).
  bool converged = false;

  double alpha = 0.0;
  std::size_t n = 0;
  std::size_t d = 0;
  std::uint64_t seed = 0;
};

/// Neumann fixed-point iteration x <- 1 + Mx from x = 1. Throws
/// DivergenceError when the residual grows for divergence_window consecutive
/// iterations or becomes non-finite.
EquilibriumReport solve_feasibility(const InteractionMatrix& m,
                                    const FeasibilityOptions& options = {});

/// rho_{k,l} = e_k^T alpha^{2-l} (Delta o A / sqrt(d))^l 1, l >= 2.
double neumann_summand(const InteractionMatrix& m, std::size_t k,
                       std::size_t l);

/// All summands at once: result[l - 2][k] for l = 2..max_order.
std::vector<std::vector<double>> neumann_summands(const InteractionMatrix& m,
                                                  std::size_t max_order);

/// Normalizing constants for the minimum of n standard normals.
struct GumbelConstants {
  std::size_t n = 0;
  /// sqrt(2 log n)
  double alpha_star = 0.0;
  /// alpha* - log(4 pi log n) / (2 alpha*)
  double beta_star = 0.0;
};

/// Throws ConfigError for n < 2.
GumbelConstants gumbel_constants(std::size_t n);

/// alpha* (min_k Z_k + beta*).
double extreme_value_stat(std::span<const double> z, const GumbelConstants& g);

/// Limit of P(alpha* (min Z + beta*) >= x), which is exp(-e^{x}) (the
/// statistic is minus a max-Gumbel variable).
double gumbel_min_survival_limit(double x);

enum class SaturationMethod { Pivoting, OdeLimit };
std::string_view to_string(SaturationMethod method);

struct SaturationOptions {
  SaturationMethod method = SaturationMethod::Pivoting;
  /// Bound on complementarity residual and KKT violation.
  double tol = 1e-8;
  std::size_t max_rounds = 0;  // 0: n + 16
  /// ode_limit: species below this level are declared vanished.
  double vanishing_cutoff = 1e-6;
  /// ode_limit: integration horizon cap and check interval.
  double max_time = 1e5;
  double check_interval = 10.0;
};

struct SaturatedEquilibrium {
  std::vector<double> x;
  /// Indices with x_k > 0, ascending.
  std::vector<std::size_t> survivors;
  /// max_k |x_k (1 - x_k + (Mx)_k)|
  double complementarity_residual = 0.0;
  /// max over vanished k of max(0, 1 + (Mx)_k)
  double kkt_violation = 0.0;
  SaturationMethod method = SaturationMethod::Pivoting;
  /// Pivoting cycled and the ODE route produced the answer.
  bool fell_back = false;
  std::size_t rounds = 0;
  /// ode_limit: time integrated until quiescence.
  double integration_time = 0.0;
  std::vector<std::string> warnings;
};

/// Unique nonnegative solution of x_k (1 - x_k + (Mx)_k) = 0 with
/// nonpositive invasion growth for vanished species. Throws NumericalError
/// when the result fails the KKT check (typically ||M|| >= 1).
SaturatedEquilibrium saturated_equilibrium(const InteractionMatrix& m,
                                           const SaturationOptions& options = {});

}  // namespace sparselv
