#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <vector>

#include "oracles.hpp"
#include "sparselv/equilibrium.hpp"
#include "sparselv/errors.hpp"

using namespace sparselv;

namespace {

std::shared_ptr<const AdjacencyPattern> share(AdjacencyPattern p) {
  return std::make_shared<const AdjacencyPattern>(std::move(p));
}

InteractionMatrix swap_matrix(double c) {
  auto p = share(block_permutation_pattern(2, 1, Permutation({1, 0})));
  return InteractionMatrix::from_weights(p, {c, c}, 1.0);
}

}  // namespace

TEST(SolveFeasibility, ZeroMatrixGivesOnes) {
  auto p = share(general_regular_pattern(20, 4, 1));
  const auto m = InteractionMatrix::from_weights(p, std::vector<double>(p->nnz(), 0.0), 2.0);
  const auto r = solve_feasibility(m);
  EXPECT_TRUE(r.feasible);
  EXPECT_TRUE(r.converged);
  for (std::size_t k = 0; k < 20; ++k) {
    EXPECT_EQ(r.x[k], 1.0);
    EXPECT_EQ(r.z[k], 0.0);
    EXPECT_EQ(r.r[k], 0.0);
  }
}

TEST(SolveFeasibility, TwoByTwoAnalytic) {
  const auto r = solve_feasibility(swap_matrix(0.3));
  // |x - x*| <= residual / (1 - 0.3).
  EXPECT_NEAR(r.x[0], 1.0 / 0.7, r.residual_inf / 0.7 + 1e-15);
  EXPECT_NEAR(r.x[1], 1.0 / 0.7, r.residual_inf / 0.7 + 1e-15);
  EXPECT_TRUE(r.feasible);
}

TEST(SolveFeasibility, MatchesDenseOracleAndDecomposition) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto p = share(general_regular_pattern(30, 4, seed));
    const double alpha = std::sqrt(3.0 * std::log(30.0));
    const auto m = InteractionMatrix::assemble(p, alpha, seed + 100);
    const auto r = solve_feasibility(m);
    const Eigen::VectorXd x = oracle::solve_equilibrium(oracle::dense_m(m));
    const Eigen::VectorXd z = oracle::dense_m(m, true) * Eigen::VectorXd::Ones(30);
    for (std::size_t k = 0; k < 30; ++k) {
      EXPECT_NEAR(r.x[k], x[long(k)], 1e-10 * std::abs(x[long(k)]));
      EXPECT_NEAR(r.z[k], z[long(k)], 1e-12);
      EXPECT_NEAR(r.x[k], 1.0 + r.z[k] / alpha + r.r[k] / (alpha * alpha), 1e-12);
    }
    EXPECT_LE(r.residual_inf, 1e-12);
    const auto it = std::min_element(r.x.begin(), r.x.end());
    EXPECT_EQ(r.min_x, *it);
    EXPECT_EQ(r.argmin, static_cast<std::size_t>(it - r.x.begin()));
    EXPECT_EQ(r.min_z, *std::min_element(r.z.begin(), r.z.end()));
    EXPECT_EQ(r.feasible, r.min_x > 0.0);
  }
}

TEST(SolveFeasibility, DivergenceIsSignalled) {
  // Spectral radius 2: the Neumann series cannot converge.
  EXPECT_THROW(solve_feasibility(swap_matrix(2.0)), DivergenceError);
  auto p = share(full_pattern(40));
  const auto m = InteractionMatrix::assemble(p, 0.05, 1);
  EXPECT_THROW(solve_feasibility(m), DivergenceError);
}

TEST(SolveFeasibility, PartialReportWhenBudgetRunsOut) {
  FeasibilityOptions opts;
  opts.max_iterations = 3;
  const auto r = solve_feasibility(swap_matrix(0.9), opts);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.iterations, 3u);
  EXPECT_GT(r.residual_inf, opts.tol);
}

TEST(SolveFeasibility, ZeroMinimumCountsAsInfeasible) {
  // x = 1 + Mx with x_0 = 0 exactly: M = [[0, -1], [0, 0]] gives x = (0, 1).
  auto p = share(AdjacencyPattern::from_rows(2, 1, PatternModel::GeneralRegular, 0, {{1}, {}}));
  const auto r = solve_feasibility(InteractionMatrix::from_weights(p, {-1.0}, 1.0));
  EXPECT_EQ(r.min_x, 0.0);
  EXPECT_FALSE(r.feasible);
}

TEST(NeumannSummands, ZeroMatrix) {
  auto p = share(general_regular_pattern(10, 3, 1));
  const auto m = InteractionMatrix::from_weights(p, std::vector<double>(p->nnz(), 0.0), 2.0);
  for (const auto& level : neumann_summands(m, 6)) {
    for (double v : level) EXPECT_EQ(v, 0.0);
  }
}

TEST(NeumannSummands, AllOnesFullPattern) {
  auto p = share(full_pattern(4));
  const auto m = InteractionMatrix::from_weights(p, std::vector<double>(16, 1.0), 3.0);
  // (J / 2)^2 1 = 4 * 1; alpha^0 leaves it unchanged.
  for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(neumann_summand(m, k, 2), 4.0, 1e-12);
  // Order 3: alpha^{-1} (J/2)^3 1 = 8 / 3.
  EXPECT_NEAR(neumann_summand(m, 1, 3), 8.0 / 3.0, 1e-12);
}

TEST(NeumannSummands, PartialSumsApproachRemainder) {
  auto p = share(general_regular_pattern(24, 4, 5));
  const double alpha = std::sqrt(8.0 * std::log(24.0));
  const auto m = InteractionMatrix::assemble(p, alpha, 3);
  const auto r = solve_feasibility(m);
  const auto dense = oracle::dense_m(m);
  const double q = oracle::singular_values(dense)[0];
  ASSERT_LT(q, 1.0);
  const auto rho = neumann_summands(m, 40);
  for (std::size_t L : {5u, 10u, 20u, 40u}) {
    const double tail = alpha * alpha * std::sqrt(24.0) * std::pow(q, double(L + 1)) / (1.0 - q);
    for (std::size_t k = 0; k < 24; ++k) {
      double partial = 0.0;
      for (std::size_t l = 2; l <= L; ++l) partial += rho[l - 2][k];
      EXPECT_LE(std::abs(partial - r.r[k]), tail + 1e-9) << "L=" << L << " k=" << k;
    }
  }
}

TEST(NeumannSummands, MatchesDenseMatrixPowers) {
  auto p = share(general_regular_pattern(16, 3, 2));
  const double alpha = 2.5;
  const auto m = InteractionMatrix::assemble(p, alpha, 8);
  const Eigen::MatrixXd c = oracle::dense_m(m, true);
  Eigen::VectorXd v = Eigen::VectorXd::Ones(16);
  const auto rho = neumann_summands(m, 6);
  v = c * v;
  for (std::size_t l = 2; l <= 6; ++l) {
    v = c * v;
    const double factor = std::pow(alpha, 2.0 - double(l));
    for (std::size_t k = 0; k < 16; ++k) {
      EXPECT_NEAR(rho[l - 2][k], factor * v[long(k)], 1e-12);
      EXPECT_NEAR(neumann_summand(m, k, l), rho[l - 2][k], 1e-12);
    }
  }
}

TEST(Gumbel, ConstantsMatchClosedForms) {
  EXPECT_NEAR(std::log(15000.0), 9.61, 0.01);
  const auto g = gumbel_constants(15000);
  EXPECT_NEAR(g.alpha_star, oracle::alpha_star(15000.0), 1e-14);
  EXPECT_NEAR(g.alpha_star, 4.38539, 1e-5);
  EXPECT_NEAR(g.beta_star, oracle::beta_star(15000.0), 1e-14);
  EXPECT_NEAR(gumbel_constants(8).alpha_star, std::sqrt(6.0 * std::log(2.0)), 1e-14);
  EXPECT_NEAR(gumbel_constants(8).alpha_star, 2.0393, 1e-4);
  EXPECT_THROW(gumbel_constants(1), ConfigError);
}

TEST(Gumbel, ExtremeValueStatisticPlugIn) {
  const auto g = gumbel_constants(10);
  const std::vector<double> zeros(10, 0.0);
  EXPECT_NEAR(extreme_value_stat(zeros, g), g.alpha_star * g.beta_star, 1e-14);
  const auto g3 = gumbel_constants(3);
  const std::vector<double> at_shift = {1.0, -g3.beta_star, 2.0};
  EXPECT_NEAR(extreme_value_stat(at_shift, g3), 0.0, 1e-14);
  EXPECT_THROW(extreme_value_stat(at_shift, g), ConfigError);
}

TEST(Gumbel, SurvivalLimit) {
  EXPECT_NEAR(gumbel_min_survival_limit(0.0), std::exp(-1.0), 1e-15);
  EXPECT_NEAR(gumbel_min_survival_limit(1.0), std::exp(-std::exp(1.0)), 1e-15);
  EXPECT_GT(gumbel_min_survival_limit(-1.0), gumbel_min_survival_limit(0.0));
}

TEST(Remainder, NormalizedMaximumShrinksWithN) {
  double previous = INFINITY;
  for (std::size_t n : {500u, 1000u, 2000u, 4000u}) {
    const double alpha = 2.0 * std::sqrt(2.0 * std::log(double(n)));
    double sum = 0.0;
    const int trials = 200;
    for (int t = 0; t < trials; ++t) {
      auto p = share(general_regular_pattern(n, 8, std::uint64_t(t)));
      const auto r = solve_feasibility(InteractionMatrix::assemble(p, alpha, std::uint64_t(1000 + t)));
      double mx = 0.0;
      for (double v : r.r) mx = std::max(mx, std::abs(v));
      sum += mx / (alpha * std::sqrt(2.0 * std::log(double(n))));
    }
    const double mean = sum / trials;
    EXPECT_LT(mean, previous) << "n=" << n;
    previous = mean;
  }
}
