#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace sparselv::stats {

double normal_cdf(double x);

double mean(std::span<const double> xs);
/// Unbiased sample variance (n - 1 denominator); 0 for fewer than 2 values.
double variance(std::span<const double> xs);

/// sup_x |F_n(x) - F(x)|. Sorts a copy of the sample.
double ks_statistic(std::span<const double> sample,
                    const std::function<double(double)>& cdf);

/// Asymptotic Kolmogorov tail P(D_n >= d) with the Stephens small-sample
/// correction lambda = (sqrt(n) + 0.12 + 0.11 / sqrt(n)) d.
double ks_pvalue(double d, std::size_t n);

/// Least-squares slope of y against x.
double linear_slope(std::span<const double> x, std::span<const double> y);

struct Histogram {
  double lower = 0.0;
  double upper = 0.0;
  std::vector<std::size_t> counts;
  std::size_t total = 0;

  double bin_width() const {
    return counts.empty() ? 0.0
                          : (upper - lower) / static_cast<double>(counts.size());
  }
};

/// Equal-width bins over [min, max] of the sample; the top edge is closed.
/// A zero-width range collapses into a single bin.
Histogram histogram(std::span<const double> xs, std::size_t bins);

}  // namespace sparselv::stats
