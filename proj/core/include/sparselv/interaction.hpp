#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "sparselv/graph_patterns.hpp"

namespace sparselv {

/// Envelope for ||Delta o A / sqrt(d)|| that holds with probability -> 1.
inline constexpr double kNormEnvelope = 22.0;

/// M = (Delta o A) / (alpha sqrt(d)). The raw Gaussian weights A_ij are kept
/// apart from the scale so that an alpha sweep reuses one draw.
class InteractionMatrix {
 public:
  /// One standard-Gaussian weight per pattern position; weight number p (in
  /// canonical row-major order) is gaussian_at(seed, p).
  static InteractionMatrix assemble(
      std::shared_ptr<const AdjacencyPattern> pattern, double alpha,
      std::uint64_t seed);

  /// Explicit weights, one per pattern position (tests and degenerate runs).
  static InteractionMatrix from_weights(
      std::shared_ptr<const AdjacencyPattern> pattern,
      std::vector<double> weights, double alpha);

  /// Same pattern and weights, different alpha.
  InteractionMatrix with_alpha(double alpha) const;

  std::size_t n() const noexcept { return pattern_->n(); }
  std::size_t d() const noexcept { return pattern_->d(); }
  double alpha() const noexcept { return alpha_; }
  /// 1 / (alpha sqrt(d)).
  double scale() const noexcept { return scale_; }
  /// 1 / sqrt(d), the scale of Delta o A / sqrt(d).
  double unscaled_factor() const noexcept { return unit_scale_; }
  std::uint64_t seed() const noexcept { return seed_; }
  const AdjacencyPattern& pattern() const noexcept { return *pattern_; }
  const std::shared_ptr<const AdjacencyPattern>& pattern_ptr() const noexcept {
    return pattern_;
  }
  std::span<const double> weights() const noexcept { return *weights_; }

  /// Realized entry M_ij.
  double entry(std::size_t i, std::size_t j) const;

  /// out = M v.
  void matvec(std::span<const double> v, std::span<double> out) const;
  std::vector<double> matvec(std::span<const double> v) const;
  /// out = M^T v.
  void transpose_matvec(std::span<const double> v, std::span<double> out) const;
  /// out = (Delta o A / sqrt(d)) v, i.e. alpha * M v.
  void unscaled_matvec(std::span<const double> v, std::span<double> out) const;
  void unscaled_transpose_matvec(std::span<const double> v,
                                 std::span<double> out) const;

  /// Row-major dense expansion of M (or of Delta o A / sqrt(d)).
  std::vector<double> dense(bool unscaled = false) const;

 private:
  InteractionMatrix(std::shared_ptr<const AdjacencyPattern> pattern,
                    std::shared_ptr<const std::vector<double>> weights,
                    double alpha, std::uint64_t seed);

  void apply(double factor, std::span<const double> v,
             std::span<double> out) const;
  void apply_transpose(double factor, std::span<const double> v,
                       std::span<double> out) const;

  std::shared_ptr<const AdjacencyPattern> pattern_;
  std::shared_ptr<const std::vector<double>> weights_;
  double alpha_;
  double scale_;
  double unit_scale_;
  std::uint64_t seed_;
};

struct SpectralOptions {
  /// Norm of Delta o A / sqrt(d) instead of M.
  bool unscaled = false;
  double tol = 1e-10;
  std::size_t max_iterations = 10000;
  /// Compute the dense singular spectrum (and min_gap) when n <= dense_limit.
  bool full_spectrum = false;
  std::size_t dense_limit = 256;
  /// Seed of the single random restart used on stagnation.
  std::uint64_t restart_seed = 0x5EED5EEDULL;
};

struct SpectralReport {
  double spectral_norm = 0.0;
  /// Descending; empty unless a dense spectrum was computed.
  std::vector<double> singular_values;
  /// Smallest consecutive gap, +inf for a single value, NaN if not computed.
  double min_gap = 0.0;
  bool norm_bound_holds = true;
  std::size_t iterations = 0;
  /// Relative residual ||C^T C v - s^2 v|| / s^2 at the returned vector.
  double tolerance_achieved = 0.0;
  bool converged = false;
  bool restarted = false;
};

/// Largest singular value by power iteration on the hermitization, i.e.
/// alternating products with C and C^T from the normalized all-ones vector.
SpectralReport spectral_norm(const InteractionMatrix& m,
                             const SpectralOptions& options = {});

/// Minimal gap between consecutive singular values of Delta o A (raw
/// weights). Throws ConfigError when n exceeds dense_limit.
double singular_gap(const InteractionMatrix& m, std::size_t dense_limit = 512);

}  // namespace sparselv
