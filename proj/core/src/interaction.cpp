#include "sparselv/interaction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "sparselv/dense.hpp"
#include "sparselv/errors.hpp"
#include "sparselv/rng.hpp"

namespace sparselv {

InteractionMatrix::InteractionMatrix(
    std::shared_ptr<const AdjacencyPattern> pattern,
    std::shared_ptr<const std::vector<double>> weights, double alpha,
    std::uint64_t seed)
    : pattern_(std::move(pattern)),
      weights_(std::move(weights)),
      alpha_(alpha),
      seed_(seed) {
  if (!pattern_) throw ConfigError("interaction matrix needs a pattern");
  if (!(alpha_ > 0.0) || !std::isfinite(alpha_)) {
    throw ConfigError("alpha must be positive and finite");
  }
  if (pattern_->d() == 0) throw ConfigError("pattern degree must be >= 1");
  if (weights_->size() != pattern_->nnz()) {
    throw ConfigError("weight count " + std::to_string(weights_->size()) +
                      " differs from pattern nnz " +
                      std::to_string(pattern_->nnz()));
  }
  const double sqrt_d = std::sqrt(static_cast<double>(pattern_->d()));
  unit_scale_ = 1.0 / sqrt_d;
  scale_ = 1.0 / (alpha_ * sqrt_d);
}

InteractionMatrix InteractionMatrix::assemble(
    std::shared_ptr<const AdjacencyPattern> pattern, double alpha,
    std::uint64_t seed) {
  if (!pattern) throw ConfigError("interaction matrix needs a pattern");
  auto weights = std::make_shared<std::vector<double>>(pattern->nnz());
  for (std::size_t p = 0; p < weights->size(); ++p) {
    (*weights)[p] = gaussian_at(seed, p);
  }
  return InteractionMatrix(std::move(pattern), std::move(weights), alpha, seed);
}

InteractionMatrix InteractionMatrix::from_weights(
    std::shared_ptr<const AdjacencyPattern> pattern,
    std::vector<double> weights, double alpha) {
  return InteractionMatrix(
      std::move(pattern),
      std::make_shared<const std::vector<double>>(std::move(weights)), alpha,
      0);
}

InteractionMatrix InteractionMatrix::with_alpha(double alpha) const {
  return InteractionMatrix(pattern_, weights_, alpha, seed_);
}

double InteractionMatrix::entry(std::size_t i, std::size_t j) const {
  const auto offsets = pattern_->row_offsets();
  const auto cols = pattern_->columns();
  const auto first = cols.begin() + static_cast<std::ptrdiff_t>(offsets[i]);
  const auto last = cols.begin() + static_cast<std::ptrdiff_t>(offsets[i + 1]);
  const auto it = std::lower_bound(first, last, j);
  if (it == last || *it != j) return 0.0;
  return (*weights_)[static_cast<std::size_t>(it - cols.begin())] * scale_;
}

void InteractionMatrix::apply(double factor, std::span<const double> v,
                              std::span<double> out) const {
  const std::size_t n = pattern_->n();
  if (v.size() != n || out.size() != n) {
    throw ConfigError("matvec dimension mismatch: matrix is " +
                      std::to_string(n) + ", vectors are " +
                      std::to_string(v.size()) + " and " +
                      std::to_string(out.size()));
  }
  const auto offsets = pattern_->row_offsets();
  const auto cols = pattern_->columns();
  const auto& w = *weights_;
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t p = offsets[i]; p < offsets[i + 1]; ++p) {
      acc += w[p] * v[cols[p]];
    }
    out[i] = acc * factor;
  }
}

void InteractionMatrix::apply_transpose(double factor,
                                        std::span<const double> v,
                                        std::span<double> out) const {
  const std::size_t n = pattern_->n();
  if (v.size() != n || out.size() != n) {
    throw ConfigError("transpose matvec dimension mismatch");
  }
  const auto offsets = pattern_->row_offsets();
  const auto cols = pattern_->columns();
  const auto& w = *weights_;
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double vi = v[i];
    for (std::size_t p = offsets[i]; p < offsets[i + 1]; ++p) {
      out[cols[p]] += w[p] * vi;
    }
  }
  for (double& x : out) x *= factor;
}

void InteractionMatrix::matvec(std::span<const double> v,
                               std::span<double> out) const {
  apply(scale_, v, out);
}

std::vector<double> InteractionMatrix::matvec(std::span<const double> v) const {
  std::vector<double> out(n());
  apply(scale_, v, out);
  return out;
}

void InteractionMatrix::transpose_matvec(std::span<const double> v,
                                         std::span<double> out) const {
  apply_transpose(scale_, v, out);
}

void InteractionMatrix::unscaled_matvec(std::span<const double> v,
                                        std::span<double> out) const {
  apply(unit_scale_, v, out);
}

void InteractionMatrix::unscaled_transpose_matvec(std::span<const double> v,
                                                  std::span<double> out) const {
  apply_transpose(unit_scale_, v, out);
}

std::vector<double> InteractionMatrix::dense(bool unscaled) const {
  const std::size_t n = pattern_->n();
  const double factor = unscaled ? unit_scale_ : scale_;
  std::vector<double> out(n * n, 0.0);
  const auto offsets = pattern_->row_offsets();
  const auto cols = pattern_->columns();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t p = offsets[i]; p < offsets[i + 1]; ++p) {
      out[i * n + cols[p]] = (*weights_)[p] * factor;
    }
  }
  return out;
}

namespace {

double norm2(std::span<const double> v) {
  return std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
}

double consecutive_min_gap(std::span<const double> descending) {
  if (descending.size() < 2) return std::numeric_limits<double>::infinity();
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < descending.size(); ++i) {
    gap = std::min(gap, descending[i - 1] - descending[i]);
  }
  return gap;
}

}  // namespace

SpectralReport spectral_norm(const InteractionMatrix& m,
                             const SpectralOptions& options) {
  if (!(options.tol > 0.0)) throw ConfigError("spectral_norm: tol must be > 0");
  const std::size_t n = m.n();
  const auto forward = [&](std::span<const double> v, std::span<double> out) {
    options.unscaled ? m.unscaled_matvec(v, out) : m.matvec(v, out);
  };
  const auto backward = [&](std::span<const double> v, std::span<double> out) {
    options.unscaled ? m.unscaled_transpose_matvec(v, out)
                     : m.transpose_matvec(v, out);
  };

  SpectralReport report;
  std::vector<double> v(n, 1.0 / std::sqrt(static_cast<double>(n)));
  std::vector<double> w(n), u(n);
  double theta = 0.0;
  double previous = 0.0;

  for (std::size_t it = 1; it <= options.max_iterations; ++it) {
    report.iterations = it;
    forward(v, w);
    backward(w, u);
    const double wn = norm2(w);
    theta = wn * wn;
    const double un = norm2(u);
    if (un == 0.0) {
      // v sits in the kernel: either C = 0 or an unlucky start.
      if (report.restarted) {
        theta = 0.0;
        report.converged = true;
        break;
      }
      report.restarted = true;
      CounterStream rng(options.restart_seed);
      for (double& x : v) x = rng.gaussian();
      const double vn = norm2(v);
      for (double& x : v) x /= vn;
      previous = 0.0;
      continue;
    }
    double residual = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = u[i] - theta * v[i];
      residual += r * r;
    }
    report.tolerance_achieved = std::sqrt(residual) / theta;
    for (std::size_t i = 0; i < n; ++i) v[i] = u[i] / un;
    if (it > 1 && std::abs(theta - previous) <= options.tol * theta) {
      report.converged = true;
      break;
    }
    previous = theta;
  }

  report.spectral_norm = std::sqrt(theta);
  const double raw_norm = options.unscaled
                              ? report.spectral_norm
                              : report.spectral_norm * m.alpha();
  report.norm_bound_holds = raw_norm < kNormEnvelope;
  report.min_gap = std::numeric_limits<double>::quiet_NaN();
  if (options.full_spectrum && n <= options.dense_limit) {
    report.singular_values =
        dense::singular_values(m.dense(options.unscaled), n);
    report.min_gap = consecutive_min_gap(report.singular_values);
  }
  return report;
}

double singular_gap(const InteractionMatrix& m, std::size_t dense_limit) {
  const std::size_t n = m.n();
  if (n > dense_limit) {
    throw ConfigError("singular_gap: n = " + std::to_string(n) +
                      " exceeds the dense limit " +
                      std::to_string(dense_limit));
  }
  std::vector<double> raw(n * n, 0.0);
  const auto& p = m.pattern();
  const auto offsets = p.row_offsets();
  const auto cols = p.columns();
  const auto w = m.weights();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = offsets[i]; k < offsets[i + 1]; ++k) {
      raw[i * n + cols[k]] = w[k];
    }
  }
  const auto s = dense::singular_values(raw, n);
  return consecutive_min_gap(s);
}

}  // namespace sparselv
