#include "sparselv/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "sparselv/dense.hpp"
#include "sparselv/errors.hpp"
#include "sparselv/rng.hpp"
#include "sparselv/statistics.hpp"

namespace sparselv {

void lv_field(const InteractionMatrix& m, std::span<const double> x,
              std::span<double> out) {
  m.matvec(x, out);
  for (std::size_t k = 0; k < x.size(); ++k) {
    out[k] = x[k] * (1.0 - x[k] + out[k]);
  }
}

// ---------------------------------------------------------------------------
// Dormand-Prince 5(4)

namespace dp {
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// Fifth minus embedded fourth order weights.
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
}  // namespace dp

LvIntegrator::LvIntegrator(const InteractionMatrix& m, std::vector<double> x0,
                           const StepTolerances& tolerances)
    : m_(&m), tol_(tolerances), x_(std::move(x0)), h_(tolerances.initial_step) {
  const std::size_t n = m.n();
  if (x_.size() != n) throw ConfigError("initial state has wrong dimension");
  if (!(tol_.rel_tol > 0.0) || !(tol_.abs_tol > 0.0)) {
    throw ConfigError("integrator tolerances must be positive");
  }
  for (auto* v : {&f_, &k2_, &k3_, &k4_, &k5_, &k6_, &k7_, &stage_, &trial_}) {
    v->assign(n, 0.0);
  }
  lv_field(m, x_, f_);
}

bool LvIntegrator::advance_to(double t_target) {
  using namespace dp;
  const std::size_t n = x_.size();
  const InteractionMatrix& m = *m_;
  const double eps = std::numeric_limits<double>::epsilon();

  while (t_ < t_target) {
    if (accepted_ + rejected_ >= tol_.max_steps) {
      diagnostic_ = "step budget exhausted at t = " + std::to_string(t_);
      return false;
    }
    if (h_ < 16.0 * eps * std::max(1.0, std::abs(t_))) {
      diagnostic_ = "step size underflow at t = " + std::to_string(t_) +
                    " (h = " + std::to_string(h_) + ")";
      return false;
    }
    const double remaining = t_target - t_;
    const bool clipped = h_ >= remaining;
    const double h = clipped ? remaining : h_;

    for (std::size_t i = 0; i < n; ++i) stage_[i] = x_[i] + h * a21 * f_[i];
    lv_field(m, stage_, k2_);
    for (std::size_t i = 0; i < n; ++i) {
      stage_[i] = x_[i] + h * (a31 * f_[i] + a32 * k2_[i]);
    }
    lv_field(m, stage_, k3_);
    for (std::size_t i = 0; i < n; ++i) {
      stage_[i] = x_[i] + h * (a41 * f_[i] + a42 * k2_[i] + a43 * k3_[i]);
    }
    lv_field(m, stage_, k4_);
    for (std::size_t i = 0; i < n; ++i) {
      stage_[i] = x_[i] + h * (a51 * f_[i] + a52 * k2_[i] + a53 * k3_[i] +
                               a54 * k4_[i]);
    }
    lv_field(m, stage_, k5_);
    for (std::size_t i = 0; i < n; ++i) {
      stage_[i] = x_[i] + h * (a61 * f_[i] + a62 * k2_[i] + a63 * k3_[i] +
                               a64 * k4_[i] + a65 * k5_[i]);
    }
    lv_field(m, stage_, k6_);
    bool negative = false;
    for (std::size_t i = 0; i < n; ++i) {
      trial_[i] = x_[i] + h * (b1 * f_[i] + b3 * k3_[i] + b4 * k4_[i] +
                               b5 * k5_[i] + b6 * k6_[i]);
      negative = negative || !(trial_[i] >= 0.0);
    }
    if (negative) {
      ++rejected_;
      h_ = 0.5 * h;
      continue;
    }
    lv_field(m, trial_, k7_);

    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double e = h * (e1 * f_[i] + e3 * k3_[i] + e4 * k4_[i] +
                            e5 * k5_[i] + e6 * k6_[i] + e7 * k7_[i]);
      const double sc =
          tol_.abs_tol + tol_.rel_tol * std::max(std::abs(x_[i]),
                                                 std::abs(trial_[i]));
      err += (e / sc) * (e / sc);
    }
    err = std::sqrt(err / static_cast<double>(n));
    if (!std::isfinite(err)) {
      ++rejected_;
      h_ = 0.5 * h;
      continue;
    }

    const double fac =
        err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
    if (err <= 1.0) {
      ++accepted_;
      t_ = clipped ? t_target : t_ + h;
      x_.swap(trial_);
      f_.swap(k7_);
      // A step shortened to hit a sample time says nothing about the
      // controller's step, so keep the larger one.
      if (!(clipped && fac >= 1.0)) h_ = h * fac;
    } else {
      ++rejected_;
      h_ = h * std::max(0.2, fac);
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Trajectories

namespace {

double sup_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s = std::max(s, std::abs(x));
  return s;
}

}  // namespace

TrajectoryRecord integrate_lv(const InteractionMatrix& m,
                              std::span<const double> x0, double t_end,
                              const IntegrationControls& controls) {
  const std::size_t n = m.n();
  if (x0.size() != n) throw ConfigError("x0 has wrong dimension");
  if (!(t_end > 0.0)) throw ConfigError("t_end must be positive");
  if (std::any_of(x0.begin(), x0.end(), [](double v) { return !(v > 0.0); })) {
    throw ConfigError("x0 must be strictly positive");
  }
  if (controls.sample_count < 2) throw ConfigError("sample_count must be >= 2");
  for (std::size_t s : controls.tracked_species) {
    if (s >= n) throw ConfigError("tracked species index out of range");
  }
  if (controls.reference && controls.reference->size() != n) {
    throw ConfigError("reference equilibrium has wrong dimension");
  }

  TrajectoryRecord rec;
  rec.tracked_species = controls.tracked_species;

  // Map every requested snapshot to its nearest sample.
  const std::size_t samples = controls.sample_count;
  const double dt = t_end / static_cast<double>(samples - 1);
  std::vector<std::size_t> snapshot_samples;
  for (double ts : controls.snapshot_times) {
    const double clamped = std::clamp(ts, 0.0, t_end);
    snapshot_samples.push_back(
        static_cast<std::size_t>(std::llround(clamped / dt)));
  }

  StepTolerances tol;
  tol.rel_tol = controls.rel_tol;
  tol.abs_tol = controls.abs_tol;
  LvIntegrator integrator(m, std::vector<double>(x0.begin(), x0.end()), tol);

  const auto record = [&](std::size_t s) {
    const auto x = integrator.state();
    rec.times.push_back(integrator.time());
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    rec.min_series.push_back(*lo);
    rec.max_series.push_back(*hi);
    rec.mean_series.push_back(stats::mean(x));
    if (controls.reference) {
      double dist = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        dist = std::max(dist, std::abs(x[k] - (*controls.reference)[k]));
      }
      rec.distance_series.push_back(dist);
    }
    if (!rec.tracked_species.empty()) {
      std::vector<double> row;
      row.reserve(rec.tracked_species.size());
      for (std::size_t k : rec.tracked_species) row.push_back(x[k]);
      rec.tracked_series.push_back(std::move(row));
    }
    for (std::size_t j = 0; j < snapshot_samples.size(); ++j) {
      if (snapshot_samples[j] == s) {
        rec.snapshot_times.push_back(integrator.time());
        rec.snapshots.emplace_back(x.begin(), x.end());
      }
    }
  };

  record(0);
  for (std::size_t s = 1; s < samples; ++s) {
    const double target = s + 1 == samples ? t_end : dt * static_cast<double>(s);
    if (!integrator.advance_to(target)) {
      rec.aborted = true;
      rec.diagnostic = integrator.diagnostic();
      break;
    }
    record(s);
  }

  const auto x = integrator.state();
  rec.final_state.assign(x.begin(), x.end());
  rec.final_derivative_norm = sup_norm(integrator.derivative());
  rec.converged = !rec.aborted && rec.final_derivative_norm < controls.abs_tol;
  rec.accepted_steps = integrator.accepted_steps();
  rec.rejected_steps = integrator.rejected_steps();
  return rec;
}

// ---------------------------------------------------------------------------
// Spectra

SpectrumReport jacobian_spectrum(const InteractionMatrix& m,
                                 std::span<const double> x,
                                 std::size_t dense_limit) {
  const std::size_t n = m.n();
  if (n > dense_limit) {
    throw ConfigError("jacobian_spectrum: n = " + std::to_string(n) +
                      " exceeds the dense limit " +
                      std::to_string(dense_limit));
  }
  if (x.size() != n) throw ConfigError("state has wrong dimension");
  if (std::any_of(x.begin(), x.end(), [](double v) { return !(v > 0.0); })) {
    throw ConfigError("jacobian_spectrum needs a strictly positive state");
  }

  auto jac = m.dense();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double& e = jac[i * n + j];
      e = x[i] * (e - (i == j ? 1.0 : 0.0));
    }
  }

  SpectrumReport report;
  report.eigenvalues = dense::eigenvalues(jac, n);
  report.max_real_part = -std::numeric_limits<double>::infinity();
  std::vector<double> sorted(x.begin(), x.end());
  std::sort(sorted.begin(), sorted.end());
  for (const auto& lambda : report.eigenvalues) {
    report.max_real_part = std::max(report.max_real_part, lambda.real());
    const double target = -lambda.real();
    const auto it = std::lower_bound(sorted.begin(), sorted.end(), target);
    double best = std::numeric_limits<double>::infinity();
    if (it != sorted.end()) best = std::hypot(*it - target, lambda.imag());
    if (it != sorted.begin()) {
      best = std::min(best, std::hypot(*std::prev(it) - target, lambda.imag()));
    }
    report.localization_error = std::max(report.localization_error, best);
  }
  const double alpha_star = std::sqrt(2.0 * std::log(static_cast<double>(n)));
  report.stability_margin_bound = -(1.0 - alpha_star / m.alpha());
  return report;
}

StabilityCertificate stability_certificate(const InteractionMatrix& m,
                                           double tol,
                                           std::size_t max_iterations) {
  const std::size_t n = m.n();
  StabilityCertificate cert;

  // Gershgorin: every row of |M + M^T| sums to at most row + column sums.
  std::vector<double> abs_sum(n, 0.0);
  const auto offsets = m.pattern().row_offsets();
  const auto cols = m.pattern().columns();
  const auto w = m.weights();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t p = offsets[i]; p < offsets[i + 1]; ++p) {
      const double a = std::abs(w[p]) * m.scale();
      abs_sum[i] += a;
      abs_sum[cols[p]] += a;
    }
  }
  const double shift = *std::max_element(abs_sum.begin(), abs_sum.end());
  if (shift == 0.0) {
    cert.sym_max_eig = 0.0;
    cert.vl_stable_proxy = true;
    return cert;
  }

  CounterStream rng(0xC3A7ULL);
  std::vector<double> v(n), y(n), t(n);
  for (double& x : v) x = rng.gaussian();
  double vn = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
  for (double& x : v) x /= vn;

  double theta = 0.0;
  cert.converged = false;
  for (std::size_t it = 1; it <= max_iterations; ++it) {
    cert.iterations = it;
    m.matvec(v, y);
    m.transpose_matvec(v, t);
    for (std::size_t i = 0; i < n; ++i) y[i] += t[i];
    theta = std::inner_product(v.begin(), v.end(), y.begin(), 0.0);
    double residual = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = y[i] - theta * v[i];
      residual += r * r;
    }
    if (std::sqrt(residual) <= tol * shift) {
      cert.converged = true;
      break;
    }
    for (std::size_t i = 0; i < n; ++i) v[i] = y[i] + shift * v[i];
    vn = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
    for (double& x : v) x /= vn;
  }
  cert.sym_max_eig = theta;
  cert.vl_stable_proxy = theta < 2.0;
  return cert;
}

RateFit convergence_rate(const TrajectoryRecord& record,
                         const RateFitOptions& options) {
  const auto& dist = record.distance_series;
  if (dist.empty() || dist.size() != record.times.size()) {
    throw ConfigError("convergence_rate needs a distance series");
  }
  RateFit fit;
  const double floor = std::max(options.noise_floor,
                                100.0 * std::numeric_limits<double>::epsilon());
  std::ptrdiff_t last = -1;
  for (std::size_t s = 0; s < dist.size(); ++s) {
    if (dist[s] > floor) last = static_cast<std::ptrdiff_t>(s);
  }
  const auto sentinel = [&] {
    fit.converged_to_precision = true;
    fit.rate = std::numeric_limits<double>::quiet_NaN();
    return fit;
  };
  if (last < 1) return sentinel();

  const double t_last = record.times[static_cast<std::size_t>(last)];
  std::vector<double> ts, logs;
  for (std::size_t s = 0; s <= static_cast<std::size_t>(last); ++s) {
    if (record.times[s] >= 0.5 * t_last && dist[s] > floor) {
      ts.push_back(record.times[s]);
      logs.push_back(std::log(dist[s]));
    }
  }
  if (ts.size() < 2) return sentinel();
  fit.rate = stats::linear_slope(ts, logs);
  fit.samples_used = ts.size();
  fit.window_start = ts.front();
  fit.window_end = ts.back();
  return fit;
}

}  // namespace sparselv
