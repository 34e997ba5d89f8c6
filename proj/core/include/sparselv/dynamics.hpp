#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sparselv/interaction.hpp"

namespace sparselv {

/// dx_k/dt = x_k (1 - x_k + (M x)_k).
void lv_field(const InteractionMatrix& m, std::span<const double> x,
              std::span<double> out);

struct StepTolerances {
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  double initial_step = 1e-3;
  std::size_t max_steps = 50'000'000;
};

/// Adaptive Dormand-Prince 5(4) integrator for the LV field. Steps that would
/// make a coordinate negative are rejected and retried with a smaller step.
class LvIntegrator {
 public:
  LvIntegrator(const InteractionMatrix& m, std::vector<double> x0,
               const StepTolerances& tolerances = {});

  /// Advances exactly to `t_target` (>= time()). Returns false on abort, in
  /// which case diagnostic() explains and the state is the last accepted one.
  bool advance_to(double t_target);

  double time() const noexcept { return t_; }
  std::span<const double> state() const noexcept { return x_; }
  /// Vector field at the current state.
  std::span<const double> derivative() const noexcept { return f_; }
  const std::string& diagnostic() const noexcept { return diagnostic_; }
  std::size_t accepted_steps() const noexcept { return accepted_; }
  std::size_t rejected_steps() const noexcept { return rejected_; }

 private:
  const InteractionMatrix* m_;
  StepTolerances tol_;
  std::vector<double> x_, f_;
  std::vector<double> k2_, k3_, k4_, k5_, k6_, k7_, stage_, trial_;
  double t_ = 0.0;
  double h_;
  std::size_t accepted_ = 0;
  std::size_t rejected_ = 0;
  std::string diagnostic_;
};

struct IntegrationControls {
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  /// Uniform sample times on [0, t_end], endpoints included.
  std::size_t sample_count = 501;
  /// Full-state snapshots are taken at the samples closest to these times.
  std::vector<double> snapshot_times;
  /// Species whose full series is recorded at every sample.
  std::vector<std::size_t> tracked_species;
  /// Equilibrium used for the distance series, when supplied.
  std::optional<std::vector<double>> reference;
};

struct TrajectoryRecord {
  std::vector<double> times;
  std::vector<double> min_series;
  std::vector<double> max_series;
  std::vector<double> mean_series;
  /// ||x(t) - x*||_inf per sample; empty without a reference.
  std::vector<double> distance_series;
  std::vector<std::size_t> tracked_species;
  /// tracked_series[s][j]: species tracked_species[j] at times[s].
  std::vector<std::vector<double>> tracked_series;
  std::vector<double> snapshot_times;
  std::vector<std::vector<double>> snapshots;
  std::vector<double> final_state;
  /// sup-norm of the vector field at the last state.
  double final_derivative_norm = 0.0;
  /// final_derivative_norm < abs_tol.
  bool converged = false;
  bool aborted = false;
  std::string diagnostic;
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;
};

/// Throws ConfigError for a non-positive x0 or t_end. Integrator failures are
/// reported through `aborted` with a partial record.
TrajectoryRecord integrate_lv(const InteractionMatrix& m,
                              std::span<const double> x0, double t_end,
                              const IntegrationControls& controls = {});

struct SpectrumReport {
  std::vector<std::complex<double>> eigenvalues;
  double max_real_part = 0.0;
  /// max over eigenvalues of min_k |lambda + x_k|.
  double localization_error = 0.0;
  /// -(1 - alpha*_n / alpha).
  double stability_margin_bound = 0.0;
};

/// Full spectrum of J(x) = diag(x)(-I + M) by dense reduction.
SpectrumReport jacobian_spectrum(const InteractionMatrix& m,
                                 std::span<const double> x,
                                 std::size_t dense_limit = 4096);

struct StabilityCertificate {
  /// sym_max_eig < 2, i.e. M - I is Volterra-Liapunov stable with D = I.
  bool vl_stable_proxy = true;
  double sym_max_eig = 0.0;
  std::size_t iterations = 0;
  bool converged = true;
};

/// Largest eigenvalue of M + M^T by power iteration on the shifted matrix
/// M + M^T + cI, c a Gershgorin bound.
StabilityCertificate stability_certificate(const InteractionMatrix& m,
                                           double tol = 1e-10,
                                           std::size_t max_iterations = 200000);

struct RateFitOptions {
  /// Distances at or below this level are treated as integration noise and
  /// excluded from the fit.
  double noise_floor = 1e-8;
};

struct RateFit {
  double rate = 0.0;
  /// The distance never exceeds 100 * epsilon: nothing to fit.
  bool converged_to_precision = false;
  std::size_t samples_used = 0;
  double window_start = 0.0;
  double window_end = 0.0;
};

/// Least-squares slope of log ||x(t) - x*|| over the final half of the
/// resolved part of the trajectory (samples above the noise floor). Requires
/// a distance series.
RateFit convergence_rate(const TrajectoryRecord& record,
                         const RateFitOptions& options = {});

}  // namespace sparselv
