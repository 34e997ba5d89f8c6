#include "sparselv/reports.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "sparselv/errors.hpp"
#include "sparselv/version.hpp"

namespace sparselv {

using nlohmann::json;

namespace {

json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

json numbers(const std::vector<double>& xs) {
  json out = json::array();
  for (double v : xs) out.push_back(number(v));
  return out;
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

json to_json(const SpectralReport& r) {
  return json{{"spectral_norm", number(r.spectral_norm)},
              {"min_gap", number(r.min_gap)},
              {"norm_bound_holds", r.norm_bound_holds},
              {"iterations", r.iterations},
              {"tolerance_achieved", number(r.tolerance_achieved)}};
}

json to_json(const EquilibriumReport& r, bool full_state) {
  json j{{"feasible", r.feasible},
         {"min_x", number(r.min_x)},
         {"argmin", r.argmin},
         {"min_Z", number(r.min_z)},
         {"residual_inf", number(r.residual_inf)},
         {"alpha", number(r.alpha)},
         {"n", r.n},
         {"d", r.d},
         {"seed", r.seed}};
  if (full_state) j["x"] = numbers(r.x);
  return j;
}

json config_json(const SweepConfig& c) {
  return json{{"n", c.n},
              {"d", c.d},
              {"beta", c.beta},
              {"model", to_string(c.model)},
              {"kappa_grid", numbers(c.kappa_grid)},
              {"trials_per_point", c.trials_per_point},
              {"master_seed", c.master_seed},
              {"fix_pattern", c.fix_pattern},
              {"zero_interactions", c.zero_interactions},
              {"solve_tol", c.solve_tol},
              {"solve_max_iterations", c.solve_max_iterations},
              {"norm_tol", c.norm_tol},
              {"t_end", c.t_end},
              {"x0", c.x0},
              {"sample_count", c.sample_count},
              {"traced_species", c.traced_species},
              {"snapshot_times", numbers(c.snapshot_times)},
              {"rel_tol", c.rel_tol},
              {"abs_tol", c.abs_tol},
              {"bins", c.bins},
              {"threads", c.threads},
              {"out_dir", c.out_dir},
              {"format", c.format}};
}

json to_json(const SweepResult& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"kappa", number(row.kappa)},
                    {"alpha", number(row.alpha)},
                    {"trials", row.trials},
                    {"feasible_count", row.feasible_count},
                    {"feasible_fraction", number(row.feasible_fraction)},
                    {"diverged", row.diverged},
                    {"norm_ge_one", row.norm_ge_one},
                    {"mean_min_x", number(row.mean_min_x)},
                    {"mean_max_r_normalized", number(row.mean_max_r_normalized)},
                    {"mean_spectral_norm", number(row.mean_spectral_norm)}});
  }
  return json{{"rows", rows}};
}

json to_json(const HistogramResult& r) {
  json bins = json::array();
  const double w = r.histogram.bin_width();
  for (std::size_t b = 0; b < r.histogram.counts.size(); ++b) {
    const double lo = r.histogram.lower + w * static_cast<double>(b);
    bins.push_back({{"lower", number(lo)},
                    {"upper", number(lo + w)},
                    {"count", r.histogram.counts[b]}});
  }
  return json{{"kappa", number(r.kappa)},     {"alpha", number(r.alpha)},
              {"trials", r.trials},           {"diverged", r.diverged},
              {"mean", number(r.mean)},       {"variance", number(r.variance)},
              {"total", r.histogram.total},   {"bins", bins},
              {"warnings", r.warnings}};
}

json to_json(const DynamicsTraceResult& r) {
  const auto& t = r.trajectory;
  json j{{"kappa", number(r.kappa)},
         {"alpha", number(r.alpha)},
         {"seed", r.seed},
         {"feasible", r.feasible},
         {"converged", t.converged},
         {"aborted", t.aborted},
         {"diagnostic", t.diagnostic},
         {"final_derivative_norm", number(t.final_derivative_norm)},
         {"accepted_steps", t.accepted_steps},
         {"rejected_steps", t.rejected_steps},
         {"times", numbers(t.times)},
         {"min", numbers(t.min_series)},
         {"max", numbers(t.max_series)},
         {"mean", numbers(t.mean_series)},
         {"tracked_species", t.tracked_species}};
  if (!t.distance_series.empty()) j["dist"] = numbers(t.distance_series);
  if (r.feasible) {
    j["rate"] = {{"rate", number(r.rate.rate)},
                 {"converged_to_precision", r.rate.converged_to_precision},
                 {"samples_used", r.rate.samples_used},
                 {"window_start", number(r.rate.window_start)},
                 {"window_end", number(r.rate.window_end)}};
  }
  return j;
}

json to_json(const SpectrumCheckResult& r) {
  json trials = json::array();
  for (const auto& t : r.trials) {
    trials.push_back({{"trial", t.trial},
                      {"max_real_part", number(t.max_real_part)},
                      {"localization_error", number(t.localization_error)},
                      {"stability_margin_bound", number(t.stability_margin_bound)}});
  }
  return json{{"kappa", number(r.kappa)},
              {"alpha", number(r.alpha)},
              {"analysed", r.trials.size()},
              {"skipped", r.skipped},
              {"mean_max_real_part", number(r.mean_max_real_part)},
              {"mean_localization_error", number(r.mean_localization_error)},
              {"trials", trials}};
}

json to_json(const GapCheckResult& r) {
  return json{{"trials", r.gaps.size()},
              {"smallest_gap", number(r.smallest_gap)},
              {"degenerate", r.degenerate},
              {"gaps", numbers(r.gaps)}};
}

std::string equilibrium_csv_header() {
  return "feasible,min_x,argmin,min_Z,residual_inf,alpha,n,d,seed\n";
}

std::string equilibrium_csv_row(const EquilibriumReport& r) {
  std::ostringstream os;
  os << (r.feasible ? "true" : "false") << ',' << format_number(r.min_x) << ','
     << r.argmin << ',' << format_number(r.min_z) << ','
     << format_number(r.residual_inf) << ',' << format_number(r.alpha) << ','
     << r.n << ',' << r.d << ',' << r.seed << '\n';
  return os.str();
}

std::string sweep_csv(const SweepResult& r) {
  std::ostringstream os;
  os << "kappa,alpha,trials,feasible_count,feasible_fraction,diverged,"
        "norm_ge_one,mean_min_x,mean_max_r_normalized,mean_spectral_norm\n";
  for (const auto& row : r.rows) {
    os << format_number(row.kappa) << ',' << format_number(row.alpha) << ','
       << row.trials << ',' << row.feasible_count << ','
       << format_number(row.feasible_fraction) << ',' << row.diverged << ','
       << row.norm_ge_one << ',' << format_number(row.mean_min_x) << ','
       << format_number(row.mean_max_r_normalized) << ','
       << format_number(row.mean_spectral_norm) << '\n';
  }
  return os.str();
}

std::string histogram_csv(const HistogramResult& r) {
  std::ostringstream os;
  os << "lower,upper,count\n";
  const double w = r.histogram.bin_width();
  for (std::size_t b = 0; b < r.histogram.counts.size(); ++b) {
    const double lo = r.histogram.lower + w * static_cast<double>(b);
    os << format_number(lo) << ',' << format_number(lo + w) << ','
       << r.histogram.counts[b] << '\n';
  }
  return os.str();
}

std::string trajectory_csv(const TrajectoryRecord& r) {
  const bool dist = !r.distance_series.empty();
  std::ostringstream os;
  os << (dist ? "t,min,max,mean,dist\n" : "t,min,max,mean\n");
  for (std::size_t s = 0; s < r.times.size(); ++s) {
    os << format_number(r.times[s]) << ',' << format_number(r.min_series[s])
       << ',' << format_number(r.max_series[s]) << ','
       << format_number(r.mean_series[s]);
    if (dist) os << ',' << format_number(r.distance_series[s]);
    os << '\n';
  }
  return os.str();
}

std::string tracked_species_csv(const TrajectoryRecord& r) {
  std::ostringstream os;
  os << "species";
  for (double t : r.times) os << ",t=" << format_number(t);
  os << '\n';
  for (std::size_t j = 0; j < r.tracked_species.size(); ++j) {
    os << r.tracked_species[j];
    for (const auto& row : r.tracked_series) os << ',' << format_number(row[j]);
    os << '\n';
  }
  return os.str();
}

std::string snapshots_csv(const TrajectoryRecord& r) {
  std::ostringstream os;
  os << "species";
  for (double t : r.snapshot_times) os << ",t=" << format_number(t);
  os << '\n';
  const std::size_t n = r.snapshots.empty() ? 0 : r.snapshots.front().size();
  for (std::size_t k = 0; k < n; ++k) {
    os << k;
    for (const auto& snap : r.snapshots) os << ',' << format_number(snap[k]);
    os << '\n';
  }
  return os.str();
}

std::string eigenvalues_csv(const std::vector<std::complex<double>>& ev) {
  std::ostringstream os;
  os << "re,im\n";
  for (const auto& z : ev) {
    os << format_number(z.real()) << ',' << format_number(z.imag()) << '\n';
  }
  return os.str();
}

std::string spectrum_trials_csv(const SpectrumCheckResult& r) {
  std::ostringstream os;
  os << "trial,max_real_part,localization_error,stability_margin_bound\n";
  for (const auto& t : r.trials) {
    os << t.trial << ',' << format_number(t.max_real_part) << ','
       << format_number(t.localization_error) << ','
       << format_number(t.stability_margin_bound) << '\n';
  }
  return os.str();
}

std::string gap_csv(const GapCheckResult& r) {
  std::ostringstream os;
  os << "trial,min_gap\n";
  for (std::size_t t = 0; t < r.gaps.size(); ++t) {
    os << t << ',' << format_number(r.gaps[t]) << '\n';
  }
  return os.str();
}

json meta_json(std::string_view command, const SweepConfig& cfg,
               double wall_seconds) {
  return json{{"command", std::string(command)},
              {"config", config_json(cfg)},
              {"versions",
               {{"sparselv", std::string(kVersion)},
                {"compiler", __VERSION__},
                {"cxx_standard", static_cast<long>(__cplusplus)}}},
              {"wall_time_seconds", wall_seconds}};
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << content;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

}  // namespace sparselv
