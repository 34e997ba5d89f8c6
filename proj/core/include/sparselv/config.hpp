#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "sparselv/graph_patterns.hpp"

namespace sparselv {

/// Monte Carlo experiment configuration. Field names double as the keys of
/// the flat `key = value` config file.
struct SweepConfig {
  std::size_t n = 2000;
  /// Degree; ignored for full (d = n) and for proportional when beta > 0.
  std::size_t d = 16;
  /// Model B ratio d / n.
  double beta = 0.0;
  PatternModel model = PatternModel::BlockPermutation;
  /// alpha = sqrt(kappa log n) for every kappa.
  std::vector<double> kappa_grid = {0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0, 6.0, 8.0};
  std::size_t trials_per_point = 100;
  std::uint64_t master_seed = 1;
  /// Draw Delta once for the whole run instead of once per trial.
  bool fix_pattern = true;
  /// Force every weight to zero (M = 0), for degenerate checks.
  bool zero_interactions = false;

  double solve_tol = 1e-12;
  std::size_t solve_max_iterations = 10000;
  double norm_tol = 1e-8;

  // Dynamics
  double t_end = 50.0;
  double x0 = 0.5;
  std::size_t sample_count = 501;
  std::size_t traced_species = 10;
  std::vector<double> snapshot_times;
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;

  std::size_t bins = 50;
  std::size_t threads = 1;
  std::string out_dir;
  std::string format = "csv";

  /// Effective degree after applying model rules.
  std::size_t degree() const;
  /// Throws ConfigError on invalid combinations.
  void validate() const;
};

/// Applies `key = value` lines (also `key: value`; `#` starts a comment) on
/// top of `base`. Unknown keys and unparsable values throw ConfigError.
SweepConfig parse_config(std::string_view text, SweepConfig base = {});
SweepConfig load_config_file(const std::filesystem::path& path,
                             SweepConfig base = {});

/// Canonical `key = value` rendering (parse_config round-trips it).
std::string render_config(const SweepConfig& cfg);

}  // namespace sparselv
