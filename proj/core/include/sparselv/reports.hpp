#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "sparselv/config.hpp"
#include "sparselv/dynamics.hpp"
#include "sparselv/equilibrium.hpp"
#include "sparselv/experiments.hpp"
#include "sparselv/interaction.hpp"

namespace sparselv {

/// Shortest round-trip decimal form; "nan", "inf", "-inf" for non-finite.
std::string format_number(double v);

// JSON. Non-finite numbers serialize as null.
nlohmann::json to_json(const SpectralReport& r);
nlohmann::json to_json(const EquilibriumReport& r, bool full_state = false);
nlohmann::json to_json(const SweepResult& r);
nlohmann::json to_json(const HistogramResult& r);
nlohmann::json to_json(const DynamicsTraceResult& r);
nlohmann::json to_json(const SpectrumCheckResult& r);
nlohmann::json to_json(const GapCheckResult& r);
nlohmann::json config_json(const SweepConfig& cfg);

// CSV; every table ends with a newline.
std::string equilibrium_csv_header();
std::string equilibrium_csv_row(const EquilibriumReport& r);
std::string sweep_csv(const SweepResult& r);
std::string histogram_csv(const HistogramResult& r);
/// t,min,max,mean[,dist]
std::string trajectory_csv(const TrajectoryRecord& r);
/// One row per tracked species: species,value at each sample time.
std::string tracked_species_csv(const TrajectoryRecord& r);
/// One row per species: species,value at each snapshot time.
std::string snapshots_csv(const TrajectoryRecord& r);
/// re,im
std::string eigenvalues_csv(const std::vector<std::complex<double>>& ev);
std::string spectrum_trials_csv(const SpectrumCheckResult& r);
std::string gap_csv(const GapCheckResult& r);

/// Sidecar describing a run: command, config echo, versions, wall time.
nlohmann::json meta_json(std::string_view command, const SweepConfig& cfg,
                         double wall_seconds);

/// Writes `content` to `path`, creating parent directories.
void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace sparselv
