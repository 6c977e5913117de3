#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "hallmhd/decay.hpp"
#include "hallmhd/gevrey.hpp"
#include "hallmhd/stepper.hpp"

namespace hallmhd {

inline constexpr const char* kVersion = "0.1.0";

struct InitConfig {
    double sigma = 0.0;
    double amplitude = 0.35;
    std::uint64_t seed = 20250811;
};

/// One experiment, fully determined by its config: grid, stepper, data,
/// Gevrey parameters, which observers run and where output goes.
struct ExperimentConfig {
    GridSpec grid;
    StepperConfig stepper;
    InitConfig init;
    GevreyParams gevrey;
    double ball_gamma = 5.0;  // splitting parameter in g^2 = gamma/(2(t+1))
    std::vector<std::string> diagnostics;
    std::map<std::string, FitWindow> fit_windows;
    std::string output_dir = "run";

    FitWindow window_for(const std::string& name) const;
};

/// Desk profile: n=64, L=32*pi box, sigma=0 data, t_end = 0.5 (L/2pi)^2.
ExperimentConfig desk_profile();
/// Smoke profile: n=32, L=16*pi, shorter horizon; for quick checks.
ExperimentConfig smoke_profile();
ExperimentConfig profile_by_name(const std::string& name);

std::string to_json_string(const ExperimentConfig& cfg);
ExperimentConfig config_from_json_string(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// FNV-1a over the canonical JSON dump.
std::uint64_t config_hash(const ExperimentConfig& cfg);

struct RunResult {
    TrajectoryRecord record;
    SolenoidalState initial;
    std::filesystem::path dir;
};

/// Seed the data, evolve with the enabled observers, and emit CSVs, the
/// initial snapshot, a final checkpoint and a manifest into output_dir.
/// Identical configs produce identical CSV bytes.
RunResult run_experiment(const ExperimentConfig& cfg);

/// The same trajectory without touching the filesystem (used by the
/// acceptance suite and tests).
RunResult run_experiment_in_memory(const ExperimentConfig& cfg);

// CSV helpers shared by the harness and the CLI.
void write_csv(const std::filesystem::path& path, const std::string& comment,
               const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows);
std::pair<std::vector<double>, std::vector<double>> read_two_column_csv(
    const std::filesystem::path& path);

/// Number formatting used by every CSV writer (%.17g, locale-free).
std::string format_double(double v);

}  // namespace hallmhd
