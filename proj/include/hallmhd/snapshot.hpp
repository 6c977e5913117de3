#pragma once

#include <filesystem>
#include <string>

#include "hallmhd/state.hpp"

namespace hallmhd {

/// Binary snapshot format (little-endian), documented in the README:
///   magic "HMHDSNP1", u32 n_per_axis, u32 component_count,
///   u32 scalar_kind (0 complex128, 1 complex64, 2 float64),
///   f64 box_length, f64 dealias_fraction, f64 time,
/// then component_count blocks of n^3 values in row-major ascending-m
/// order (m1 slowest, m3 fastest, each axis from -n/2 to n/2-1).
/// Physical-space exports use the same layout with real samples in
/// natural x order.

enum class ScalarKind : std::uint32_t { Complex128 = 0, Complex64 = 1, Float64 = 2 };

void save_field(const SpectralField& f, const std::filesystem::path& path,
                ScalarKind kind = ScalarKind::Complex128, double time = 0.0);
SpectralField load_field(const std::filesystem::path& path, double* time_out = nullptr);

void save_state(const SolenoidalState& s, const std::filesystem::path& path,
                ScalarKind kind = ScalarKind::Complex128);
SolenoidalState load_state(const std::filesystem::path& path);

void save_physical(const RealField& f, const std::filesystem::path& path, double time = 0.0);
RealField load_physical(const std::filesystem::path& path, double* time_out = nullptr);

/// Checkpoint = state snapshot + a small JSON sidecar (<path>.json) with
/// the stepper metadata.
struct CheckpointMeta {
    double dt = 0.0;
    std::string scheme;
    long step_count = 0;
    double time = 0.0;
};
void save_checkpoint(const SolenoidalState& s, const CheckpointMeta& meta,
                     const std::filesystem::path& path);
std::pair<SolenoidalState, CheckpointMeta> load_checkpoint(const std::filesystem::path& path);

}  // namespace hallmhd
