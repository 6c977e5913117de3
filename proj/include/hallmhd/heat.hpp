#pragma once

#include "hallmhd/state.hpp"
#include "hallmhd/stepper.hpp"

namespace hallmhd {

/// The comparison heat system: both components diffuse from a frozen
/// copy of the initial data (or of a restart state u(T), B(T)).
struct HeatFlow {
    SolenoidalState initial;
};

/// Exact evaluation (v,w)(k, t) = exp(-|k|^2 t) (u0,B0)(k); no time
/// stepping. Rejects t < 0. The returned state's clock reads
/// initial.time + t.
SolenoidalState heat_evolve(const HeatFlow& flow, double t);

/// D = (u - v, B - w) at the trajectory state's time, formed in spectral
/// space. Requires the same grid and a state no older than the flow's
/// initial time.
SolenoidalState difference_state(const SolenoidalState& traj_state, const HeatFlow& flow);

/// Heat flow seeded from the trajectory's stored state at time T
/// (the lower-bound comparison device). Throws if T was not snapshotted
/// with store_states_at.
HeatFlow restart_comparator(const TrajectoryRecord& traj, double T);

/// max over grid points of sum_{c,j} (d_j f_c)^2 — the sup-norm quantity
/// in the gradient decay bound.
double grad_supnorm_sq(const SpectralField& f);

}  // namespace hallmhd
