#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "hallmhd/rhs.hpp"
#include "hallmhd/state.hpp"

namespace hallmhd {

/// The Duhamel kernel exp(-|k|^2 t). Stepper and heat comparator share
/// this one function so nonlinearity-off runs match the comparator
/// bit-for-bit when evaluated over the same substeps.
inline double heat_kernel(double k_sq, double t) { return std::exp(-k_sq * t); }

/// Multiply every coefficient by exp(-|k|^2 dt). dt may be negative
/// (used by the time-reversal sanity check).
SpectralField apply_linear_propagator(const SpectralField& f, double dt);
SolenoidalState apply_linear_propagator(const SolenoidalState& s, double dt);

enum class Scheme {
    IfRk4,    // integrating-factor RK4
    IfEuler,  // first order, for convergence tests
};

struct StepperConfig {
    double dt = 0.01;
    Scheme scheme = Scheme::IfRk4;
    double t_end = 1.0;
    std::vector<double> snapshot_times;   // sorted; hit exactly
    double safety = 0.4;
    RhsOptions rhs;
    std::vector<double> store_states_at;  // snapshots kept in the record
};

/// dt_max = safety * min(1/|k_max|^2, 1/(|k_max| max|u|), 1/(|k_max|^2 max|B|)).
/// The last term is the whistler-wave constraint: the Hall term's
/// frequency scales as |k|^2 |B|. |k_max| is the dealiased corner.
struct StabilityBound {
    double dt_max = 0.0;
    double viscous = 0.0;
    double advective = 0.0;
    double whistler = 0.0;
};
StabilityBound stability_bound(const SolenoidalState& s, const StepperConfig& cfg);

class StepError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// One step of cfg.dt (refuses it when dt exceeds the stability bound).
SolenoidalState step(const SolenoidalState& s, const StepperConfig& cfg);

struct TrajectoryRecord {
    std::vector<double> times;
    std::map<std::string, std::vector<double>> series;
    std::vector<std::pair<double, SolenoidalState>> stored_states;
    long steps_taken = 0;

    const SolenoidalState* stored_state_at(double t) const {
        for (const auto& [tt, ss] : stored_states)
            if (std::abs(tt - t) < 1e-12 * (1.0 + std::abs(t))) return &ss;
        return nullptr;
    }
};

/// Called at every snapshot with an immutable state; appends whatever it
/// measures to the record's named series.
using Observer = std::function<void(const SolenoidalState&, TrajectoryRecord&)>;

/// Advance from state0 to t_end, emitting snapshots at t=0, every listed
/// snapshot time (hit exactly by shortening the step) and t_end.
/// Deterministic for fixed inputs. NaN/Inf in any coefficient aborts
/// with the offending time.
TrajectoryRecord evolve(const SolenoidalState& state0, const StepperConfig& cfg,
                        const std::vector<Observer>& observers);

}  // namespace hallmhd
