#include "hallmhd/heat.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "hallmhd/fft.hpp"

namespace hallmhd {

SolenoidalState heat_evolve(const HeatFlow& flow, double t) {
    if (t < 0.0) throw std::invalid_argument("heat_evolve: t must be nonnegative");
    if (t == 0.0) return flow.initial;
    return apply_linear_propagator(flow.initial, t);
}

SolenoidalState difference_state(const SolenoidalState& traj_state, const HeatFlow& flow) {
    detail::check_same_grid(traj_state.grid(), flow.initial.grid());
    const double elapsed = traj_state.time - flow.initial.time;
    if (elapsed < 0.0) {
        std::ostringstream os;
        os << "difference_state: time mismatch (state at t = " << traj_state.time
           << " predates the comparator's start t = " << flow.initial.time << ")";
        throw std::invalid_argument(os.str());
    }
    const SolenoidalState heat = heat_evolve(flow, elapsed);
    return {traj_state.u - heat.u, traj_state.B - heat.B, traj_state.time};
}

HeatFlow restart_comparator(const TrajectoryRecord& traj, double T) {
    const SolenoidalState* s = traj.stored_state_at(T);
    if (s == nullptr) {
        std::ostringstream os;
        os << "restart_comparator: no stored snapshot at T = " << T;
        throw std::invalid_argument(os.str());
    }
    return HeatFlow{*s};
}

double grad_supnorm_sq(const SpectralField& f) {
    const std::size_t np = f.point_count();
    std::vector<double> acc(np, 0.0);
    for (int j = 0; j < 3; ++j) {
        const RealField dj = to_physical(derivative(f, j));
        for (int c = 0; c < 3; ++c) {
            auto v = dj.component(c);
            for (std::size_t x = 0; x < np; ++x) acc[x] += v[x] * v[x];
        }
    }
    double best = 0.0;
    for (double v : acc) best = std::max(best, v);
    return best;
}

}  // namespace hallmhd
