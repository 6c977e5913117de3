#include "hallmhd/stepper.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <sstream>

#include "hallmhd/fft.hpp"

namespace hallmhd {

SpectralField apply_linear_propagator(const SpectralField& f, double dt) {
    SpectralField out(f.grid());
    const GridSpec& g = f.grid();
    const int n = g.n_per_axis;
    const double dk = g.dk();
    const std::size_t np = f.point_count();
    auto fx = f.raw();
    auto ox = out.raw();
    std::size_t idx = 0;
    for (int i = 0; i < n; ++i) {
        const double kx = g.k_axis(i);
        for (int j = 0; j < n; ++j) {
            const double ky = g.k_axis(j);
            for (int k = 0; k < n; ++k, ++idx) {
                const double kz = dk * g.mode_of(k);
                const double mult = heat_kernel(kx * kx + ky * ky + kz * kz, dt);
                ox[idx] = mult * fx[idx];
                ox[np + idx] = mult * fx[np + idx];
                ox[2 * np + idx] = mult * fx[2 * np + idx];
            }
        }
    }
    return out;
}

SolenoidalState apply_linear_propagator(const SolenoidalState& s, double dt) {
    return {apply_linear_propagator(s.u, dt), apply_linear_propagator(s.B, dt), s.time + dt};
}

StabilityBound stability_bound(const SolenoidalState& s, const StepperConfig& cfg) {
    const double kmax = s.grid().k_max_dealiased();
    StabilityBound b;
    b.viscous = 1.0 / (kmax * kmax);
    double umax = 0.0, bmax = 0.0;
    if (cfg.rhs.nonlinear || cfg.rhs.hall) {
        umax = max_magnitude(to_physical(s.u));
        bmax = max_magnitude(to_physical(s.B));
    }
    b.advective = (cfg.rhs.nonlinear && umax > 0.0) ? 1.0 / (kmax * umax)
                                                    : std::numeric_limits<double>::infinity();
    b.whistler = (cfg.rhs.hall && bmax > 0.0) ? 1.0 / (kmax * kmax * bmax)
                                              : std::numeric_limits<double>::infinity();
    b.dt_max = cfg.safety * std::min({b.viscous, b.advective, b.whistler});
    return b;
}

namespace {

bool nonlinear_active(const RhsOptions& o) { return o.nonlinear || o.hall; }

SolenoidalState step_once(const SolenoidalState& s, const StepperConfig& cfg, double h) {
    // Nonlinearity off: the step is the exact propagator.
    if (!nonlinear_active(cfg.rhs)) {
        SolenoidalState out = apply_linear_propagator(s, cfg.rhs.laplacian ? h : 0.0);
        out.time = s.time + h;
        return out;
    }

    auto N = [&cfg](const SolenoidalState& y) {
        RhsOptions nl = cfg.rhs;
        nl.laplacian = false;
        return rhs(y, nl);
    };
    const double lam = cfg.rhs.laplacian ? 1.0 : 0.0;
    auto E = [&](const SpectralField& f, double dt) {
        return lam != 0.0 ? apply_linear_propagator(f, dt) : f;
    };

    if (cfg.scheme == Scheme::IfEuler) {
        auto [nu, nb] = N(s);
        SpectralField u = s.u;
        SpectralField B = s.B;
        u.add_scaled(nu, h);
        B.add_scaled(nb, h);
        SolenoidalState out(E(u, h), E(B, h), s.time + h);
        dealias_in_place(out.u);
        dealias_in_place(out.B);
        return out;
    }

    // Integrating-factor RK4: RK4 applied to the exp(-tL)-transformed
    // system, so the linear part is exact.
    auto [n1u, n1b] = N(s);

    SolenoidalState a(s.grid());
    a.u = E(SpectralField(s.u).add_scaled(n1u, 0.5 * h), 0.5 * h);
    a.B = E(SpectralField(s.B).add_scaled(n1b, 0.5 * h), 0.5 * h);
    a.time = s.time + 0.5 * h;
    auto [n2u, n2b] = N(a);

    SolenoidalState b(s.grid());
    b.u = E(s.u, 0.5 * h).add_scaled(n2u, 0.5 * h);
    b.B = E(s.B, 0.5 * h).add_scaled(n2b, 0.5 * h);
    b.time = s.time + 0.5 * h;
    auto [n3u, n3b] = N(b);

    SolenoidalState c(s.grid());
    c.u = E(s.u, h);
    c.u.add_scaled(E(n3u, 0.5 * h), h);
    c.B = E(s.B, h);
    c.B.add_scaled(E(n3b, 0.5 * h), h);
    c.time = s.time + h;
    auto [n4u, n4b] = N(c);

    SolenoidalState out(s.grid());
    out.u = E(s.u, h);
    out.u.add_scaled(E(n1u, h), h / 6.0);
    out.u.add_scaled(E(n2u + n3u, 0.5 * h), h / 3.0);
    out.u.add_scaled(n4u, h / 6.0);
    out.B = E(s.B, h);
    out.B.add_scaled(E(n1b, h), h / 6.0);
    out.B.add_scaled(E(n2b + n3b, 0.5 * h), h / 3.0);
    out.B.add_scaled(n4b, h / 6.0);
    out.time = s.time + h;
    dealias_in_place(out.u);
    dealias_in_place(out.B);
    return out;
}

void check_finite(const SolenoidalState& s) {
    for (const SpectralField* f : {&s.u, &s.B}) {
        for (const auto& c : f->raw()) {
            if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
                std::ostringstream os;
                os << "non-finite coefficient at t = " << s.time;
                throw StepError(os.str());
            }
        }
    }
}

}  // namespace

SolenoidalState step(const SolenoidalState& s, const StepperConfig& cfg) {
    if (!(cfg.dt > 0.0)) throw StepError("step: dt must be positive");
    if (nonlinear_active(cfg.rhs)) {
        const StabilityBound b = stability_bound(s, cfg);
        if (cfg.dt > b.dt_max) {
            std::ostringstream os;
            os << "step refused: dt = " << cfg.dt << " exceeds dt_max = " << b.dt_max
               << " (viscous " << b.viscous << ", advective " << b.advective << ", whistler "
               << b.whistler << ", safety " << cfg.safety << ")";
            throw StepError(os.str());
        }
    }
    return step_once(s, cfg, cfg.dt);
}

TrajectoryRecord evolve(const SolenoidalState& state0, const StepperConfig& cfg,
                        const std::vector<Observer>& observers) {
    if (cfg.t_end < 0.0) throw StepError("evolve: t_end must be nonnegative");
    TrajectoryRecord rec;

    std::set<double> marks(cfg.snapshot_times.begin(), cfg.snapshot_times.end());
    marks.insert(0.0);
    marks.insert(cfg.t_end);
    for (double t : cfg.store_states_at) marks.insert(t);

    auto emit = [&](const SolenoidalState& s) {
        rec.times.push_back(s.time);
        for (const auto& obs : observers) obs(s, rec);
        for (double t : cfg.store_states_at) {
            if (std::abs(t - s.time) < 1e-12 * (1.0 + std::abs(t)))
                rec.stored_states.emplace_back(s.time, s);
        }
    };

    SolenoidalState s = state0;
    s.time = 0.0;
    emit(s);
    if (cfg.t_end == 0.0) return rec;

    auto next_mark = [&](double t) {
        auto it = marks.upper_bound(t + 1e-12 * (1.0 + t));
        return it == marks.end() ? cfg.t_end : *it;
    };

    double t = 0.0;
    while (t < cfg.t_end - 1e-12 * (1.0 + cfg.t_end)) {
        const double target = std::min(next_mark(t), cfg.t_end);
        StepperConfig sub = cfg;
        sub.dt = std::min(cfg.dt, target - t);
        s = step(s, sub);
        ++rec.steps_taken;
        check_finite(s);
        t += sub.dt;
        if (std::abs(t - target) < 1e-12 * (1.0 + target)) {
            t = target;
            s.time = target;  // snapshot times are exact
            emit(s);
        }
    }
    return rec;
}

}  // namespace hallmhd
