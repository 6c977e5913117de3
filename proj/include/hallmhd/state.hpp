#pragma once

#include "hallmhd/field.hpp"
#include "hallmhd/operators.hpp"

namespace hallmhd {

/// The solver state: velocity and magnetic field, both divergence-free
/// (k . u_hat = k . B_hat = 0 to round-off on every lattice point).
struct SolenoidalState {
    SpectralField u;
    SpectralField B;
    double time = 0.0;

    SolenoidalState() = default;
    explicit SolenoidalState(GridSpec grid) : u(grid), B(grid) {}
    SolenoidalState(SpectralField u_, SpectralField B_, double t = 0.0)
        : u(std::move(u_)), B(std::move(B_)), time(t) {
        detail::check_same_grid(u.grid(), B.grid());
    }

    const GridSpec& grid() const { return u.grid(); }
};

/// E(t) = ||u||_2^2 + ||B||_2^2.
inline double energy(const SolenoidalState& s) { return l2_norm_sq(s.u) + l2_norm_sq(s.B); }

/// ||Lambda^m u||_2^2 + ||Lambda^m B||_2^2 (real m >= 0 allowed).
inline double lambda_energy(const SolenoidalState& s, double m) {
    return lambda_norm_sq(s.u, m) + lambda_norm_sq(s.B, m);
}

}  // namespace hallmhd
