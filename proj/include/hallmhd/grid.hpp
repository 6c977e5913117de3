#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>

namespace hallmhd {

/// Periodic box [0,L)^3 sampled with n points per axis. Wavevectors are
/// k = (2*pi/L) * m with integer m in [-n/2, n/2) per axis, stored in FFT
/// order (m = i for i < n/2, m = i - n otherwise).
struct GridSpec {
    int n_per_axis = 64;
    double box_length = 2.0 * std::numbers::pi;
    double dealias_fraction = 2.0 / 3.0;

    void validate() const {
        if (n_per_axis <= 0 || n_per_axis % 2 != 0)
            throw std::invalid_argument("GridSpec: n_per_axis must be a positive even integer");
        if (!(box_length > 0.0))
            throw std::invalid_argument("GridSpec: box_length must be positive");
        if (!(dealias_fraction > 0.0) || dealias_fraction > 1.0)
            throw std::invalid_argument("GridSpec: dealias_fraction must be in (0,1]");
    }

    std::size_t point_count() const {
        auto n = static_cast<std::size_t>(n_per_axis);
        return n * n * n;
    }

    double dk() const { return 2.0 * std::numbers::pi / box_length; }
    double dx() const { return box_length / n_per_axis; }
    double cell_volume() const { return dx() * dx() * dx(); }
    double volume() const { return box_length * box_length * box_length; }

    /// Integer mode for storage index i in [0,n).
    int mode_of(int i) const { return i < n_per_axis / 2 ? i : i - n_per_axis; }
    double k_axis(int i) const { return dk() * mode_of(i); }

    /// Largest |m_i| kept by the dealias rule.
    int dealias_limit() const {
        return static_cast<int>(std::floor(dealias_fraction * n_per_axis / 2.0));
    }
    /// Per-axis dealiased wavenumber; radial shells are complete up to here.
    double k_dealias_axis() const { return dealias_limit() * dk(); }
    /// Largest |k| present after dealiasing (cube corner).
    double k_max_dealiased() const { return std::sqrt(3.0) * k_dealias_axis(); }

    bool operator==(const GridSpec&) const = default;
};

}  // namespace hallmhd
