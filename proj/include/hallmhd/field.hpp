#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "hallmhd/grid.hpp"

namespace hallmhd {

using Complex = std::complex<double>;

namespace detail {
inline void check_same_grid(const GridSpec& a, const GridSpec& b) {
    if (!(a == b)) throw std::invalid_argument("fields live on different grids");
}
}  // namespace detail

/// One vector field as complex Fourier coefficients on the full lattice,
/// component-major (3 * n^3 entries). Invariant: Hermitian symmetry,
/// coeffs(-m) = conj(coeffs(m)), so the physical-space field is real.
class SpectralField {
  public:
    SpectralField() = default;
    explicit SpectralField(GridSpec grid)
        : grid_(grid), coeffs_(3 * grid.point_count(), Complex{0.0, 0.0}) {
        grid_.validate();
    }

    const GridSpec& grid() const { return grid_; }
    std::size_t point_count() const { return grid_.point_count(); }

    std::size_t index(int i, int j, int k) const {
        const int n = grid_.n_per_axis;
        return (static_cast<std::size_t>(i) * n + j) * n + k;
    }

    Complex& at(int c, int i, int j, int k) { return coeffs_[c * point_count() + index(i, j, k)]; }
    const Complex& at(int c, int i, int j, int k) const {
        return coeffs_[c * point_count() + index(i, j, k)];
    }

    std::span<Complex> component(int c) {
        return {coeffs_.data() + c * point_count(), point_count()};
    }
    std::span<const Complex> component(int c) const {
        return {coeffs_.data() + c * point_count(), point_count()};
    }

    std::span<Complex> raw() { return coeffs_; }
    std::span<const Complex> raw() const { return coeffs_; }

    SpectralField& operator+=(const SpectralField& o) {
        detail::check_same_grid(grid_, o.grid_);
        for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
        return *this;
    }
    SpectralField& operator-=(const SpectralField& o) {
        detail::check_same_grid(grid_, o.grid_);
        for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
        return *this;
    }
    SpectralField& operator*=(double s) {
        for (auto& c : coeffs_) c *= s;
        return *this;
    }
    /// this += s * o
    SpectralField& add_scaled(const SpectralField& o, double s) {
        detail::check_same_grid(grid_, o.grid_);
        for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += s * o.coeffs_[i];
        return *this;
    }

    friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
    friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
    friend SpectralField operator*(SpectralField a, double s) { return a *= s; }
    friend SpectralField operator*(double s, SpectralField a) { return a *= s; }

  private:
    GridSpec grid_;
    std::vector<Complex> coeffs_;
};

/// Scalar-valued spectral field (divergence, pressure symbol, test scalars).
class SpectralScalar {
  public:
    SpectralScalar() = default;
    explicit SpectralScalar(GridSpec grid) : grid_(grid), coeffs_(grid.point_count()) {
        grid_.validate();
    }

    const GridSpec& grid() const { return grid_; }
    std::size_t point_count() const { return coeffs_.size(); }

    std::size_t index(int i, int j, int k) const {
        const int n = grid_.n_per_axis;
        return (static_cast<std::size_t>(i) * n + j) * n + k;
    }
    Complex& at(int i, int j, int k) { return coeffs_[index(i, j, k)]; }
    const Complex& at(int i, int j, int k) const { return coeffs_[index(i, j, k)]; }

    std::span<Complex> raw() { return coeffs_; }
    std::span<const Complex> raw() const { return coeffs_; }

  private:
    GridSpec grid_;
    std::vector<Complex> coeffs_;
};

/// Physical-space vector samples, component-major (3 * n^3 reals),
/// row-major over (x1, x2, x3) with x3 fastest.
class RealField {
  public:
    RealField() = default;
    explicit RealField(GridSpec grid) : grid_(grid), values_(3 * grid.point_count(), 0.0) {
        grid_.validate();
    }

    const GridSpec& grid() const { return grid_; }
    std::size_t point_count() const { return grid_.point_count(); }

    std::size_t index(int i, int j, int k) const {
        const int n = grid_.n_per_axis;
        return (static_cast<std::size_t>(i) * n + j) * n + k;
    }
    double& at(int c, int i, int j, int k) { return values_[c * point_count() + index(i, j, k)]; }
    const double& at(int c, int i, int j, int k) const {
        return values_[c * point_count() + index(i, j, k)];
    }

    std::span<double> component(int c) {
        return {values_.data() + c * point_count(), point_count()};
    }
    std::span<const double> component(int c) const {
        return {values_.data() + c * point_count(), point_count()};
    }
    std::span<double> raw() { return values_; }
    std::span<const double> raw() const { return values_; }

  private:
    GridSpec grid_;
    std::vector<double> values_;
};

class RealScalar {
  public:
    RealScalar() = default;
    explicit RealScalar(GridSpec grid) : grid_(grid), values_(grid.point_count(), 0.0) {
        grid_.validate();
    }

    const GridSpec& grid() const { return grid_; }
    std::size_t point_count() const { return values_.size(); }
    std::size_t index(int i, int j, int k) const {
        const int n = grid_.n_per_axis;
        return (static_cast<std::size_t>(i) * n + j) * n + k;
    }
    double& at(int i, int j, int k) { return values_[index(i, j, k)]; }
    const double& at(int i, int j, int k) const { return values_[index(i, j, k)]; }
    std::span<double> raw() { return values_; }
    std::span<const double> raw() const { return values_; }

  private:
    GridSpec grid_;
    std::vector<double> values_;
};

}  // namespace hallmhd
