#pragma once

#include "hallmhd/field.hpp"

namespace hallmhd {

// Exact spectral multipliers on the wavevector lattice.

/// d/dx_axis, i.e. multiplication by i*k_axis.
SpectralField derivative(const SpectralField& f, int axis);
SpectralField curl(const SpectralField& f);
SpectralScalar divergence(const SpectralField& f);
SpectralField gradient(const SpectralScalar& f);
SpectralField laplacian(const SpectralField& f);

/// Lambda^r = |k|^r multiplier, with Lambda^r(0) = 0 for r > 0 and
/// Lambda^0 = identity. Rejects r < 0.
SpectralField lambda_pow(const SpectralField& f, double r);

/// Leray projection I - k k^T / |k|^2; the k=0 mode passes through.
SpectralField leray_project(const SpectralField& f);

/// Zero every coefficient with any |m_i| > dealias_fraction * n/2.
SpectralField dealias(const SpectralField& f);
void dealias_in_place(SpectralField& f);

bool is_dealiased_mode(const GridSpec& g, int i, int j, int k);

// Norms and inner products under the declared normalization
// (||f||_2^2 = L^3 sum |f_hat|^2). Accumulation is compensated
// (Neumaier) so large lattices do not lose digits.

double l2_norm_sq(const SpectralField& f);
double l2_inner(const SpectralField& f, const SpectralField& g);
/// ||Lambda^r f||_2^2 = L^3 sum |k|^{2r} |f_hat|^2.
double lambda_norm_sq(const SpectralField& f, double r);
/// Inhomogeneous Sobolev: L^3 sum (1+|k|^2)^m |f_hat|^2.
double sobolev_norm_sq(const SpectralField& f, double m);

/// Physical-space quadrature: sum f * (L/n)^3.
double integrate(const RealScalar& f);
/// max over grid points of the pointwise vector magnitude.
double max_magnitude(const RealField& f);

// Invariant probes.

/// max_k |f_hat(k) - conj(f_hat(-k))| over components.
double hermitian_defect(const SpectralField& f);
/// max_k |k . f_hat(k)| (compare against max_k |f_hat|).
double divergence_defect(const SpectralField& f);
double max_abs_coeff(const SpectralField& f);

/// Compensated (Neumaier) summation helper used by all reductions.
class KahanAccumulator {
  public:
    void add(double x) {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

}  // namespace hallmhd
