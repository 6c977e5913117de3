#pragma once

#include "hallmhd/field.hpp"

namespace hallmhd {

/// Transforms between physical samples and spectral coefficients.
///
/// Normalization: the forward transform carries 1/n^3, so coefficients
/// approximate (1/L^3) * integral of f * exp(-i k.x); Parseval reads
/// ||f||_2^2 = L^3 * sum |f_hat(k)|^2. The inverse carries no factor.
///
/// Backed by FFTW r2c/c2r plans (FFTW_ESTIMATE, so plan choice is
/// deterministic); the full complex lattice is reconstructed from the
/// half-spectrum by Hermitian mirroring. Plans are cached per grid size
/// and execution is serialized per plan, so concurrent callers on
/// distinct fields are safe and results reproducible.
RealField to_physical(const SpectralField& f);
SpectralField to_spectral(const RealField& f);
RealScalar to_physical(const SpectralScalar& f);
SpectralScalar to_spectral(const RealScalar& f);

}  // namespace hallmhd
