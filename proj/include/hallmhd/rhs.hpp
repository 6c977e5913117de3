#pragma once

#include "hallmhd/state.hpp"

namespace hallmhd {

/// Term toggles for the right-hand side. `nonlinear` gates the quadratic
/// advection/Lorentz/induction terms, `hall` gates the Hall term; with
/// both off the system reduces to pure diffusion.
struct RhsOptions {
    bool laplacian = true;
    bool nonlinear = true;
    bool hall = true;
};

enum class ProductForm { Advection, Cross };

/// Pseudospectral product: inverse transform, pointwise product, forward
/// transform, dealias. Advection is (a . grad) b, Cross is a x b.
SpectralField nonlinear_product(const SpectralField& a, const SpectralField& b, ProductForm form);

/// curl((curl B) x B), dealiased; divergence-free by curl structure.
/// J = curl B is formed spectrally, J x B pointwise, the outer curl
/// spectrally again, so the 2/3 rule sees one product per step.
SpectralField hall_term(const SpectralField& B);

/// du/dt and dB/dt per the toggles:
///   du/dt = -P(u.grad u - B.grad B) (+ Laplacian u)
///   dB/dt = -(u.grad B - B.grad u) - hall_term(B) (+ Laplacian B)
/// The quadratic terms are evaluated in rotational/curl form (identical
/// to the convective form after projection and dealiasing).
std::pair<SpectralField, SpectralField> rhs(const SolenoidalState& s, const RhsOptions& opts = {});

/// Each nonlinear term by name (convective forms), plus the symbols
/// H_hat = P(u.grad u - B.grad B)^ and M_hat = (u.grad B - B.grad u + hall)^.
struct RhsTerms {
    SpectralField advection;          // (u . grad) u
    SpectralField lorentz;            // (B . grad) B
    SpectralField induction_stretch;  // (B . grad) u
    SpectralField induction_advect;   // (u . grad) B
    SpectralField hall;
    SpectralField H_hat;
    SpectralField M_hat;
};
RhsTerms rhs_terms(const SolenoidalState& s);

/// H_hat and M_hat assembled the symbol way: H = i(I-mu) A k with
/// A_lj = (u_l u_j - B_l B_j)^, M = i C k - k x V with
/// C_lj = (u_j B_l - B_j u_l)^ and V = sum_j k_j (B_j B)^.
/// An independent code path from rhs(); the two agree to round-off.
std::pair<SpectralField, SpectralField> symbol_fields(const SolenoidalState& s);

/// Observed constants in the symbol bounds:
///   ratio_H            = sup_k |H_hat| / (|k| (||u||^2+||B||^2))
///   ratio_M_linear     = sup_k |i C k| / (|k| (||u||^2+||B||^2))
///   ratio_M_quadratic  = sup_k |k x V| / (|k|^2 ||B||^2)
/// all over dealiased k != 0; zero state reports zeros. Under the 1/n^3
/// transform convention Young's inequality forces each to stay below
/// symbol_bound_constant(grid) = 2 / L^3.
struct SymbolBoundReport {
    double ratio_H = 0.0;
    double ratio_M_linear = 0.0;
    double ratio_M_quadratic = 0.0;
};
SymbolBoundReport symbol_bound_report(const SolenoidalState& s);

inline double symbol_bound_constant(const GridSpec& g) { return 2.0 / g.volume(); }

}  // namespace hallmhd
