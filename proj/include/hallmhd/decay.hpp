#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "hallmhd/state.hpp"

namespace hallmhd {

/// Fitted power law value ~ prefactor * (t+1)^{-exponent}.
struct DecayFit {
    double exponent = 0.0;
    double prefactor = 0.0;
    double t_lo = 0.0;
    double t_hi = 0.0;
    double residual = 0.0;  // rms of log-log residuals
    bool log_correction = false;
};

struct FitWindow {
    double t_lo = 2.0;
    double t_hi = 128.0;
};

/// Least squares of log(value) against log(t+1) inside the window.
/// Requires t_lo >= 1 (transient excluded), at least 8 samples and
/// positive values. With allow_log the model with a (1 + log^2(t+1))
/// factor is fitted too and the lower-residual one returned, flagged.
DecayFit fit_exponent(std::span<const double> times, std::span<const double> values,
                      FitWindow window, bool allow_log = false);

/// Envelope fit: the exact pinball-loss optimal line at quantile q
/// (0.9 fits from above, 0.1 from below) through the log-log cloud.
DecayFit quantile_exponent(std::span<const double> times, std::span<const double> values,
                           FitWindow window, double q);

/// The exponent bootstrap: from beta = 0 iterate
/// beta <- min(alpha, 2 beta + 1/2) while beta < 1; once beta >= 1 the
/// integral of E is bounded and the rate caps at min(alpha, 5/2).
struct BootstrapResult {
    double exponent = 0.0;
    std::vector<double> trace;
};
BootstrapResult bootstrap_exponent(double alpha);

/// Decay exponent of ||D(t)||_2^2 as a function of the heat exponent
/// alpha in [0, 5/2]: 5/2 above alpha = 1 (with a log^2 factor exactly
/// at 1), else 5/2 - 2(1 - alpha).
struct DiffDecay {
    double exponent = 0.0;
    bool log_correction = false;
};
DiffDecay diff_decay_exponent(double alpha);

enum class PhiClass { Bounded, Logarithmic, PowerLaw };

/// Phi(t) = integral_0^t E(s) ds by trapezoid over the snapshots,
/// classified against the three growth shapes.
struct PhiSeries {
    std::vector<double> phi;
    PhiClass cls = PhiClass::Bounded;
    double power = 0.0;  // exponent of (t+1)^power when cls == PowerLaw
    double residual = 0.0;
};
PhiSeries phi_integral(std::span<const double> times, std::span<const double> energy);

/// Spectral energy inside |k| <= g, with the L^3 measure factor, so
/// g >= |k_max| returns exactly E(t).
double ball_integral(const SolenoidalState& s, double g);

struct Matrix3 {
    std::array<std::array<double, 3>, 3> m{};
    double& operator()(int i, int j) { return m[i][j]; }
    double operator()(int i, int j) const { return m[i][j]; }
    double frobenius() const;
    double trace() const { return m[0][0] + m[1][1] + m[2][2]; }
};
Matrix3 operator-(const Matrix3& a, const Matrix3& b);

/// Instantaneous spatial integrals feeding the moment matrices:
/// momentum_flux(i,j) = integral (u_i u_j - B_i B_j) dx  (symmetric),
/// cross_flux(i,j)    = integral (u_i B_j - B_i u_j) dx  (antisymmetric).
Matrix3 momentum_flux_matrix(const SolenoidalState& s);
Matrix3 cross_flux_matrix(const SolenoidalState& s);
/// <x, B>_ij = integral (x - x_c)_j B_i dx (physical quadrature about
/// the box center; shift-free for mean-zero fields).
Matrix3 x_moment_matrix(const SpectralField& B);

struct MomentMatrices {
    Matrix3 A_tilde;
    Matrix3 C_tilde;
    Matrix3 xB0;
    double horizon = 0.0;        // T_max of the truncated time integrals
    double tail_bound = 0.0;     // bound on any entry's tail beyond T_max
    double tail_fraction = 0.0;  // tail_bound relative to the integral scale
};

struct M0Membership {
    bool is_member = false;
    double scalar_defect = 0.0;  // ||A - (tr A/3) I||_F / ||A||_F
    double c_defect = 0.0;       // ||C - xB0||_F / max(||C||_F, ||xB0||_F)
};

struct MomentOptions {
    double max_tail_fraction = 0.01;
    bool allow_large_tail = false;  // report with error bars instead of failing
    double membership_tol = 0.05;
};

/// Assemble the time-integrated matrices from per-snapshot flux series
/// (9 entries each, row-major) by trapezoid up to the last snapshot.
/// The tail beyond the horizon is bounded via the fitted energy decay
/// (prefactor * (t+1)^{-exponent}, needs exponent > 1); if the bound
/// exceeds max_tail_fraction of the integral scale the call throws
/// unless allow_large_tail is set.
MomentMatrices integrate_moment_matrices(std::span<const double> times,
                                         std::span<const std::array<double, 9>> momentum_flux,
                                         std::span<const std::array<double, 9>> cross_flux,
                                         const Matrix3& xB0, const DecayFit& energy_fit,
                                         const MomentOptions& opts = {});
M0Membership m0_membership(const MomentMatrices& mm, double tol);

/// integral |x - x_c| (|u|^2 + |B|^2) dx over the fundamental domain.
double weighted_moment(const SolenoidalState& s);
/// Energy fraction in the outer shell max_i |x_i - x_c| > 0.45 L; the
/// weighted moment is a faithful surrogate only while this stays small.
double boundary_energy_fraction(const SolenoidalState& s);

/// Measurable form of the H^m energy estimate:
///   lhs  = <u, R_u>_{H^m} + <B, R_B>_{H^m} + ||grad u||^2_{H^m} + ||grad B||^2_{H^m}
///          (R the full right-hand side; the dissipation cancels, so lhs
///          is the nonlinear work in H^m),
///   core = (||u||^2_{H^m} + ||B||^2_{H^m}) (||grad u||_{H^m} + ||grad B||_{H^m}).
struct HmEnergyReport {
    double lhs = 0.0;
    double rhs_core = 0.0;
    double implied_constant = 0.0;
};
HmEnergyReport hm_energy_report(const SolenoidalState& s, int m);

struct InitialDataOptions {
    double width_fraction = 1.0 / 16.0;  // localization bump width / L
    double cutoff_shift = 0.0;           // 0: auto-calibrated from sigma
    double taper_start_frac = 0.75;      // of the per-axis dealias wavenumber
    double taper_width_frac = 0.10;
    bool shell_exact = true;  // pin each shell's power to the envelope
};

/// Random divergence-free data of spectral class sigma: shell-averaged
/// |u0_hat(k)| ~ |k|^sigma at low |k| with a Gaussian cutoff
/// exp(-cutoff_shift |k|^2) calibrated so the heat flow of the data
/// decays like (t+1)^{-(3+2 sigma)/2} on the fit window, plus a sharp
/// taper below the dealias edge. Localized in the box by a Gaussian
/// bump so the weighted-moment surrogate applies. u0 and B0 come from
/// independent substreams of the master seed; each is normalized to
/// ||.||_2 = amplitude.
SolenoidalState make_initial_data(double sigma, double amplitude, std::uint64_t seed,
                                  const GridSpec& grid, const InitialDataOptions& opts = {});

/// Homogeneous random solenoidal state (no localization): Gaussian
/// coefficients under exp(-|k|^2/kc^2), projected and dealiased. The
/// workhorse for operator/ensemble tests.
SolenoidalState random_state(const GridSpec& grid, std::uint64_t seed, double kc,
                             double amplitude = 1.0);

}  // namespace hallmhd
