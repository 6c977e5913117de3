#include "hallmhd/decay.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "hallmhd/fft.hpp"
#include "hallmhd/rhs.hpp"
#include "hallmhd/rng.hpp"

namespace hallmhd {

namespace {

struct XY {
    std::vector<double> x, y;
};

XY window_loglog(std::span<const double> times, std::span<const double> values, FitWindow w,
                 std::size_t min_samples) {
    if (times.size() != values.size())
        throw std::invalid_argument("fit: times and values differ in length");
    if (!(w.t_lo >= 1.0)) throw std::invalid_argument("fit: window must start at t >= 1");
    if (!(w.t_hi > w.t_lo)) throw std::invalid_argument("fit: empty window");
    XY xy;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double t = times[i];
        if (t < w.t_lo - 1e-12 || t > w.t_hi + 1e-12) continue;
        if (!(values[i] > 0.0))
            throw std::invalid_argument("fit: nonpositive sample inside the window");
        xy.x.push_back(std::log(t + 1.0));
        xy.y.push_back(std::log(values[i]));
    }
    if (xy.x.size() < min_samples) {
        std::ostringstream os;
        os << "fit: window [" << w.t_lo << ", " << w.t_hi << "] holds " << xy.x.size()
           << " samples, need " << min_samples;
        throw std::invalid_argument(os.str());
    }
    return xy;
}

struct Line {
    double slope = 0.0, intercept = 0.0, rms = 0.0;
};

Line least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    Line l;
    const double denom = n * sxx - sx * sx;
    l.slope = denom != 0.0 ? (n * sxy - sx * sy) / denom : 0.0;
    l.intercept = (sy - l.slope * sx) / n;
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (l.intercept + l.slope * x[i]);
        rss += r * r;
    }
    l.rms = std::sqrt(rss / n);
    return l;
}

}  // namespace

DecayFit fit_exponent(std::span<const double> times, std::span<const double> values,
                      FitWindow window, bool allow_log) {
    XY xy = window_loglog(times, values, window, 8);
    const Line plain = least_squares(xy.x, xy.y);

    DecayFit fit;
    fit.t_lo = window.t_lo;
    fit.t_hi = window.t_hi;
    fit.exponent = -plain.slope;
    fit.prefactor = std::exp(plain.intercept);
    fit.residual = plain.rms;

    if (allow_log) {
        // value = C (t+1)^{-a} (1 + log^2(t+1)): subtract the known
        // correction and refit.
        std::vector<double> y2(xy.y);
        for (std::size_t i = 0; i < y2.size(); ++i)
            y2[i] -= std::log1p(xy.x[i] * xy.x[i]);  // x = log(t+1)
        const Line corr = least_squares(xy.x, y2);
        if (corr.rms < plain.rms) {
            fit.exponent = -corr.slope;
            fit.prefactor = std::exp(corr.intercept);
            fit.residual = corr.rms;
            fit.log_correction = true;
        }
    }
    return fit;
}

DecayFit quantile_exponent(std::span<const double> times, std::span<const double> values,
                           FitWindow window, double q) {
    if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("quantile_exponent: q in (0,1)");
    XY xy = window_loglog(times, values, window, 8);
    const std::size_t n = xy.x.size();

    auto pinball = [&](double slope, double intercept) {
        double loss = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double r = xy.y[k] - (intercept + slope * xy.x[k]);
            loss += r >= 0.0 ? q * r : (q - 1.0) * (-r);
        }
        return loss;
    };

    // The optimal quantile-regression line passes through two samples;
    // n is small so the exact pairwise search is affordable.
    double best_loss = std::numeric_limits<double>::infinity();
    Line best;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dx = xy.x[j] - xy.x[i];
            if (std::abs(dx) < 1e-12) continue;
            const double slope = (xy.y[j] - xy.y[i]) / dx;
            const double inter = xy.y[i] - slope * xy.x[i];
            const double loss = pinball(slope, inter);
            if (loss < best_loss) {
                best_loss = loss;
                best.slope = slope;
                best.intercept = inter;
            }
        }
    }

    DecayFit fit;
    fit.t_lo = window.t_lo;
    fit.t_hi = window.t_hi;
    fit.exponent = -best.slope;
    fit.prefactor = std::exp(best.intercept);
    double rss = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double r = xy.y[k] - (best.intercept + best.slope * xy.x[k]);
        rss += r * r;
    }
    fit.residual = std::sqrt(rss / n);
    return fit;
}

BootstrapResult bootstrap_exponent(double alpha) {
    if (alpha < 0.0) throw std::invalid_argument("bootstrap_exponent: alpha must be nonnegative");
    BootstrapResult res;
    double beta = 0.0;
    res.trace.push_back(beta);
    while (beta < 1.0) {
        const double next = std::min(alpha, 2.0 * beta + 0.5);
        if (next <= beta) break;  // fixpoint below 1: beta = alpha
        beta = next;
        res.trace.push_back(beta);
    }
    res.exponent = beta >= 1.0 ? std::min(alpha, 2.5) : beta;
    return res;
}

DiffDecay diff_decay_exponent(double alpha) {
    if (alpha < 0.0 || alpha > 2.5)
        throw std::invalid_argument("diff_decay_exponent: alpha must lie in [0, 5/2]");
    if (alpha == 1.0) return {2.5, true};
    if (alpha > 1.0) return {2.5, false};
    return {2.5 - 2.0 * (1.0 - alpha), false};
}

PhiSeries phi_integral(std::span<const double> times, std::span<const double> energy) {
    if (times.size() != energy.size() || times.empty())
        throw std::invalid_argument("phi_integral: mismatched or empty series");
    PhiSeries out;
    out.phi.resize(times.size());
    double acc = 0.0;
    out.phi[0] = 0.0;
    for (std::size_t i = 1; i < times.size(); ++i) {
        acc += 0.5 * (energy[i] + energy[i - 1]) * (times[i] - times[i - 1]);
        out.phi[i] = acc;
    }

    // Classify the growth against constant, log(t+1) and (t+1)^p using
    // samples past the transient, by relative rms in linear space.
    std::vector<double> ts, ph;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] >= 1.0 && out.phi[i] > 0.0) {
            ts.push_back(times[i]);
            ph.push_back(out.phi[i]);
        }
    }
    if (ts.size() < 4) return out;
    const double scale = *std::max_element(ph.begin(), ph.end());

    auto rel_rms = [&](auto&& model) {
        double rss = 0.0;
        for (std::size_t i = 0; i < ts.size(); ++i) {
            const double r = (ph[i] - model(ts[i])) / scale;
            rss += r * r;
        }
        return std::sqrt(rss / ts.size());
    };

    double mean = 0.0;
    for (double v : ph) mean += v;
    mean /= ph.size();
    const double r_const = rel_rms([&](double) { return mean; });

    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double b = std::log(ts[i] + 1.0);
        num += ph[i] * b;
        den += b * b;
    }
    const double c_log = den > 0.0 ? num / den : 0.0;
    const double r_log = rel_rms([&](double t) { return c_log * std::log(t + 1.0); });

    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        lx.push_back(std::log(ts[i] + 1.0));
        ly.push_back(std::log(ph[i]));
    }
    const Line pl = least_squares(lx, ly);
    const double c_pow = std::exp(pl.intercept);
    const double r_pow =
        rel_rms([&](double t) { return c_pow * std::pow(t + 1.0, pl.slope); });

    out.cls = PhiClass::Bounded;
    out.residual = r_const;
    if (r_log < out.residual) {
        out.cls = PhiClass::Logarithmic;
        out.residual = r_log;
    }
    if (r_pow < out.residual) {
        out.cls = PhiClass::PowerLaw;
        out.power = pl.slope;
        out.residual = r_pow;
    }
    return out;
}

double ball_integral(const SolenoidalState& s, double g) {
    if (!(g > 0.0)) throw std::invalid_argument("ball_integral: g must be positive");
    const GridSpec& grid = s.grid();
    const int n = grid.n_per_axis;
    const double dk = grid.dk();
    const std::size_t np = grid.point_count();
    KahanAccumulator acc;
    auto ux = s.u.raw();
    auto bx = s.B.raw();
    std::size_t idx = 0;
    for (int i = 0; i < n; ++i) {
        const double kx = grid.k_axis(i);
        for (int j = 0; j < n; ++j) {
            const double ky = grid.k_axis(j);
            for (int k = 0; k < n; ++k, ++idx) {
                const double kz = dk * grid.mode_of(k);
                if (kx * kx + ky * ky + kz * kz > g * g) continue;
                double v = 0.0;
                for (int c = 0; c < 3; ++c)
                    v += std::norm(ux[c * np + idx]) + std::norm(bx[c * np + idx]);
                acc.add(v);
            }
        }
    }
    return grid.volume() * acc.value();
}

double Matrix3::frobenius() const {
    double s = 0.0;
    for (const auto& row : m)
        for (double v : row) s += v * v;
    return std::sqrt(s);
}

Matrix3 operator-(const Matrix3& a, const Matrix3& b) {
    Matrix3 out;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) out(i, j) = a(i, j) - b(i, j);
    return out;
}

namespace {

// integral f g dx = L^3 sum Re[f_hat conj(g_hat)] for real fields.
double field_product_integral(const SpectralField& f, int cf, const SpectralField& g, int cg) {
    KahanAccumulator acc;
    auto fx = f.component(cf);
    auto gx = g.component(cg);
    for (std::size_t i = 0; i < fx.size(); ++i)
        acc.add(fx[i].real() * gx[i].real() + fx[i].imag() * gx[i].imag());
    return f.grid().volume() * acc.value();
}

}  // namespace

Matrix3 momentum_flux_matrix(const SolenoidalState& s) {
    // All nine entries are computed independently; the symmetry of the
    // result is a property of the integrand, not an enforced mirror.
    Matrix3 out;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            out(i, j) = field_product_integral(s.u, i, s.u, j) -
                        field_product_integral(s.B, i, s.B, j);
    return out;
}

Matrix3 cross_flux_matrix(const SolenoidalState& s) {
    Matrix3 out;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            out(i, j) = field_product_integral(s.u, i, s.B, j) -
                        field_product_integral(s.B, i, s.u, j);
    return out;
}

Matrix3 x_moment_matrix(const SpectralField& B) {
    const RealField Bp = to_physical(B);
    const GridSpec& g = B.grid();
    const int n = g.n_per_axis;
    const double dx = g.dx();
    const double c = 0.5 * g.box_length;
    Matrix3 out;
    for (int ci = 0; ci < 3; ++ci) {
        std::array<KahanAccumulator, 3> acc;
        auto bv = Bp.component(ci);
        std::size_t idx = 0;
        for (int i = 0; i < n; ++i) {
            const double x0 = i * dx - c;
            for (int j = 0; j < n; ++j) {
                const double x1 = j * dx - c;
                for (int k = 0; k < n; ++k, ++idx) {
                    const double x2 = k * dx - c;
                    acc[0].add(x0 * bv[idx]);
                    acc[1].add(x1 * bv[idx]);
                    acc[2].add(x2 * bv[idx]);
                }
            }
        }
        for (int cj = 0; cj < 3; ++cj) out(ci, cj) = acc[cj].value() * g.cell_volume();
    }
    return out;
}

MomentMatrices integrate_moment_matrices(std::span<const double> times,
                                         std::span<const std::array<double, 9>> momentum_flux,
                                         std::span<const std::array<double, 9>> cross_flux,
                                         const Matrix3& xB0, const DecayFit& energy_fit,
                                         const MomentOptions& opts) {
    if (times.size() != momentum_flux.size() || times.size() != cross_flux.size() ||
        times.size() < 2)
        throw std::invalid_argument("integrate_moment_matrices: mismatched or short series");

    MomentMatrices mm;
    mm.xB0 = xB0;
    mm.horizon = times.back();
    for (std::size_t i = 1; i < times.size(); ++i) {
        const double h = 0.5 * (times[i] - times[i - 1]);
        for (int e = 0; e < 9; ++e) {
            mm.A_tilde(e / 3, e % 3) += h * (momentum_flux[i][e] + momentum_flux[i - 1][e]);
            mm.C_tilde(e / 3, e % 3) += h * (cross_flux[i][e] + cross_flux[i - 1][e]);
        }
    }

    // Each integrand entry is bounded by E(t); bound the tail by the
    // fitted envelope prefactor * (t+1)^{-exponent}.
    if (!(energy_fit.exponent > 1.0)) {
        std::ostringstream os;
        os << "integrate_moment_matrices: fitted decay exponent " << energy_fit.exponent
           << " <= 1, the time integrals do not converge";
        throw std::invalid_argument(os.str());
    }
    mm.tail_bound = energy_fit.prefactor *
                    std::pow(mm.horizon + 1.0, 1.0 - energy_fit.exponent) /
                    (energy_fit.exponent - 1.0);
    const double scale = std::max({mm.A_tilde.frobenius(), mm.C_tilde.frobenius(), mm.tail_bound});
    mm.tail_fraction = scale > 0.0 ? mm.tail_bound / scale : 0.0;
    if (mm.tail_fraction > opts.max_tail_fraction && !opts.allow_large_tail) {
        std::ostringstream os;
        os << "integrate_moment_matrices: tail beyond T = " << mm.horizon << " contributes "
           << mm.tail_fraction << " > " << opts.max_tail_fraction
           << " of the integral scale (insufficient decay for this horizon)";
        throw std::invalid_argument(os.str());
    }
    return mm;
}

M0Membership m0_membership(const MomentMatrices& mm, double tol) {
    M0Membership out;
    const double af = mm.A_tilde.frobenius();
    if (af > 0.0) {
        Matrix3 dev = mm.A_tilde;
        const double tr3 = mm.A_tilde.trace() / 3.0;
        for (int i = 0; i < 3; ++i) dev(i, i) -= tr3;
        out.scalar_defect = dev.frobenius() / af;
    }
    const double cf = mm.C_tilde.frobenius();
    const double xf = mm.xB0.frobenius();
    const double den = std::max(cf, xf);
    if (den > 0.0) out.c_defect = (mm.C_tilde - mm.xB0).frobenius() / den;
    out.is_member = out.scalar_defect < tol && out.c_defect < tol;
    return out;
}

double weighted_moment(const SolenoidalState& s) {
    const RealField up = to_physical(s.u);
    const RealField Bp = to_physical(s.B);
    const GridSpec& g = s.grid();
    const int n = g.n_per_axis;
    const double dx = g.dx();
    const double c = 0.5 * g.box_length;
    const std::size_t np = g.point_count();
    auto ux = up.raw();
    auto bx = Bp.raw();
    KahanAccumulator acc;
    std::size_t idx = 0;
    for (int i = 0; i < n; ++i) {
        const double x0 = i * dx - c;
        for (int j = 0; j < n; ++j) {
            const double x1 = j * dx - c;
            for (int k = 0; k < n; ++k, ++idx) {
                const double x2 = k * dx - c;
                const double r = std::sqrt(x0 * x0 + x1 * x1 + x2 * x2);
                double e = 0.0;
                for (int cc = 0; cc < 3; ++cc) {
                    e += ux[cc * np + idx] * ux[cc * np + idx];
                    e += bx[cc * np + idx] * bx[cc * np + idx];
                }
                acc.add(r * e);
            }
        }
    }
    return acc.value() * g.cell_volume();
}

double boundary_energy_fraction(const SolenoidalState& s) {
    const RealField up = to_physical(s.u);
    const RealField Bp = to_physical(s.B);
    const GridSpec& g = s.grid();
    const int n = g.n_per_axis;
    const double dx = g.dx();
    const double c = 0.5 * g.box_length;
    const double edge = 0.45 * g.box_length;
    const std::size_t np = g.point_count();
    auto ux = up.raw();
    auto bx = Bp.raw();
    KahanAccumulator total, boundary;
    std::size_t idx = 0;
    for (int i = 0; i < n; ++i) {
        const double x0 = std::abs(i * dx - c);
        for (int j = 0; j < n; ++j) {
            const double x1 = std::abs(j * dx - c);
            for (int k = 0; k < n; ++k, ++idx) {
                const double x2 = std::abs(k * dx - c);
                double e = 0.0;
                for (int cc = 0; cc < 3; ++cc) {
                    e += ux[cc * np + idx] * ux[cc * np + idx];
                    e += bx[cc * np + idx] * bx[cc * np + idx];
                }
                total.add(e);
                if (std::max({x0, x1, x2}) > edge) boundary.add(e);
            }
        }
    }
    const double tot = total.value();
    return tot > 0.0 ? boundary.value() / tot : 0.0;
}

namespace {

double sobolev_inner(const SpectralField& f, const SpectralField& g, double m) {
    detail::check_same_grid(f.grid(), g.grid());
    const GridSpec& gr = f.grid();
    const int n = gr.n_per_axis;
    const double dk = gr.dk();
    const std::size_t np = gr.point_count();
    auto fx = f.raw();
    auto gx = g.raw();
    KahanAccumulator acc;
    std::size_t idx = 0;
    for (int i = 0; i < n; ++i) {
        const double kx = gr.k_axis(i);
        for (int j = 0; j < n; ++j) {
            const double ky = gr.k_axis(j);
            for (int k = 0; k < n; ++k, ++idx) {
                const double kz = dk * gr.mode_of(k);
                const double w = std::pow(1.0 + kx * kx + ky * ky + kz * kz, m);
                double dot = 0.0;
                for (int c = 0; c < 3; ++c) {
                    const Complex a = fx[c * np + idx];
                    const Complex b = gx[c * np + idx];
                    dot += a.real() * b.real() + a.imag() * b.imag();
                }
                acc.add(w * dot);
            }
        }
    }
    return gr.volume() * acc.value();
}

double sobolev_grad_norm_sq(const SpectralField& f, double m) {
    const GridSpec& gr = f.grid();
    const int n = gr.n_per_axis;
    const double dk = gr.dk();
    const std::size_t np = gr.point_count();
    auto fx = f.raw();
    KahanAccumulator acc;
    std::size_t idx = 0;
    for (int i = 0; i < n; ++i) {
        const double kx = gr.k_axis(i);
        for (int j = 0; j < n; ++j) {
            const double ky = gr.k_axis(j);
            for (int k = 0; k < n; ++k, ++idx) {
                const double kz = dk * gr.mode_of(k);
                const double k2 = kx * kx + ky * ky + kz * kz;
                const double w = std::pow(1.0 + k2, m) * k2;
                double mag = 0.0;
                for (int c = 0; c < 3; ++c) mag += std::norm(fx[c * np + idx]);
                acc.add(w * mag);
            }
        }
    }
    return gr.volume() * acc.value();
}

}  // namespace

HmEnergyReport hm_energy_report(const SolenoidalState& s, int m) {
    if (m < 0) throw std::invalid_argument("hm_energy_report: m must be nonnegative");
    // Resolution gate: the outermost dealiased shell must not carry the
    // H^m mass the estimate is about.
    {
        const GridSpec& g = s.grid();
        const int lim = g.dealias_limit();
        const int n = g.n_per_axis;
        const double dk = g.dk();
        const std::size_t np = g.point_count();
        KahanAccumulator top, tot;
        for (const SpectralField* f : {&s.u, &s.B}) {
            auto fx = f->raw();
            std::size_t idx = 0;
            for (int i = 0; i < n; ++i) {
                const int mi = g.mode_of(i);
                for (int j = 0; j < n; ++j) {
                    const int mj = g.mode_of(j);
                    for (int k = 0; k < n; ++k, ++idx) {
                        const int mk = g.mode_of(k);
                        const double k2 = dk * dk * double(mi * mi + mj * mj + mk * mk);
                        const double w = std::pow(1.0 + k2, m);
                        double mag = 0.0;
                        for (int c = 0; c < 3; ++c) mag += std::norm(fx[c * np + idx]);
                        tot.add(w * mag);
                        if (std::max({std::abs(mi), std::abs(mj), std::abs(mk)}) == lim)
                            top.add(w * mag);
                    }
                }
            }
        }
        if (tot.value() > 0.0 && top.value() > 1e-4 * tot.value())
            throw std::invalid_argument(
                "hm_energy_report: state unresolved at this order (outer shell carries > 1e-4 "
                "of the H^m mass)");
    }

    auto [ru, rb] = rhs(s, RhsOptions{});
    const double gu = sobolev_grad_norm_sq(s.u, m);
    const double gb = sobolev_grad_norm_sq(s.B, m);
    HmEnergyReport rep;
    rep.lhs = sobolev_inner(s.u, ru, m) + sobolev_inner(s.B, rb, m) + gu + gb;
    const double hm = sobolev_norm_sq(s.u, m) + sobolev_norm_sq(s.B, m);
    rep.rhs_core = hm * (std::sqrt(gu) + std::sqrt(gb));
    rep.implied_constant = rep.rhs_core > 0.0 ? rep.lhs / rep.rhs_core : 0.0;
    return rep;
}

namespace {

// Fill a field with unit white noise times a centered Gaussian bump.
RealField bumped_noise(const GridSpec& g, SplitMix64& rng, double width) {
    RealField out(g);
    const int n = g.n_per_axis;
    const double dx = g.dx();
    const double c = 0.5 * g.box_length;
    const double inv2w2 = 1.0 / (2.0 * width * width);
    for (int comp = 0; comp < 3; ++comp) {
        auto v = out.component(comp);
        std::size_t idx = 0;
        for (int i = 0; i < n; ++i) {
            const double x0 = i * dx - c;
            for (int j = 0; j < n; ++j) {
                const double x1 = j * dx - c;
                for (int k = 0; k < n; ++k, ++idx) {
                    const double x2 = k * dx - c;
                    const double chi = std::exp(-(x0 * x0 + x1 * x1 + x2 * x2) * inv2w2);
                    v[idx] = rng.next_gaussian() * chi;
                }
            }
        }
    }
    return out;
}

SpectralField shaped_field(const GridSpec& g, SplitMix64 rng, double sigma,
                           const InitialDataOptions& opts) {
    const double width = opts.width_fraction * g.box_length;
    SpectralField f = to_spectral(bumped_noise(g, rng, width));

    double shift = opts.cutoff_shift;
    if (shift <= 0.0) shift = sigma <= 1.0 ? 1.25 - 0.25 * sigma : 1.0;
    const double k_ax = g.k_dealias_axis();
    const double k_taper = opts.taper_start_frac * k_ax;
    const double w_taper = opts.taper_width_frac * k_ax;

    const int n = g.n_per_axis;
    const double dk = g.dk();
    const int lim = g.dealias_limit();
    const std::size_t np = g.point_count();
    auto fx = f.raw();

    auto env = [&](double kmag) {
        if (kmag == 0.0) return 0.0;
        double e = std::pow(kmag, sigma) * std::exp(-shift * kmag * kmag);
        if (kmag > k_taper) {
            const double ex = (kmag - k_taper) / w_taper;
            e *= std::exp(-ex * ex * ex * ex);
        }
        return e;
    };

    std::size_t idx = 0;
    for (int i = 0; i < n; ++i) {
        const int mi = g.mode_of(i);
        for (int j = 0; j < n; ++j) {
            const int mj = g.mode_of(j);
            for (int k = 0; k < n; ++k, ++idx) {
                const int mk = g.mode_of(k);
                double w = 0.0;
                if (std::abs(mi) <= lim && std::abs(mj) <= lim && std::abs(mk) <= lim)
                    w = env(dk * std::sqrt(double(mi * mi + mj * mj + mk * mk)));
                for (int c = 0; c < 3; ++c) fx[c * np + idx] *= w;
            }
        }
    }

    f = leray_project(f);

    if (opts.shell_exact) {
        // Pin each shell's total power to the envelope's, so the heat
        // flow of the data is seed-independent.
        const int nshell = static_cast<int>(std::ceil(std::sqrt(3.0) * lim)) + 1;
        std::vector<double> actual(nshell + 1, 0.0), target(nshell + 1, 0.0);
        auto fx2 = f.raw();
        idx = 0;
        for (int i = 0; i < n; ++i) {
            const int mi = g.mode_of(i);
            for (int j = 0; j < n; ++j) {
                const int mj = g.mode_of(j);
                for (int k = 0; k < n; ++k, ++idx) {
                    const int mk = g.mode_of(k);
                    if (std::abs(mi) > lim || std::abs(mj) > lim || std::abs(mk) > lim) continue;
                    const double kmag = dk * std::sqrt(double(mi * mi + mj * mj + mk * mk));
                    const int sh = std::min<int>(nshell, (int)std::lround(kmag / dk));
                    double mag = 0.0;
                    for (int c = 0; c < 3; ++c) mag += std::norm(fx2[c * np + idx]);
                    actual[sh] += mag;
                    const double e = env(kmag);
                    target[sh] += e * e;
                }
            }
        }
        std::vector<double> scale(nshell + 1, 0.0);
        for (int sh = 0; sh <= nshell; ++sh)
            if (actual[sh] > 0.0) scale[sh] = std::sqrt(target[sh] / actual[sh]);
        idx = 0;
        for (int i = 0; i < n; ++i) {
            const int mi = g.mode_of(i);
            for (int j = 0; j < n; ++j) {
                const int mj = g.mode_of(j);
                for (int k = 0; k < n; ++k, ++idx) {
                    const int mk = g.mode_of(k);
                    const double kmag = dk * std::sqrt(double(mi * mi + mj * mj + mk * mk));
                    const int sh = std::min<int>(nshell, (int)std::lround(kmag / dk));
                    for (int c = 0; c < 3; ++c) fx2[c * np + idx] *= scale[sh];
                }
            }
        }
    }
    return f;
}

void normalize_l2(SpectralField& f, double amplitude) {
    const double nrm = std::sqrt(l2_norm_sq(f));
    if (nrm > 0.0)
        f *= amplitude / nrm;
    else
        f *= 0.0;
}

}  // namespace

SolenoidalState make_initial_data(double sigma, double amplitude, std::uint64_t seed,
                                  const GridSpec& grid, const InitialDataOptions& opts) {
    if (sigma < 0.0) throw std::invalid_argument("make_initial_data: sigma must be nonnegative");
    grid.validate();
    SolenoidalState s(grid);
    if (amplitude == 0.0) return s;
    s.u = shaped_field(grid, SplitMix64::stream(seed, 0), sigma, opts);
    s.B = shaped_field(grid, SplitMix64::stream(seed, 1), sigma, opts);
    normalize_l2(s.u, amplitude);
    normalize_l2(s.B, amplitude);
    return s;
}

SolenoidalState random_state(const GridSpec& grid, std::uint64_t seed, double kc,
                             double amplitude) {
    grid.validate();
    auto one = [&](std::uint64_t tag) {
        SplitMix64 rng = SplitMix64::stream(seed, tag);
        RealField noise(grid);
        for (int c = 0; c < 3; ++c)
            for (auto& v : noise.component(c)) v = rng.next_gaussian();
        SpectralField f = to_spectral(noise);
        const GridSpec& g = grid;
        const int n = g.n_per_axis;
        const double dk = g.dk();
        const std::size_t np = g.point_count();
        auto fx = f.raw();
        std::size_t idx = 0;
        for (int i = 0; i < n; ++i) {
            const int mi = g.mode_of(i);
            for (int j = 0; j < n; ++j) {
                const int mj = g.mode_of(j);
                for (int k = 0; k < n; ++k, ++idx) {
                    const int mk = g.mode_of(k);
                    const double k2 = dk * dk * double(mi * mi + mj * mj + mk * mk);
                    const double w = (mi == 0 && mj == 0 && mk == 0)
                                         ? 0.0
                                         : std::exp(-k2 / (kc * kc));
                    for (int c = 0; c < 3; ++c) fx[c * np + idx] *= w;
                }
            }
        }
        f = leray_project(f);
        dealias_in_place(f);
        normalize_l2(f, amplitude);
        return f;
    };
    SolenoidalState s(grid);
    s.u = one(0);
    s.B = one(1);
    return s;
}

}  // namespace hallmhd
