#include "hallmhd/rhs.hpp"

#include <array>
#include <cmath>

#include "hallmhd/fft.hpp"

namespace hallmhd {

namespace {

RealField cross_physical(const RealField& a, const RealField& b) {
    RealField out(a.grid());
    const std::size_t np = a.point_count();
    auto ax = a.raw();
    auto bx = b.raw();
    auto ox = out.raw();
    for (std::size_t i = 0; i < np; ++i) {
        const double a0 = ax[i], a1 = ax[np + i], a2 = ax[2 * np + i];
        const double b0 = bx[i], b1 = bx[np + i], b2 = bx[2 * np + i];
        ox[i] = a1 * b2 - a2 * b1;
        ox[np + i] = a2 * b0 - a0 * b2;
        ox[2 * np + i] = a0 * b1 - a1 * b0;
    }
    return out;
}

}  // namespace

SpectralField nonlinear_product(const SpectralField& a, const SpectralField& b, ProductForm form) {
    detail::check_same_grid(a.grid(), b.grid());
    if (form == ProductForm::Cross) {
        SpectralField out = to_spectral(cross_physical(to_physical(a), to_physical(b)));
        dealias_in_place(out);
        return out;
    }
    // (a . grad) b, component-wise: sum_j a_j d_j b_i.
    const RealField ap = to_physical(a);
    RealField prod(a.grid());
    const std::size_t np = a.point_count();
    for (int j = 0; j < 3; ++j) {
        const RealField dbj = to_physical(derivative(b, j));
        auto av = ap.component(j);
        for (int i = 0; i < 3; ++i) {
            auto dv = dbj.component(i);
            auto pv = prod.component(i);
            for (std::size_t x = 0; x < np; ++x) pv[x] += av[x] * dv[x];
        }
    }
    SpectralField out = to_spectral(prod);
    dealias_in_place(out);
    return out;
}

SpectralField hall_term(const SpectralField& B) {
    const SpectralField J = curl(B);
    SpectralField jxb = to_spectral(cross_physical(to_physical(J), to_physical(B)));
    SpectralField out = curl(jxb);
    dealias_in_place(out);
    return out;
}

std::pair<SpectralField, SpectralField> rhs(const SolenoidalState& s, const RhsOptions& opts) {
    const GridSpec& g = s.grid();
    SpectralField du(g), dB(g);

    if (opts.nonlinear || opts.hall) {
        const RealField up = to_physical(s.u);
        const RealField Bp = to_physical(s.B);
        const RealField Jp = to_physical(curl(s.B));

        if (opts.nonlinear) {
            const RealField om = to_physical(curl(s.u));
            // u.grad u - B.grad B = omega x u - J x B + grad(...), and the
            // projection removes the gradient part exactly.
            RealField mom = cross_physical(om, up);
            {
                RealField jxb = cross_physical(Jp, Bp);
                auto mv = mom.raw();
                auto jv = jxb.raw();
                for (std::size_t i = 0; i < mv.size(); ++i) mv[i] = jv[i] - mv[i];
            }
            SpectralField mom_hat = to_spectral(mom);
            dealias_in_place(mom_hat);
            du = leray_project(mom_hat);

            // u.grad B - B.grad u = -curl(u x B) for solenoidal fields.
            SpectralField uxb = to_spectral(cross_physical(up, Bp));
            dealias_in_place(uxb);
            dB = curl(uxb);
        }
        if (opts.hall) {
            SpectralField jxb_hat = to_spectral(cross_physical(Jp, Bp));
            dealias_in_place(jxb_hat);
            dB -= curl(jxb_hat);
        }
    }

    if (opts.laplacian) {
        du += laplacian(s.u);
        dB += laplacian(s.B);
    }
    return {std::move(du), std::move(dB)};
}

RhsTerms rhs_terms(const SolenoidalState& s) {
    RhsTerms t{
        nonlinear_product(s.u, s.u, ProductForm::Advection),
        nonlinear_product(s.B, s.B, ProductForm::Advection),
        nonlinear_product(s.B, s.u, ProductForm::Advection),
        nonlinear_product(s.u, s.B, ProductForm::Advection),
        hall_term(s.B),
        SpectralField(s.grid()),
        SpectralField(s.grid()),
    };
    t.H_hat = leray_project(t.advection - t.lorentz);
    t.M_hat = t.induction_advect - t.induction_stretch + t.hall;
    return t;
}

std::pair<SpectralField, SpectralField> symbol_fields(const SolenoidalState& s) {
    const GridSpec& g = s.grid();
    const int n = g.n_per_axis;
    const std::size_t np = g.point_count();
    const RealField up = to_physical(s.u);
    const RealField Bp = to_physical(s.B);

    // a_lj = (u_l u_j)^ and b_lj = (B_l B_j)^ (symmetric, 6 each);
    // c_lj = (u_j B_l)^ (all 9).
    std::array<SpectralScalar, 6> uu, bb;
    std::array<SpectralScalar, 9> ub;
    auto sym = [](int l, int j) { return l <= j ? l * 3 + j - l * (l + 1) / 2 : j * 3 + l - j * (j + 1) / 2; };
    for (int l = 0; l < 3; ++l) {
        for (int j = l; j < 3; ++j) {
            RealScalar pu(g), pb(g);
            auto ul = up.component(l);
            auto uj = up.component(j);
            auto bl = Bp.component(l);
            auto bj = Bp.component(j);
            for (std::size_t x = 0; x < np; ++x) {
                pu.raw()[x] = ul[x] * uj[x];
                pb.raw()[x] = bl[x] * bj[x];
            }
            uu[sym(l, j)] = to_spectral(pu);
            bb[sym(l, j)] = to_spectral(pb);
        }
    }
    for (int l = 0; l < 3; ++l) {
        for (int j = 0; j < 3; ++j) {
            RealScalar p(g);
            auto bl = Bp.component(l);
            auto uj = up.component(j);
            for (std::size_t x = 0; x < np; ++x) p.raw()[x] = uj[x] * bl[x];
            ub[l * 3 + j] = to_spectral(p);
        }
    }

    SpectralField H(g), M(g);
    const double dk = g.dk();
    const int lim = g.dealias_limit();
    std::size_t idx = 0;
    for (int i = 0; i < n; ++i) {
        const int mi = g.mode_of(i);
        for (int j = 0; j < n; ++j) {
            const int mj = g.mode_of(j);
            for (int k = 0; k < n; ++k, ++idx) {
                const int mk = g.mode_of(k);
                if (std::abs(mi) > lim || std::abs(mj) > lim || std::abs(mk) > lim) continue;
                const std::array<double, 3> kv{dk * mi, dk * mj, dk * mk};
                const double k2 = kv[0] * kv[0] + kv[1] * kv[1] + kv[2] * kv[2];

                std::array<Complex, 3> Ak{}, Ck{}, V{};
                for (int l = 0; l < 3; ++l) {
                    for (int q = 0; q < 3; ++q) {
                        const Complex a_lq = uu[sym(l, q)].raw()[idx] - bb[sym(l, q)].raw()[idx];
                        const Complex c_lq = ub[l * 3 + q].raw()[idx] - ub[q * 3 + l].raw()[idx];
                        Ak[l] += a_lq * kv[q];
                        Ck[l] += c_lq * kv[q];
                        V[l] += kv[q] * bb[sym(q, l)].raw()[idx];
                    }
                }
                const Complex im(0.0, 1.0);
                if (k2 == 0.0) {
                    for (int l = 0; l < 3; ++l) {
                        H.raw()[l * np + idx] = im * Ak[l];
                        M.raw()[l * np + idx] = im * Ck[l];
                    }
                    continue;
                }
                const Complex kA = (kv[0] * Ak[0] + kv[1] * Ak[1] + kv[2] * Ak[2]) / k2;
                const std::array<Complex, 3> kxV{kv[1] * V[2] - kv[2] * V[1],
                                                 kv[2] * V[0] - kv[0] * V[2],
                                                 kv[0] * V[1] - kv[1] * V[0]};
                for (int l = 0; l < 3; ++l) {
                    H.raw()[l * np + idx] = im * (Ak[l] - kv[l] * kA);
                    M.raw()[l * np + idx] = im * Ck[l] - kxV[l];
                }
            }
        }
    }
    return {std::move(H), std::move(M)};
}

SymbolBoundReport symbol_bound_report(const SolenoidalState& s) {
    const double E = energy(s);
    const double B2 = l2_norm_sq(s.B);
    SymbolBoundReport rep;
    if (E == 0.0) return rep;

    const GridSpec& g = s.grid();
    const int n = g.n_per_axis;
    const std::size_t np = g.point_count();
    auto [H, M_full] = symbol_fields(s);
    // Separate M's linear part from the Hall (quadratic-in-|k|) part by
    // rebuilding the Hall symbol alone.
    const SpectralField hall_sym = hall_term(s.B);

    const double dk = g.dk();
    const int lim = g.dealias_limit();
    std::size_t idx = 0;
    for (int i = 0; i < n; ++i) {
        const int mi = g.mode_of(i);
        for (int j = 0; j < n; ++j) {
            const int mj = g.mode_of(j);
            for (int k = 0; k < n; ++k, ++idx) {
                const int mk = g.mode_of(k);
                if (mi == 0 && mj == 0 && mk == 0) continue;
                if (std::abs(mi) > lim || std::abs(mj) > lim || std::abs(mk) > lim) continue;
                const double kx = dk * mi, ky = dk * mj, kz = dk * mk;
                const double kmag = std::sqrt(kx * kx + ky * ky + kz * kz);
                double h2 = 0.0, q2 = 0.0, lin2 = 0.0;
                for (int c = 0; c < 3; ++c) {
                    h2 += std::norm(H.raw()[c * np + idx]);
                    const Complex quad = hall_sym.raw()[c * np + idx];
                    q2 += std::norm(quad);
                    lin2 += std::norm(M_full.raw()[c * np + idx] - quad);
                }
                rep.ratio_H = std::max(rep.ratio_H, std::sqrt(h2) / (kmag * E));
                rep.ratio_M_linear = std::max(rep.ratio_M_linear, std::sqrt(lin2) / (kmag * E));
                if (B2 > 0.0)
                    rep.ratio_M_quadratic =
                        std::max(rep.ratio_M_quadratic, std::sqrt(q2) / (kmag * kmag * B2));
            }
        }
    }
    return rep;
}

}  // namespace hallmhd
