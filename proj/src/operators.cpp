#include "hallmhd/operators.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace hallmhd {

namespace {

// Apply op(k_vector, mode_triple, coeff_index) over the lattice.
template <class F>
void for_each_mode(const GridSpec& g, F&& op) {
    const int n = g.n_per_axis;
    const double dk = g.dk();
    std::size_t idx = 0;
    for (int i = 0; i < n; ++i) {
        const int mi = g.mode_of(i);
        const double kx = dk * mi;
        for (int j = 0; j < n; ++j) {
            const int mj = g.mode_of(j);
            const double ky = dk * mj;
            for (int k = 0; k < n; ++k, ++idx) {
                const int mk = g.mode_of(k);
                const double kz = dk * mk;
                op(std::array<double, 3>{kx, ky, kz}, std::array<int, 3>{mi, mj, mk}, idx);
            }
        }
    }
}

}  // namespace

SpectralField derivative(const SpectralField& f, int axis) {
    if (axis < 0 || axis > 2) throw std::invalid_argument("derivative: axis must be 0, 1 or 2");
    SpectralField out(f.grid());
    auto fx = f.raw();
    auto ox = out.raw();
    const std::size_t np = f.point_count();
    for_each_mode(f.grid(), [&](const std::array<double, 3>& k, const std::array<int, 3>&,
                                std::size_t idx) {
        const Complex ik(0.0, k[axis]);
        for (int c = 0; c < 3; ++c) ox[c * np + idx] = ik * fx[c * np + idx];
    });
    return out;
}

SpectralField curl(const SpectralField& f) {
    SpectralField out(f.grid());
    auto fx = f.raw();
    auto ox = out.raw();
    const std::size_t np = f.point_count();
    for_each_mode(f.grid(), [&](const std::array<double, 3>& k, const std::array<int, 3>&,
                                std::size_t idx) {
        const Complex f0 = fx[idx], f1 = fx[np + idx], f2 = fx[2 * np + idx];
        const Complex i(0.0, 1.0);
        ox[idx] = i * (k[1] * f2 - k[2] * f1);
        ox[np + idx] = i * (k[2] * f0 - k[0] * f2);
        ox[2 * np + idx] = i * (k[0] * f1 - k[1] * f0);
    });
    return out;
}

SpectralScalar divergence(const SpectralField& f) {
    SpectralScalar out(f.grid());
    auto fx = f.raw();
    auto ox = out.raw();
    const std::size_t np = f.point_count();
    for_each_mode(f.grid(), [&](const std::array<double, 3>& k, const std::array<int, 3>&,
                                std::size_t idx) {
        ox[idx] = Complex(0.0, 1.0) *
                  (k[0] * fx[idx] + k[1] * fx[np + idx] + k[2] * fx[2 * np + idx]);
    });
    return out;
}

SpectralField gradient(const SpectralScalar& f) {
    SpectralField out(f.grid());
    auto fx = f.raw();
    auto ox = out.raw();
    const std::size_t np = f.point_count();
    for_each_mode(f.grid(), [&](const std::array<double, 3>& k, const std::array<int, 3>&,
                                std::size_t idx) {
        const Complex iv = Complex(0.0, 1.0) * fx[idx];
        ox[idx] = k[0] * iv;
        ox[np + idx] = k[1] * iv;
        ox[2 * np + idx] = k[2] * iv;
    });
    return out;
}

SpectralField laplacian(const SpectralField& f) {
    SpectralField out(f.grid());
    auto fx = f.raw();
    auto ox = out.raw();
    const std::size_t np = f.point_count();
    for_each_mode(f.grid(), [&](const std::array<double, 3>& k, const std::array<int, 3>&,
                                std::size_t idx) {
        const double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
        for (int c = 0; c < 3; ++c) ox[c * np + idx] = -k2 * fx[c * np + idx];
    });
    return out;
}

SpectralField lambda_pow(const SpectralField& f, double r) {
    if (r < 0.0) throw std::invalid_argument("lambda_pow: r must be nonnegative");
    SpectralField out(f.grid());
    auto fx = f.raw();
    auto ox = out.raw();
    const std::size_t np = f.point_count();
    for_each_mode(f.grid(), [&](const std::array<double, 3>& k, const std::array<int, 3>&,
                                std::size_t idx) {
        const double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
        double w;
        if (k2 == 0.0)
            w = (r == 0.0) ? 1.0 : 0.0;
        else
            w = std::pow(k2, 0.5 * r);
        for (int c = 0; c < 3; ++c) ox[c * np + idx] = w * fx[c * np + idx];
    });
    return out;
}

SpectralField leray_project(const SpectralField& f) {
    SpectralField out(f.grid());
    auto fx = f.raw();
    auto ox = out.raw();
    const std::size_t np = f.point_count();
    for_each_mode(f.grid(), [&](const std::array<double, 3>& k, const std::array<int, 3>&,
                                std::size_t idx) {
        const double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
        const Complex f0 = fx[idx], f1 = fx[np + idx], f2 = fx[2 * np + idx];
        if (k2 == 0.0) {
            ox[idx] = f0;
            ox[np + idx] = f1;
            ox[2 * np + idx] = f2;
            return;
        }
        const Complex kf = (k[0] * f0 + k[1] * f1 + k[2] * f2) / k2;
        ox[idx] = f0 - k[0] * kf;
        ox[np + idx] = f1 - k[1] * kf;
        ox[2 * np + idx] = f2 - k[2] * kf;
    });
    return out;
}

bool is_dealiased_mode(const GridSpec& g, int mi, int mj, int mk) {
    const int lim = g.dealias_limit();
    return std::abs(mi) <= lim && std::abs(mj) <= lim && std::abs(mk) <= lim;
}

void dealias_in_place(SpectralField& f) {
    auto fx = f.raw();
    const std::size_t np = f.point_count();
    const int lim = f.grid().dealias_limit();
    for_each_mode(f.grid(), [&](const std::array<double, 3>&, const std::array<int, 3>& m,
                                std::size_t idx) {
        if (std::abs(m[0]) > lim || std::abs(m[1]) > lim || std::abs(m[2]) > lim) {
            fx[idx] = Complex{};
            fx[np + idx] = Complex{};
            fx[2 * np + idx] = Complex{};
        }
    });
}

SpectralField dealias(const SpectralField& f) {
    SpectralField out = f;
    dealias_in_place(out);
    return out;
}

double l2_norm_sq(const SpectralField& f) {
    KahanAccumulator acc;
    for (const auto& c : f.raw()) acc.add(std::norm(c));
    return f.grid().volume() * acc.value();
}

double l2_inner(const SpectralField& f, const SpectralField& g) {
    detail::check_same_grid(f.grid(), g.grid());
    KahanAccumulator acc;
    auto fx = f.raw();
    auto gx = g.raw();
    for (std::size_t i = 0; i < fx.size(); ++i)
        acc.add(fx[i].real() * gx[i].real() + fx[i].imag() * gx[i].imag());
    return f.grid().volume() * acc.value();
}

double lambda_norm_sq(const SpectralField& f, double r) {
    if (r < 0.0) throw std::invalid_argument("lambda_norm_sq: r must be nonnegative");
    KahanAccumulator acc;
    auto fx = f.raw();
    const std::size_t np = f.point_count();
    for_each_mode(f.grid(), [&](const std::array<double, 3>& k, const std::array<int, 3>&,
                                std::size_t idx) {
        const double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
        double w;
        if (k2 == 0.0)
            w = (r == 0.0) ? 1.0 : 0.0;
        else
            w = std::pow(k2, r);
        if (w == 0.0) return;
        acc.add(w * (std::norm(fx[idx]) + std::norm(fx[np + idx]) + std::norm(fx[2 * np + idx])));
    });
    return f.grid().volume() * acc.value();
}

double sobolev_norm_sq(const SpectralField& f, double m) {
    KahanAccumulator acc;
    auto fx = f.raw();
    const std::size_t np = f.point_count();
    for_each_mode(f.grid(), [&](const std::array<double, 3>& k, const std::array<int, 3>&,
                                std::size_t idx) {
        const double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
        const double w = std::pow(1.0 + k2, m);
        acc.add(w * (std::norm(fx[idx]) + std::norm(fx[np + idx]) + std::norm(fx[2 * np + idx])));
    });
    return f.grid().volume() * acc.value();
}

double integrate(const RealScalar& f) {
    KahanAccumulator acc;
    for (double v : f.raw()) acc.add(v);
    return acc.value() * f.grid().cell_volume();
}

double max_magnitude(const RealField& f) {
    const std::size_t np = f.point_count();
    auto fx = f.raw();
    double best = 0.0;
    for (std::size_t i = 0; i < np; ++i) {
        const double m2 = fx[i] * fx[i] + fx[np + i] * fx[np + i] + fx[2 * np + i] * fx[2 * np + i];
        if (m2 > best) best = m2;
    }
    return std::sqrt(best);
}

double hermitian_defect(const SpectralField& f) {
    const int n = f.grid().n_per_axis;
    double worst = 0.0;
    for (int c = 0; c < 3; ++c) {
        for (int i = 0; i < n; ++i) {
            const int mi = (n - i) % n;
            for (int j = 0; j < n; ++j) {
                const int mj = (n - j) % n;
                for (int k = 0; k < n; ++k) {
                    const int mk = (n - k) % n;
                    const Complex d = f.at(c, i, j, k) - std::conj(f.at(c, mi, mj, mk));
                    worst = std::max(worst, std::abs(d));
                }
            }
        }
    }
    return worst;
}

double divergence_defect(const SpectralField& f) {
    auto fx = f.raw();
    const std::size_t np = f.point_count();
    double worst = 0.0;
    for_each_mode(f.grid(), [&](const std::array<double, 3>& k, const std::array<int, 3>&,
                                std::size_t idx) {
        const Complex kf = k[0] * fx[idx] + k[1] * fx[np + idx] + k[2] * fx[2 * np + idx];
        worst = std::max(worst, std::abs(kf));
    });
    return worst;
}

double max_abs_coeff(const SpectralField& f) {
    double worst = 0.0;
    for (const auto& c : f.raw()) worst = std::max(worst, std::abs(c));
    return worst;
}

}  // namespace hallmhd
