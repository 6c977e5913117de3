#include "hallmhd/fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>

namespace hallmhd {

namespace {

struct PlanSet {
    int n = 0;
    std::size_t nreal = 0, nhalf = 0;
    double* rbuf = nullptr;
    fftw_complex* cbuf = nullptr;
    fftw_plan r2c = nullptr;
    fftw_plan c2r = nullptr;
    std::mutex mtx;

    explicit PlanSet(int n_) : n(n_) {
        nreal = static_cast<std::size_t>(n) * n * n;
        nhalf = static_cast<std::size_t>(n) * n * (n / 2 + 1);
        rbuf = fftw_alloc_real(nreal);
        cbuf = fftw_alloc_complex(nhalf);
        r2c = fftw_plan_dft_r2c_3d(n, n, n, rbuf, cbuf, FFTW_ESTIMATE);
        c2r = fftw_plan_dft_c2r_3d(n, n, n, cbuf, rbuf, FFTW_ESTIMATE);
    }
    ~PlanSet() {
        fftw_destroy_plan(r2c);
        fftw_destroy_plan(c2r);
        fftw_free(rbuf);
        fftw_free(cbuf);
    }
    PlanSet(const PlanSet&) = delete;
    PlanSet& operator=(const PlanSet&) = delete;
};

PlanSet& plans_for(int n) {
    static std::mutex cache_mtx;
    static std::map<int, std::unique_ptr<PlanSet>> cache;
    std::lock_guard lock(cache_mtx);
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<PlanSet>(n);
    return *slot;
}

// One real component -> full complex lattice (with 1/n^3).
void forward_component(PlanSet& p, const double* in, Complex* out) {
    const int n = p.n;
    const int nh = n / 2 + 1;
    const double norm = 1.0 / static_cast<double>(p.nreal);
    std::lock_guard lock(p.mtx);
    for (std::size_t i = 0; i < p.nreal; ++i) p.rbuf[i] = in[i];
    fftw_execute(p.r2c);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const std::size_t row = (static_cast<std::size_t>(i) * n + j) * n;
            const std::size_t hrow = (static_cast<std::size_t>(i) * n + j) * nh;
            for (int k = 0; k < nh; ++k) {
                out[row + k] = Complex(p.cbuf[hrow + k][0], p.cbuf[hrow + k][1]) * norm;
            }
        }
    }
    // Hermitian mirror for k3 in (n/2, n): conj of the (-m) entry.
    for (int i = 0; i < n; ++i) {
        const int mi = (n - i) % n;
        for (int j = 0; j < n; ++j) {
            const int mj = (n - j) % n;
            const std::size_t row = (static_cast<std::size_t>(i) * n + j) * n;
            const std::size_t mrow = (static_cast<std::size_t>(mi) * n + mj) * n;
            for (int k = nh; k < n; ++k) {
                out[row + k] = std::conj(out[mrow + (n - k)]);
            }
        }
    }
}

// Full complex lattice (assumed Hermitian) -> one real component.
void inverse_component(PlanSet& p, const Complex* in, double* out) {
    const int n = p.n;
    const int nh = n / 2 + 1;
    std::lock_guard lock(p.mtx);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const std::size_t row = (static_cast<std::size_t>(i) * n + j) * n;
            const std::size_t hrow = (static_cast<std::size_t>(i) * n + j) * nh;
            for (int k = 0; k < nh; ++k) {
                p.cbuf[hrow + k][0] = in[row + k].real();
                p.cbuf[hrow + k][1] = in[row + k].imag();
            }
        }
    }
    fftw_execute(p.c2r);
    for (std::size_t i = 0; i < p.nreal; ++i) out[i] = p.rbuf[i];
}

}  // namespace

RealField to_physical(const SpectralField& f) {
    RealField out(f.grid());
    auto& p = plans_for(f.grid().n_per_axis);
    for (int c = 0; c < 3; ++c)
        inverse_component(p, f.component(c).data(), out.component(c).data());
    return out;
}

SpectralField to_spectral(const RealField& f) {
    SpectralField out(f.grid());
    auto& p = plans_for(f.grid().n_per_axis);
    for (int c = 0; c < 3; ++c)
        forward_component(p, f.component(c).data(), out.component(c).data());
    return out;
}

RealScalar to_physical(const SpectralScalar& f) {
    RealScalar out(f.grid());
    auto& p = plans_for(f.grid().n_per_axis);
    inverse_component(p, f.raw().data(), out.raw().data());
    return out;
}

SpectralScalar to_spectral(const RealScalar& f) {
    SpectralScalar out(f.grid());
    auto& p = plans_for(f.grid().n_per_axis);
    forward_component(p, f.raw().data(), out.raw().data());
    return out;
}

}  // namespace hallmhd
