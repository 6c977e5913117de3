#include "hallmhd/gevrey.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

namespace hallmhd {

double tau_schedule(double t, const GevreyParams& p) {
    p.validate();
    if (t < 0.0) throw std::invalid_argument("tau_schedule: t must be nonnegative");
    return std::sqrt(p.tau0 * p.tau0 + p.alpha_tau * t);
}

namespace {

// Split accumulation of L^3 sum w(k) |f|^2 with w = |k|^{2r} e^{2 tau |k|}:
// `direct` path when every exponent is small, log-sum-exp otherwise.
struct GevreySum {
    double r, tau;
    bool use_log;
    KahanAccumulator direct;
    double max_log = -std::numeric_limits<double>::infinity();
    std::vector<double> logs;  // only in log mode
    double k_at_max = 0.0;

    GevreySum(double r_, double tau_, double kmax) : r(r_), tau(tau_) {
        use_log = 2.0 * tau * kmax > 600.0;
    }

    void add(double kmag, double coeff_sq) {
        if (coeff_sq == 0.0) return;
        if (kmag == 0.0) {
            if (r == 0.0) {
                if (use_log)
                    logs.push_back(std::log(coeff_sq));
                else
                    direct.add(coeff_sq);
            }
            return;
        }
        if (!use_log) {
            direct.add(std::pow(kmag, 2.0 * r) * std::exp(2.0 * tau * kmag) * coeff_sq);
            return;
        }
        const double lg = 2.0 * r * std::log(kmag) + 2.0 * tau * kmag + std::log(coeff_sq);
        logs.push_back(lg);
        if (lg > max_log) {
            max_log = lg;
            k_at_max = kmag;
        }
    }

    double finish(double volume) {
        if (!use_log) return volume * direct.value();
        if (logs.empty()) return 0.0;
        KahanAccumulator acc;
        for (double lg : logs) acc.add(std::exp(lg - max_log));
        const double log_total = max_log + std::log(acc.value()) + std::log(volume);
        if (log_total > std::log(std::numeric_limits<double>::max())) {
            std::ostringstream os;
            os << "gevrey_norm overflows double range even via log-sum-exp"
               << " (largest offending |k| = " << k_at_max << ", log total = " << log_total << ")";
            throw GevreyOverflow(os.str(), k_at_max);
        }
        return std::exp(log_total);
    }
};

template <class PerMode>
void scan_modes(const GridSpec& g, PerMode&& fn) {
    const int n = g.n_per_axis;
    const double dk = g.dk();
    std::size_t idx = 0;
    for (int i = 0; i < n; ++i) {
        const int mi = g.mode_of(i);
        for (int j = 0; j < n; ++j) {
            const int mj = g.mode_of(j);
            for (int k = 0; k < n; ++k, ++idx) {
                const int mk = g.mode_of(k);
                const double kx = dk * mi, ky = dk * mj, kz = dk * mk;
                fn(std::sqrt(kx * kx + ky * ky + kz * kz),
                   std::max({std::abs(mi), std::abs(mj), std::abs(mk)}), idx);
            }
        }
    }
}

double coeff_sq_at(const SpectralField& f, std::size_t idx) {
    const std::size_t np = f.point_count();
    auto fx = f.raw();
    return std::norm(fx[idx]) + std::norm(fx[np + idx]) + std::norm(fx[2 * np + idx]);
}

}  // namespace

double gevrey_norm(const SpectralField& f, double r, double tau) {
    if (r < 0.0 || tau < 0.0)
        throw std::invalid_argument("gevrey_norm: r and tau must be nonnegative");
    GevreySum sum(r, tau, f.grid().k_max_dealiased() + f.grid().dk());
    scan_modes(f.grid(), [&](double kmag, int, std::size_t idx) {
        sum.add(kmag, coeff_sq_at(f, idx));
    });
    return sum.finish(f.grid().volume());
}

GevreyRecord gevrey_record(const SolenoidalState& s, const GevreyParams& p) {
    p.validate();
    GevreyRecord rec;
    rec.t = s.time;
    rec.tau = tau_schedule(s.time, p);
    rec.J_r = lambda_norm_sq(s.u, p.r);
    rec.H_r = lambda_norm_sq(s.B, p.r);
    rec.G_r = gevrey_norm(s.u, p.r, rec.tau);
    rec.K_r = gevrey_norm(s.B, p.r, rec.tau);
    rec.N_r = rec.J_r + rec.H_r;
    rec.M_r = rec.G_r + rec.K_r;
    rec.ratio = std::numeric_limits<double>::quiet_NaN();

    // Resolution: the outermost dealiased mode shell must carry < 1e-6
    // of the Gevrey sum, else the record is flagged.
    const int lim = s.grid().dealias_limit();
    KahanAccumulator top;
    for (const SpectralField* f : {&s.u, &s.B}) {
        scan_modes(s.grid(), [&](double kmag, int linf, std::size_t idx) {
            if (linf != lim || kmag == 0.0) return;
            const double c2 = coeff_sq_at(*f, idx);
            if (c2 == 0.0) return;
            top.add(std::pow(kmag, 2.0 * p.r) * std::exp(2.0 * rec.tau * kmag) * c2);
        });
    }
    const double top_sum = s.grid().volume() * top.value();
    rec.resolved = !(rec.M_r > 0.0) || top_sum < 1e-6 * rec.M_r;
    return rec;
}

void fill_gevrey_ratio(std::vector<GevreyRecord>& records, const GevreyParams& p, double gamma) {
    for (auto& rec : records) rec.ratio = rec.M_r * std::pow(rec.tau, 2.0 * (gamma + p.r));
}

std::vector<GevreyRecord> track_gevrey(std::span<const SolenoidalState> snapshots,
                                       const GevreyParams& p, double gamma) {
    std::vector<GevreyRecord> out;
    out.reserve(snapshots.size());
    for (const auto& s : snapshots) out.push_back(gevrey_record(s, p));
    fill_gevrey_ratio(out, p, gamma);
    return out;
}

Lemma32Report lemma32_check(const SpectralField& f, double p, double q, double tau) {
    if (p < 0.0 || q < 0.0 || tau < 0.0)
        throw std::invalid_argument("lemma32_check: p, q, tau must be nonnegative");
    Lemma32Report rep;

    const double norm_p = lambda_norm_sq(f, p);
    const double gev_p = gevrey_norm(f, p, tau);

    // (3.6): ||L^p e^{tau L} u||^2 <= 2 ||L^p u||^2 + 2 tau^2 ||L^{p+1} e^{tau L} u||^2
    {
        auto& c = rep.ineq_3_6;
        c.lhs = gev_p;
        c.rhs_core = norm_p + tau * tau * gevrey_norm(f, p + 1.0, tau);
        c.ceiling = 2.0;
        c.implied_constant = c.rhs_core > 0.0 ? c.lhs / c.rhs_core : 0.0;
        c.holds = c.lhs <= c.ceiling * c.rhs_core * (1.0 + 1e-12) || c.lhs == 0.0;
    }

    // (3.7): ||L^p e^{tau L} u||^2 <= e ||L^p u||^2 + (2 tau)^{2q} ||L^{p+q} e^{tau L} u||^2
    {
        auto& c = rep.ineq_3_7;
        c.lhs = gev_p;
        c.rhs_core = norm_p + std::pow(2.0 * tau, 2.0 * q) * gevrey_norm(f, p + q, tau);
        c.ceiling = std::exp(1.0);
        c.implied_constant = c.rhs_core > 0.0 ? c.lhs / c.rhs_core : 0.0;
        c.holds = c.lhs <= c.ceiling * c.rhs_core * (1.0 + 1e-12) || c.lhs == 0.0;
        c.degenerate = (q == 0.0);  // rhs then contains the lhs itself
    }

    // (3.8): ||L^q u||^2 <= c(p,q) tau^{p-2q} ||u|| ||L^p e^{tau L} u||,
    // c(p,q) = ((4q-2p)/(2e))^{2q-p} from sup_x x^{4q-2p} e^{-2x}.
    {
        auto& c = rep.ineq_3_8;
        if (2.0 * q < p) throw std::invalid_argument("lemma32_check: (3.8) needs 2q >= p");
        if (tau <= 0.0) throw std::invalid_argument("lemma32_check: (3.8) needs tau > 0");
        const double a = 4.0 * q - 2.0 * p;
        c.lhs = lambda_norm_sq(f, q);
        c.rhs_core = std::pow(tau, p - 2.0 * q) * std::sqrt(l2_norm_sq(f)) * std::sqrt(gev_p);
        c.ceiling = a == 0.0 ? 1.0 : std::pow(a / (2.0 * std::exp(1.0)), 0.5 * a);
        c.implied_constant = c.rhs_core > 0.0 ? c.lhs / c.rhs_core : 0.0;
        c.holds = c.lhs <= c.ceiling * c.rhs_core * (1.0 + 1e-9) || c.lhs == 0.0;
    }
    return rep;
}

RadiusEstimate radius_estimate(const SpectralField& f, const RadiusOptions& opts) {
    const GridSpec& g = f.grid();
    const double dk = g.dk();
    const int nshell = g.dealias_limit();  // radial shells complete up to here

    std::vector<double> shell_max(nshell + 1, 0.0);
    std::vector<double> shell_energy(nshell + 1, 0.0);
    scan_modes(g, [&](double kmag, int, std::size_t idx) {
        const int s = static_cast<int>(std::lround(kmag / dk));
        if (s > nshell) return;
        const double c2 = coeff_sq_at(f, idx);
        shell_energy[s] += c2;
        shell_max[s] = std::max(shell_max[s], std::sqrt(c2));
    });

    int peak = 1;
    for (int s = 1; s <= nshell; ++s)
        if (shell_energy[s] > shell_energy[peak]) peak = s;

    std::vector<double> ks, ys;
    for (int s = peak; s <= nshell; ++s) {
        if (shell_max[s] <= opts.amplitude_floor) continue;
        ks.push_back(s * dk);
        ys.push_back(-std::log(shell_max[s]));
    }
    if (static_cast<int>(ks.size()) < opts.min_shells) {
        std::ostringstream os;
        os << "radius_estimate: only " << ks.size() << " populated shells beyond the energy peak"
           << " (need " << opts.min_shells << ")";
        throw std::invalid_argument(os.str());
    }

    const std::size_t n = ks.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += ks[i];
        sy += ys[i];
        sxx += ks[i] * ks[i];
        sxy += ks[i] * ys[i];
    }
    const double denom = n * sxx - sx * sx;
    const double slope = denom > 0.0 ? (n * sxy - sx * sy) / denom : 0.0;
    const double intercept = (sy - slope * sx) / n;

    RadiusEstimate est;
    est.tau_est = std::max(slope, 0.0);
    est.shells_used = static_cast<int>(n);
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = ys[i] - (intercept + slope * ks[i]);
        rss += r * r;
    }
    est.fit_residual = std::sqrt(rss / n);
    return est;
}

}  // namespace hallmhd
