#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace hallmhd {

/// Deterministic, platform-independent RNG. One master seed expands to
/// per-field streams via splitmix64: stream(master, tag) seeds a fresh
/// splitmix64 walk with splitmix64(master ^ golden*tag). Gaussians come
/// from Box-Muller on the 53-bit uniforms, so runs reproduce bit-for-bit
/// across compilers (std::normal_distribution would not).
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in (0,1]; never 0 so log() below is safe.
    double next_uniform() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    }

    double next_gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = next_uniform();
        const double u2 = next_uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    /// Derived stream for sub-object `tag` of a master seed.
    static SplitMix64 stream(std::uint64_t master, std::uint64_t tag) {
        SplitMix64 mix(master ^ (0x9e3779b97f4a7c15ULL * (tag + 1)));
        return SplitMix64(mix.next_u64());
    }

  private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace hallmhd
