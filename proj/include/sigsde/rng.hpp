#ifndef SIGSDE_RNG_HPP
#define SIGSDE_RNG_HPP

#include <cstdint>
#include <random>

namespace sigsde {

/// Seed mixer used to derive independent named sub-streams.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Reproducible random stream. Gaussians come from an explicit Box-Muller
/// transform rather than std::normal_distribution, so the draw sequence is
/// pinned by this code and not by the standard library implementation.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : engine_(splitmix64(seed)) {}

    /// Independent stream for e.g. one simulated path: mixes (seed, index).
    static RngStream substream(std::uint64_t base_seed, std::uint64_t index) {
        return RngStream(splitmix64(base_seed) ^ splitmix64(index + 0x517cc1b727220a95ULL));
    }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on (0, 1]: never returns 0, safe under log().
    double uniform01() {
        return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
    }

    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform01();
        const double u2 = uniform01();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * 3.14159265358979323846 * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace sigsde

#endif
