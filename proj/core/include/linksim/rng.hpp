#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace linksim {

// Deterministic random source. The generator is std::mt19937_64 (fully
// specified by the standard) and every distribution here is implemented
// explicitly on top of its raw 64-bit output, so a given seed produces the
// same sample stream on any platform. Library distributions
// (std::normal_distribution etc.) are implementation-defined and must not
// be used anywhere reproducibility matters.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t raw() { return gen_(); }

    // Uniform in [0,1) with 53-bit resolution.
    double uniform() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    // Uniform in (0,1]; safe as a log() argument.
    double uniform_pos() {
        return static_cast<double>((gen_() >> 11) + 1) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Unbiased integer in [0, n) by rejection.
    std::uint64_t bounded(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v;
        do {
            v = gen_();
        } while (v >= limit);
        return v % n;
    }

    bool bit() { return (gen_() >> 63) != 0; }

    // Standard normal via Box-Muller, one cached value.
    double normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        const double u1 = uniform_pos();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        cached_ = r * std::sin(a);
        have_cached_ = true;
        return r * std::cos(a);
    }

    double exponential() { return -std::log(uniform_pos()); }

    // Gamma(shape, scale 1) via Marsaglia-Tsang, with the usual boost for
    // shape < 1: G_a = G_{a+1} * U^{1/a}.
    double gamma(double shape) {
        if (shape < 1.0) {
            const double g = gamma(shape + 1.0);
            return g * std::pow(uniform_pos(), 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform_pos();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

    // Fisher-Yates with explicit bounded draws (std::shuffle is
    // implementation-defined).
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(bounded(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 gen_;
    double cached_ = 0.0;
    bool have_cached_ = false;
};

// Derives a stream seed from a master seed and a stream index
// (splitmix64 over the combined words). Used to hand independent,
// reproducible generators to per-cell sweep workers.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace linksim
