#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace footfall {

// splitmix64 finalizer; used to derive independent sub-streams from a master
// seed so that per-sample generation is order-independent.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a) {
    return mix64(master ^ mix64(a));
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
    return mix64(derive_seed(master, a) ^ mix64(b + 0x517cc1b727220a95ull));
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b,
                                 std::uint64_t c) {
    return mix64(derive_seed(master, a, b) ^ mix64(c + 0x2545f4914f6cdd1dull));
}

/// Deterministic random stream. mt19937_64 is fully specified by the
/// standard; the distributions here are hand-rolled because the standard
/// library ones are implementation-defined and would break bit-exact
/// reproducibility guarantees.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    /// Uniform double in [0, 1), 53-bit resolution.
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform integer in [0, n). n must be > 0.
    std::uint64_t uniform_index(std::uint64_t n) {
        // modulo bias is < 2^-40 for any n used here
        return engine_() % n;
    }

    /// Standard normal via Marsaglia polar method.
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform01() - 1.0;
            v = 2.0 * uniform01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double k = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * k;
        have_spare_ = true;
        return u * k;
    }

    double gaussian(double mean, double stddev) { return mean + stddev * gaussian(); }

    std::uint64_t next_u64() { return engine_(); }

private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace footfall
