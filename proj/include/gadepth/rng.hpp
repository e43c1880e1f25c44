#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace gadepth {

// splitmix64 finalizer; used for seed mixing so derived streams are stable
// across platforms and releases.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0) {
    return mix64(mix64(base ^ 0x8c9a4f1db2e67053ULL) + mix64(a) + 0x2545f4914f6cdd1dULL * b);
}

// Seeded generator with self-contained draw routines. std::*_distribution is
// implementation-defined, so every draw here is built from raw engine output
// to keep results byte-identical everywhere.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    // uniform on [lo, hi], both ends inclusive; rejection sampling, unbiased
    std::uint64_t uniform_u64(std::uint64_t lo, std::uint64_t hi) {
        const std::uint64_t span = hi - lo + 1;  // span==0 means full range
        if (span == 0) return engine_();
        const std::uint64_t limit = std::uint64_t(-1) - std::uint64_t(-1) % span;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return lo + x % span;
    }

    std::size_t uniform_index(std::size_t n) {
        return static_cast<std::size_t>(uniform_u64(0, static_cast<std::uint64_t>(n) - 1));
    }

    int uniform_int(int lo, int hi) {
        return lo + static_cast<int>(uniform_u64(0, static_cast<std::uint64_t>(hi - lo)));
    }

    // uniform on [0, 1), 53-bit resolution
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    bool bernoulli(double p) { return uniform01() < p; }

    // standard normal via Box-Muller (polar form avoided: trig form draws a
    // fixed number of variates, which keeps streams aligned)
    double normal() {
        double u1 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        const double u2 = uniform01();
        constexpr double two_pi = 6.283185307179586476925286766559;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[uniform_index(i)]);
        }
    }

    // k distinct values from 0..n-1, ascending (Floyd's algorithm)
    std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k) {
        std::vector<std::size_t> out;
        out.reserve(k);
        for (std::size_t j = n - k; j < n; ++j) {
            const std::size_t t = uniform_index(j + 1);
            if (std::find(out.begin(), out.end(), t) != out.end()) {
                out.push_back(j);
            } else {
                out.push_back(t);
            }
        }
        std::sort(out.begin(), out.end());
        return out;
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace gadepth
