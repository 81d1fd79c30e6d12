#pragma once

#include <cstdint>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "fegraph/errors.hpp"

namespace fegraph {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Child seed for stream `stream` of a seeded procedure. Distinct streams give
// statistically independent generators while staying reproducible.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

// mt19937_64 engine (sequence fixed by the standard) with hand-rolled
// distribution transforms, so every draw is bitwise identical across
// platforms and standard-library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

    std::uint64_t next() { return engine_(); }

    // Uniform on [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform on (0, 1]; safe as a log() argument.
    double uniform_positive() {
        return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
    }

    // Uniform integer in [0, n) by rejection, free of modulo bias.
    std::uint64_t uniform_int(std::uint64_t n) {
        if (n == 0)
            throw ValidationError("uniform_int: empty range");
        const std::uint64_t threshold = (0 - n) % n; // 2^64 mod n
        std::uint64_t x = next();
        while (x < threshold)
            x = next();
        return x % n;
    }

    // Standard normal via Box-Muller; the second draw of each pair is cached.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double r = std::sqrt(-2.0 * std::log(uniform_positive()));
        const double a = 2.0 * 3.14159265358979323846 * uniform();
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

    // Fisher-Yates.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i)
            std::swap(v[i - 1], v[uniform_int(i)]);
    }

    // k distinct integers from [0, n), in draw order.
    std::vector<std::uint64_t> sample_without_replacement(std::uint64_t n, std::uint64_t k) {
        if (k > n)
            throw ValidationError("sample_without_replacement: k exceeds population");
        std::vector<std::uint64_t> pool(n);
        for (std::uint64_t i = 0; i < n; ++i)
            pool[i] = i;
        std::vector<std::uint64_t> out(k);
        for (std::uint64_t i = 0; i < k; ++i) {
            const std::uint64_t j = i + uniform_int(n - i);
            std::swap(pool[i], pool[j]);
            out[i] = pool[i];
        }
        return out;
    }

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

} // namespace fegraph
