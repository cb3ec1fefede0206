#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace matchforge {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Seed for the index-th run of an experiment seeded with `base`.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
    return splitmix64(base ^ (index * 0x9e3779b97f4a7c15ULL));
}

// std::mt19937_64 is fully specified by the standard, the distributions are
// not. Everything here draws raw 64-bit words and maps them itself so that
// results agree across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    // Uniform in [0, bound) by rejection sampling.
    std::size_t index(std::size_t bound) {
        const std::uint64_t b = bound;
        const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % b);
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return static_cast<std::size_t>(x % b);
    }

    // Uniform in [0, 1) with 53 bits.
    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return unit() < p; }

    // Fisher-Yates, from the back.
    template <typename T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::size_t j = index(i);
            std::swap(items[i - 1], items[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace matchforge
