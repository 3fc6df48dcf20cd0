#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace clmea {

__extension__ using uint128_t = unsigned __int128;

/// SplitMix64 finalizer, used to derive independent seeds from labels.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Seeded generator with platform-independent draws.
///
/// The standard distributions are implementation-defined, so uniform reals and
/// integers are produced directly from the engine output. Given the same seed,
/// every draw sequence is bit-identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : seed_(seed), engine_(mix64(seed)) {}

    std::uint64_t seed() const noexcept { return seed_; }

    std::uint64_t next() { return engine_(); }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n). n must be positive.
    std::size_t index(std::size_t n) {
        // Lemire's nearly-divisionless rejection.
        const std::uint64_t bound = n;
        uint128_t m = static_cast<uint128_t>(engine_()) * bound;
        auto low = static_cast<std::uint64_t>(m);
        if (low < bound) {
            const std::uint64_t threshold = -bound % bound;
            while (low < threshold) {
                m = static_cast<uint128_t>(engine_()) * bound;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::size_t>(m >> 64);
    }

    bool bernoulli(double p) { return uniform() < p; }

    template <typename It>
    void shuffle(It first, It last) {
        const auto n = static_cast<std::size_t>(last - first);
        for (std::size_t i = n; i > 1; --i) {
            const std::size_t j = index(i);
            std::iter_swap(first + static_cast<std::ptrdiff_t>(i - 1), first + static_cast<std::ptrdiff_t>(j));
        }
    }

    /// Child generator for a labelled sub-task. Depends only on this
    /// generator's seed and the labels, never on how many draws were made.
    Rng derive(std::initializer_list<std::uint64_t> labels) const {
        std::uint64_t s = mix64(seed_ ^ 0x5bd1e9955bd1e995ULL);
        for (const auto label : labels) {
            s = mix64(s ^ mix64(label + 0x632be59bd9b4e019ULL));
        }
        return Rng(s);
    }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

} // namespace clmea
