#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace hybridtherm {

/// Counter-based random source. Every draw is a pure function of
/// (seed, stream, index), so adding or removing streams never shifts the
/// values of the remaining ones.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    /// A named sub-stream bound to one (seed, stream) pair.
    class Stream {
    public:
        Stream(std::uint64_t seed, std::uint64_t stream_hash)
            : base_(mix(seed ^ mix(stream_hash))) {}

        /// Uniform draw in [0, 1) at counter position i.
        double uniform(std::uint64_t i) const {
            return to_unit(mix(base_ ^ (i * 0x9e3779b97f4a7c15ULL + 0x2545f4914f6cdd1dULL)));
        }

        /// Standard normal draw at counter position i (Box-Muller).
        double normal(std::uint64_t i) const {
            const double u1 = uniform(2 * i);
            const double u2 = uniform(2 * i + 1);
            const double r = std::sqrt(-2.0 * std::log(1.0 - u1));
            return r * std::cos(2.0 * std::numbers::pi * u2);
        }

        /// Uniform draw in [lo, hi) at counter position i.
        double uniform(std::uint64_t i, double lo, double hi) const {
            return lo + (hi - lo) * uniform(i);
        }

    private:
        std::uint64_t base_;
    };

    Stream stream(std::string_view name) const { return Stream(seed_, fnv1a(name)); }

    std::uint64_t seed() const { return seed_; }

    /// splitmix64 finalizer.
    static std::uint64_t mix(std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    static std::uint64_t fnv1a(std::string_view s) {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (const char c : s) {
            h ^= static_cast<unsigned char>(c);
            h *= 0x100000001b3ULL;
        }
        return h;
    }

private:
    static double to_unit(std::uint64_t x) {
        return static_cast<double>(x >> 11) * 0x1.0p-53;
    }

    std::uint64_t seed_;
};

}  // namespace hybridtherm
