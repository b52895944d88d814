#pragma once

#include <cstdint>
#include <initializer_list>

namespace splineproj {

// Deterministic counter-based RNG.  All randomness in the project flows from
// a single 64-bit root seed; independent streams are derived by mixing a list
// of integer labels (experiment id, order, size, trial, ...) into the seed
// with splitmix64 finalizers.  No libc or libstdc++ distribution is involved,
// so sequences are identical across platforms and runs.
class SplitRng {
public:
    explicit SplitRng(std::uint64_t seed) : state_(seed) {}

    // Derives the stream keyed by (seed, path...).  Forking with the same
    // labels always yields the same stream; distinct labels yield streams
    // that do not overlap in practice.
    static SplitRng fork(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
        std::uint64_t s = mix(seed ^ 0x5e41c576a4c2d9b1ull);
        for (std::uint64_t label : path)
            s = mix(s ^ mix(label + 0x9e3779b97f4a7c15ull));
        return SplitRng(s);
    }

    std::uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ull;
        return mix(state_);
    }

    // Uniform in [0, 1), 53 random bits.
    double uniform() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    // Uniform integer in [lo, hi] inclusive.
    int uniform_int(int lo, int hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<int>(next() % span);
    }

private:
    // splitmix64 finalizer
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

}  // namespace splineproj
