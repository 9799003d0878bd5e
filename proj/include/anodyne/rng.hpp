#pragma once

// Deterministic PRNG used everywhere randomness is needed.
// splitmix64 core; bounded draws and shuffles are hand-rolled so that
// generated schedules, fault plans and traces are byte-stable across
// platforms and standard-library versions.

#include <cstdint>
#include <vector>

namespace anodyne {

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Stateless mix of two 64-bit values into one; used to derive independent
// seed streams (per node, per window, per receiver, ...).
inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b) {
    std::uint64_t s = a ^ (b + 0x9E3779B97F4A7C15ULL + (a << 6) + (a >> 2));
    return splitmix64_next(s);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() { return splitmix64_next(state_); }

    // Uniform in [0,1) with 53 random bits.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in [0, bound). Rejection loop removes modulo bias.
    std::uint64_t bounded(std::uint64_t bound) {
        if (bound <= 1) return 0;
        std::uint64_t threshold = (0ULL - bound) % bound;
        for (;;) {
            std::uint64_t r = next_u64();
            if (r >= threshold) return r % bound;
        }
    }

    // Uniform integer in [lo, hi] inclusive.
    long long uniform_int(long long lo, long long hi) {
        return lo + static_cast<long long>(bounded(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    // Fisher-Yates, fixed algorithm (std::shuffle is implementation-defined).
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(bounded(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    Rng derive(std::uint64_t tag) const { return Rng(mix64(state_, tag)); }

private:
    std::uint64_t state_;
};

} // namespace anodyne
