#pragma once

#include <cstdint>
#include <random>

namespace prismlab {

/// Seeded 64-bit Mersenne Twister. Range reduction is done by hand
/// (modulo) rather than through std::uniform_int_distribution so that a
/// seed reproduces the same stream on every standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform-ish in [0, n); n must be positive.
    std::uint64_t below(std::uint64_t n) { return engine_() % n; }

    std::int64_t between(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    bool coin() { return (engine_() >> 63) != 0; }

private:
    std::mt19937_64 engine_;
};

}  // namespace prismlab
