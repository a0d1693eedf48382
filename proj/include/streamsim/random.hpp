// Copyright 2026 The streamsim Authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>

namespace streamsim {

/// Seeded generator with distribution code written out by hand. The standard
/// distributions are implementation-defined, so relying on them would make
/// output differ between standard libraries; mt19937_64 itself is exact.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Independent stream for a named purpose, derived from a run seed.
    static Rng stream(std::uint64_t seed, std::uint64_t tag) { return Rng{splitmix64(seed ^ splitmix64(tag))}; }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform integer in [lo, hi] by rejection sampling.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        if (lo > hi) throw std::invalid_argument("uniform_int: empty range");
        const std::uint64_t span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo);
        if (span == std::numeric_limits<std::uint64_t>::max()) return static_cast<std::int64_t>(next_u64());
        const std::uint64_t range = span + 1;
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - (std::numeric_limits<std::uint64_t>::max() % range);
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return lo + static_cast<std::int64_t>(x % range);
    }

    /// Uniform double in (0, 1].
    double unit_open_closed() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }

    static constexpr std::uint64_t splitmix64(std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

private:
    std::mt19937_64 engine_;
};

namespace rng_stream {
inline constexpr std::uint64_t arrivals = 1;
inline constexpr std::uint64_t stage_costs = 2;
}  // namespace rng_stream

}  // namespace streamsim
