// Copyright 2026 The streamsim Authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <chrono>
#include <cstdint>

namespace streamsim {

/// Virtual clock of the simulator. One tick is one millisecond of simulated
/// time; the clock is never related to wall time.
struct SimClock {
    using rep = std::int64_t;
    using period = std::milli;
    using duration = std::chrono::duration<rep, period>;
    using time_point = std::chrono::time_point<SimClock>;
    static constexpr bool is_steady = true;
};

using Ticks = SimClock::duration;
using SimTime = SimClock::time_point;

constexpr SimTime at_tick(std::int64_t tick) { return SimTime{Ticks{tick}}; }
constexpr std::int64_t tick_of(SimTime t) { return t.time_since_epoch().count(); }

}  // namespace streamsim
