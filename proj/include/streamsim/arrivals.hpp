// Copyright 2026 The streamsim Authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "streamsim/random.hpp"
#include "streamsim/time.hpp"

namespace streamsim {

struct ArrivalEvent {
    SimTime at{};
    std::int64_t size_bytes = 0;

    friend bool operator==(const ArrivalEvent&, const ArrivalEvent&) = default;
};

struct ExponentialArrivals {
    std::int64_t mean_ms = 1;
};
struct DeterministicArrivals {
    std::int64_t interval_ms = 1;
};
struct TraceArrivals {
    std::filesystem::path path;
    std::vector<ArrivalEvent> events;
};

struct ArrivalModel {
    std::variant<ExponentialArrivals, DeterministicArrivals, TraceArrivals> variant = ExponentialArrivals{};
    std::int64_t item_size_bytes = 1024;
};

class TraceFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parses `at_ms,size_bytes` lines. A non-numeric first line is taken as a
/// header; blank lines are skipped.
inline std::vector<ArrivalEvent> parse_arrival_trace(std::istream& in, const std::string& source = "trace") {
    std::vector<ArrivalEvent> events;
    std::string line;
    std::size_t line_no = 0;
    auto fail = [&](const std::string& what) {
        throw TraceFormatError(source + ":" + std::to_string(line_no) + ": " + what);
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) fail("expected 'at_ms,size_bytes'");
        std::int64_t at = 0;
        std::int64_t size = 0;
        try {
            std::size_t used = 0;
            at = std::stoll(line.substr(0, comma), &used);
            const auto rest = line.substr(comma + 1);
            size = std::stoll(rest, &used);
            if (rest.find_first_not_of(" \t", used) != std::string::npos) fail("trailing characters");
        } catch (const std::logic_error&) {
            if (events.empty() && line_no == 1) continue;  // header
            fail("expected integers 'at_ms,size_bytes'");
        }
        if (at < 0) fail("negative timestamp");
        if (size <= 0) fail("size must be positive");
        if (!events.empty() && at < tick_of(events.back().at)) fail("timestamps must be non-decreasing");
        events.push_back(ArrivalEvent{at_tick(at), size});
    }
    return events;
}

inline std::vector<ArrivalEvent> load_arrival_trace(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw TraceFormatError("cannot open arrival trace " + path.string());
    return parse_arrival_trace(in, path.string());
}

/// Stateful arrival process. `next` returns nullopt once a trace is exhausted;
/// the stochastic and deterministic variants never end.
class ArrivalSource {
public:
    ArrivalSource(const ArrivalModel& model, Rng rng) : model_(model), rng_(std::move(rng)) {}

    std::optional<ArrivalEvent> next(SimTime prev) {
        return std::visit([&](const auto& m) { return next_from(m, prev); }, model_.variant);
    }

private:
    std::optional<ArrivalEvent> next_from(const ExponentialArrivals& m, SimTime prev) {
        const double u = rng_.unit_open_closed();
        const auto gap = std::max<std::int64_t>(1, std::llround(-static_cast<double>(m.mean_ms) * std::log(u)));
        return ArrivalEvent{prev + Ticks{gap}, model_.item_size_bytes};
    }
    std::optional<ArrivalEvent> next_from(const DeterministicArrivals& m, SimTime prev) {
        return ArrivalEvent{prev + Ticks{m.interval_ms}, model_.item_size_bytes};
    }
    std::optional<ArrivalEvent> next_from(const TraceArrivals& m, SimTime) {
        if (cursor_ >= m.events.size()) return std::nullopt;
        return m.events[cursor_++];
    }

    const ArrivalModel& model_;
    Rng rng_;
    std::size_t cursor_ = 0;
};

/// The driver's receive buffer (bytes received since the last batch cut).
struct ReceiveBuffer {
    std::int64_t data_size = 0;
    std::int64_t total_received = 0;
};

inline void stream_receiver(const ArrivalEvent& ev, ReceiveBuffer& buffer) {
    buffer.data_size += ev.size_bytes;
    buffer.total_received += ev.size_bytes;
}

}  // namespace streamsim
