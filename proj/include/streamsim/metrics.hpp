// Copyright 2026 The streamsim Authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

// Per-batch and per-stage timing records, the run summary, and their CSV/JSON
// export.

#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "streamsim/arrivals.hpp"
#include "streamsim/time.hpp"
#include "streamsim/workload.hpp"

namespace streamsim {

struct BatchRecord {
    BatchId batch_id = 0;
    std::int64_t size_bytes = 0;
    SimTime created_at{};
    SimTime dequeued_at{};
    SimTime first_stage_start{};
    SimTime finished_at{};
    bool empty = false;

    Ticks scheduling_delay() const { return dequeued_at - created_at; }
    Ticks processing_time() const { return finished_at - dequeued_at; }
};

struct StageRecord {
    BatchId batch_id = 0;
    StageId stage_id;
    int worker_id = 0;
    SimTime start{};
    SimTime end{};
};

/// A batch leaving the queue. Kept separately from BatchRecord because a
/// dispatched batch may still be running when the horizon is reached.
struct DispatchRecord {
    BatchId batch_id = 0;
    SimTime created_at{};
    SimTime dequeued_at{};

    Ticks scheduling_delay() const { return dequeued_at - created_at; }
};

class MetricsCollector {
public:
    void record_generation(const Batch& batch) { generated_.push_back(batch); }
    void record_arrival(const ArrivalEvent& ev) { arrivals_.push_back(ev); }
    void record_dispatch(const Batch& batch, SimTime dequeued_at) {
        dispatches_.push_back(DispatchRecord{batch.id, batch.created_at, dequeued_at});
    }
    void record_stage(StageRecord record) {
        if (record.end < record.start) throw std::logic_error("stage record ends before it starts");
        stages_.push_back(std::move(record));
    }

    /// Appends a completed batch. Timestamps must be ordered
    /// created <= dequeued <= first stage start <= finished.
    void record_batch(const BatchRecord& r) {
        if (!(r.created_at <= r.dequeued_at && r.dequeued_at <= r.first_stage_start && r.first_stage_start <= r.finished_at)) {
            throw std::logic_error("batch " + std::to_string(r.batch_id) + ": timestamps out of order");
        }
        if (r.empty != (r.size_bytes == 0)) throw std::logic_error("batch " + std::to_string(r.batch_id) + ": empty flag mismatch");
        batches_.push_back(r);
    }

    std::span<const Batch> generated() const { return generated_; }
    std::span<const ArrivalEvent> arrivals() const { return arrivals_; }
    std::span<const DispatchRecord> dispatches() const { return dispatches_; }
    std::span<const StageRecord> stages() const { return stages_; }
    std::span<const BatchRecord> batches() const { return batches_; }

private:
    std::vector<Batch> generated_;
    std::vector<ArrivalEvent> arrivals_;
    std::vector<DispatchRecord> dispatches_;
    std::vector<StageRecord> stages_;
    std::vector<BatchRecord> batches_;
};

struct RunSummary {
    std::uint64_t batches_total = 0;
    std::uint64_t batches_empty = 0;
    std::uint64_t batches_dispatched = 0;
    std::uint64_t batches_completed = 0;
    double mean_scheduling_delay_ms = 0;
    std::int64_t max_scheduling_delay_ms = 0;
    double mean_processing_time_ms = 0;
    std::int64_t max_processing_time_ms = 0;
    std::optional<std::int64_t> generation_interval_min_ms;
    std::optional<std::int64_t> generation_interval_max_ms;
    std::int64_t stability_threshold_ms = 0;
    bool stable = true;
};

/// Scheduling delay statistics cover every dispatched batch; processing time
/// statistics cover completed batches.
inline RunSummary summarize(const MetricsCollector& metrics, Ticks stability_threshold) {
    RunSummary s;
    s.batches_total = metrics.generated().size();
    s.batches_empty = static_cast<std::uint64_t>(
        std::count_if(metrics.generated().begin(), metrics.generated().end(), [](const Batch& b) { return is_empty_batch(b); }));
    s.batches_dispatched = metrics.dispatches().size();
    s.batches_completed = metrics.batches().size();
    s.stability_threshold_ms = stability_threshold.count();

    std::int64_t delay_sum = 0;
    for (const auto& d : metrics.dispatches()) {
        const auto delay = d.scheduling_delay().count();
        delay_sum += delay;
        s.max_scheduling_delay_ms = std::max(s.max_scheduling_delay_ms, delay);
    }
    if (s.batches_dispatched > 0) s.mean_scheduling_delay_ms = static_cast<double>(delay_sum) / static_cast<double>(s.batches_dispatched);

    std::int64_t processing_sum = 0;
    for (const auto& b : metrics.batches()) {
        const auto p = b.processing_time().count();
        processing_sum += p;
        s.max_processing_time_ms = std::max(s.max_processing_time_ms, p);
    }
    if (s.batches_completed > 0) s.mean_processing_time_ms = static_cast<double>(processing_sum) / static_cast<double>(s.batches_completed);

    const auto gen = metrics.generated();
    for (std::size_t i = 1; i < gen.size(); ++i) {
        const auto gap = (gen[i].created_at - gen[i - 1].created_at).count();
        s.generation_interval_min_ms = std::min(s.generation_interval_min_ms.value_or(gap), gap);
        s.generation_interval_max_ms = std::max(s.generation_interval_max_ms.value_or(gap), gap);
    }
    s.stable = s.max_scheduling_delay_ms <= s.stability_threshold_ms;
    return s;
}

inline nlohmann::ordered_json to_json(const RunSummary& s) {
    auto optional_ms = [](const std::optional<std::int64_t>& v) { return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr); };
    nlohmann::ordered_json j;
    j["batches_total"] = s.batches_total;
    j["batches_empty"] = s.batches_empty;
    j["batches_dispatched"] = s.batches_dispatched;
    j["batches_completed"] = s.batches_completed;
    j["mean_scheduling_delay_ms"] = s.mean_scheduling_delay_ms;
    j["max_scheduling_delay_ms"] = s.max_scheduling_delay_ms;
    j["mean_processing_time_ms"] = s.mean_processing_time_ms;
    j["max_processing_time_ms"] = s.max_processing_time_ms;
    j["mean_scheduling_delay_s"] = s.mean_scheduling_delay_ms / 1000.0;
    j["max_scheduling_delay_s"] = static_cast<double>(s.max_scheduling_delay_ms) / 1000.0;
    j["mean_processing_time_s"] = s.mean_processing_time_ms / 1000.0;
    j["max_processing_time_s"] = static_cast<double>(s.max_processing_time_ms) / 1000.0;
    j["generation_interval_min_ms"] = optional_ms(s.generation_interval_min_ms);
    j["generation_interval_max_ms"] = optional_ms(s.generation_interval_max_ms);
    j["stability_threshold_ms"] = s.stability_threshold_ms;
    j["stability"] = s.stable;
    return j;
}

inline constexpr const char* kBatchesCsvHeader =
    "batch_id,size_bytes,created_ms,dequeued_ms,first_stage_start_ms,finished_ms,scheduling_delay_ms,processing_time_ms,empty";
inline constexpr const char* kStagesCsvHeader = "batch_id,stage_id,worker_id,start_ms,end_ms";

inline void write_batches_csv(std::ostream& out, std::span<const BatchRecord> records) {
    out << kBatchesCsvHeader << '\n';
    for (const auto& r : records) {
        out << r.batch_id << ',' << r.size_bytes << ',' << tick_of(r.created_at) << ',' << tick_of(r.dequeued_at) << ','
            << tick_of(r.first_stage_start) << ',' << tick_of(r.finished_at) << ',' << r.scheduling_delay().count() << ','
            << r.processing_time().count() << ',' << (r.empty ? 1 : 0) << '\n';
    }
}

inline void write_stages_csv(std::ostream& out, std::span<const StageRecord> records) {
    out << kStagesCsvHeader << '\n';
    for (const auto& r : records) {
        out << r.batch_id << ',' << r.stage_id << ',' << r.worker_id << ',' << tick_of(r.start) << ',' << tick_of(r.end) << '\n';
    }
}

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {
template <typename Writer>
void write_file(const std::filesystem::path& path, Writer&& writer) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    writer(out);
    out.flush();
    if (!out) throw IoError("write to " + path.string() + " failed");
}
}  // namespace detail

/// Writes batches.csv, stages.csv and summary.json into `dir`, creating it.
inline void export_csv(const std::filesystem::path& dir, const MetricsCollector& metrics, const nlohmann::ordered_json& summary) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
    detail::write_file(dir / "batches.csv", [&](std::ostream& o) { write_batches_csv(o, metrics.batches()); });
    detail::write_file(dir / "stages.csv", [&](std::ostream& o) { write_stages_csv(o, metrics.stages()); });
    detail::write_file(dir / "summary.json", [&](std::ostream& o) { o << summary.dump(2) << '\n'; });
}

}  // namespace streamsim
