// Copyright 2026 The streamsim Authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "streamsim/arrivals.hpp"
#include "streamsim/cluster.hpp"
#include "streamsim/config.hpp"
#include "streamsim/driver.hpp"
#include "streamsim/engine.hpp"
#include "streamsim/metrics.hpp"
#include "streamsim/random.hpp"

namespace streamsim {

struct RunResult {
    MetricsCollector metrics;
    RunSummary summary;
    SimTime end_clock{};
    std::uint64_t events_dispatched = 0;
    std::int64_t arrived_bytes = 0;
    std::int64_t residual_buffer_bytes = 0;
    bool deadlocked = false;
    std::vector<std::string> blocked_processes;
    std::vector<Worker> workers;
    /// Breaches of pool conservation or the job cap seen by the per-event audit.
    std::uint64_t invariant_violations = 0;
    std::vector<std::string> violation_samples;
    int max_running_jobs = 0;
};

/// Runs one experiment to its horizon. When `trace` is set, one
/// `tick<TAB>process<TAB>event-kind` line is written per process step.
inline RunResult simulate(const SimConfig& config, std::ostream* trace = nullptr) {
    RunResult result;
    Engine engine;
    engine.set_trace_sink(trace);
    WorkerPool pool(engine, build_workers(config));
    Driver driver(engine, pool, config.workflow, config.driver_options(), Rng::stream(config.seed, rng_stream::stage_costs),
                  result.metrics);
    ArrivalSource arrivals(config.arrival, Rng::stream(config.seed, rng_stream::arrivals));

    engine.set_event_hook([&] {
        const auto& state = driver.state();
        result.max_running_jobs = std::max(result.max_running_jobs, state.running_jobs);
        auto breach = [&](std::string what) {
            ++result.invariant_violations;
            if (result.violation_samples.size() < 16)
                result.violation_samples.push_back("t=" + std::to_string(tick_of(engine.now())) + ": " + std::move(what));
        };
        if (pool.idle_count() + pool.busy_count() != pool.total()) breach("worker pool conservation");
        if (state.running_jobs < 0 || state.running_jobs > state.con_jobs) breach("running jobs outside [0, conJobs]");
    });

    driver.start(&arrivals);
    result.end_clock = engine.run_until(at_tick(config.horizon_ms));
    result.events_dispatched = engine.events_dispatched();
    result.arrived_bytes = driver.state().buffer.total_received;
    result.residual_buffer_bytes = driver.state().buffer.data_size;
    result.deadlocked = engine.deadlocked();
    if (result.deadlocked) result.blocked_processes = engine.blocked_processes();
    result.workers.assign(pool.workers().begin(), pool.workers().end());
    result.summary = summarize(result.metrics, config.stability_threshold());
    return result;
}

/// summary.json: RunSummary fields at the top level, then run bookkeeping
/// and the effective configuration.
inline nlohmann::ordered_json summary_document(const SimConfig& config, const RunResult& r) {
    auto doc = to_json(r.summary);
    nlohmann::ordered_json run;
    run["seed"] = config.seed;
    run["horizon_ms"] = config.horizon_ms;
    run["end_clock_ms"] = tick_of(r.end_clock);
    run["events_dispatched"] = r.events_dispatched;
    run["arrivals"] = r.metrics.arrivals().size();
    run["arrived_bytes"] = r.arrived_bytes;
    run["residual_buffer_bytes"] = r.residual_buffer_bytes;
    run["max_running_jobs"] = r.max_running_jobs;
    run["invariant_violations"] = r.invariant_violations;
    run["deadlock"] = r.deadlocked;
    run["blocked_processes"] = r.blocked_processes;
    doc["run"] = std::move(run);

    nlohmann::ordered_json cfg;
    cfg["batch_interval_ms"] = config.batch_interval_ms;
    cfg["concurrent_jobs"] = config.concurrent_jobs;
    cfg["stage_dispatch"] = to_string(config.stage_dispatch);
    cfg["poll_quantum_ms"] = config.poll_quantum_ms;
    nlohmann::ordered_json workers = nlohmann::ordered_json::array();
    for (const auto& w : r.workers) {
        nlohmann::ordered_json entry;
        entry["id"] = w.id;
        entry["cores"] = w.spec.cores;
        entry["speed"] = w.spec.speed.to_string();
        entry["memory_mb"] = w.spec.memory_mb;
        entry["stages_executed"] = w.stages_executed;
        workers.push_back(std::move(entry));
    }
    cfg["workers"] = std::move(workers);
    doc["config"] = std::move(cfg);
    return doc;
}

}  // namespace streamsim
