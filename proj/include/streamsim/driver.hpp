// Copyright 2026 The streamsim Authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

// The streaming driver: receiver, periodic batch generator, FIFO job
// scheduler bounded by the concurrent-jobs cap, and one job manager per
// dispatched batch that walks the stage DAG on the worker pool.

#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "streamsim/arrivals.hpp"
#include "streamsim/cluster.hpp"
#include "streamsim/engine.hpp"
#include "streamsim/metrics.hpp"
#include "streamsim/random.hpp"
#include "streamsim/workload.hpp"

namespace streamsim {

enum class StageDispatch {
    sequential,  ///< await each stage before looking at the next
    parallel,    ///< start every stage whose constraints are met
};

struct DriverOptions {
    Ticks batch_interval{2000};
    int concurrent_jobs = 1;
    StageDispatch stage_dispatch = StageDispatch::sequential;
    Ticks poll_quantum{1};
};

struct DriverState {
    ReceiveBuffer buffer;
    std::deque<Batch> queue;
    int running_jobs = 0;
    int con_jobs = 1;
    Ticks batch_interval{2000};
    BatchId next_batch_id = 1;
};

/// Book-keeping of one job: `fin` holds completed stages, `pending` the ones
/// not yet started (rotated while their constraints are unmet).
struct JobRun {
    JobRun(Engine& engine, const Batch& b, SimTime dequeued)
        : batch(b), dequeued_at(dequeued), stage_done(engine, "job-" + std::to_string(b.id)) {}

    Batch batch;
    std::vector<StageId> fin;
    std::deque<const StageSpec*> pending;
    SimTime dequeued_at;
    std::optional<SimTime> first_stage_start;
    std::optional<SimTime> finished_at;
    int in_flight = 0;
    CondVar stage_done;
};

class Driver {
public:
    Driver(Engine& engine, WorkerPool& pool, const JobWorkflow& workflow, const DriverOptions& options, Rng cost_rng,
           MetricsCollector& metrics)
        : engine_(engine),
          pool_(pool),
          workflow_(workflow),
          options_(options),
          cost_rng_(std::move(cost_rng)),
          metrics_(metrics),
          scheduler_cv_(engine, "job-scheduler") {
        if (options.batch_interval < Ticks{1}) throw std::invalid_argument("batch interval must be at least 1 tick");
        if (options.concurrent_jobs < 1) throw std::invalid_argument("concurrent jobs must be at least 1");
        if (options.poll_quantum < Ticks{1}) throw std::invalid_argument("poll quantum must be at least 1 tick");
        state_.con_jobs = options.concurrent_jobs;
        state_.batch_interval = options.batch_interval;
    }
    Driver(const Driver&) = delete;
    Driver& operator=(const Driver&) = delete;

    /// Spawns the receiver (when `arrivals` is given), batch generator and
    /// job scheduler.
    void start(ArrivalSource* arrivals) {
        if (arrivals) engine_.spawn("stream-receiver", stream_receiver_process(*arrivals));
        engine_.spawn("batch-generator", batch_generator_process());
        engine_.spawn("job-scheduler", job_scheduler_process());
    }

    const DriverState& state() const { return state_; }
    const DriverOptions& options() const { return options_; }

    Process stream_receiver_process(ArrivalSource& source) {
        SimTime prev{};
        while (auto ev = source.next(prev)) {
            if (ev->at > engine_.now()) co_await engine_.sleep(ev->at - engine_.now());
            // A cut due at this same instant snapshots the buffer first.
            co_await engine_.yield();
            stream_receiver(*ev, state_.buffer);
            metrics_.record_arrival(*ev);
            engine_.trace("arrival");
            prev = ev->at;
        }
    }

    Process batch_generator_process() {
        for (;;) {
            co_await engine_.sleep(state_.batch_interval);
            const Batch batch{state_.next_batch_id, state_.buffer.data_size, engine_.now()};
            state_.queue.push_back(batch);
            state_.buffer.data_size = 0;
            ++state_.next_batch_id;
            metrics_.record_generation(batch);
            engine_.trace(is_empty_batch(batch) ? "batch-cut-empty" : "batch-cut");
            scheduler_cv_.notify();
        }
    }

    Process job_scheduler_process() {
        for (;;) {
            co_await scheduler_cv_.wait([this] { return state_.running_jobs < state_.con_jobs; });
            co_await scheduler_cv_.wait([this] { return !state_.queue.empty(); });
            const Batch batch = state_.queue.front();
            state_.queue.pop_front();
            ++state_.running_jobs;
            metrics_.record_dispatch(batch, engine_.now());
            engine_.trace("dispatch");
            engine_.spawn("job-" + std::to_string(batch.id), job_manager_process(batch, engine_.now()));
        }
    }

    Process job_manager_process(Batch batch, SimTime dequeued_at) {
        JobRun run(engine_, batch, dequeued_at);
        const auto stages = workflow_.stages_for(batch);
        for (const auto& s : stages) run.pending.push_back(&s);
        const auto total = stages.size();

        while (run.fin.size() < total) {
            if (!run.pending.empty()) {
                const StageSpec* stage = run.pending.front();
                run.pending.pop_front();
                if (check_constraints(stage->constraints, run.fin)) {
                    ++run.in_flight;
                    engine_.spawn("stage-" + std::to_string(batch.id) + "-" + stage->id, stage_process(run, *stage));
                    if (options_.stage_dispatch == StageDispatch::sequential) {
                        co_await run.stage_done.wait([&run] { return run.in_flight == 0; });
                    }
                } else {
                    run.pending.push_back(stage);
                }
            }
            co_await engine_.sleep(options_.poll_quantum);
        }

        run.finished_at = engine_.now();
        --state_.running_jobs;
        scheduler_cv_.notify();
        metrics_.record_batch(BatchRecord{batch.id, batch.size_bytes, batch.created_at, run.dequeued_at,
                                          run.first_stage_start.value_or(run.dequeued_at), *run.finished_at,
                                          is_empty_batch(batch)});
        engine_.trace("job-done");
    }

    /// Runs one stage on the head idle worker for ceil(cost / speed) ticks.
    Process stage_process(JobRun& run, const StageSpec& stage) {
        Worker& worker = co_await pool_.acquire();
        const auto cost = cost_per_stage(stage, run.batch.size_bytes, cost_rng_);
        const auto duration = worker.exe_duration(cost);
        const auto start = engine_.now();
        if (!run.first_stage_start) run.first_stage_start = start;
        worker.busy_until = start + duration;
        engine_.trace("stage-start");
        co_await engine_.sleep(duration);
        ++worker.stages_executed;
        metrics_.record_stage(StageRecord{run.batch.id, stage.id, worker.id, start, engine_.now()});
        run.fin.push_back(stage.id);
        pool_.release(worker);
        --run.in_flight;
        run.stage_done.notify();
        engine_.trace("stage-end");
    }

private:
    Engine& engine_;
    WorkerPool& pool_;
    const JobWorkflow& workflow_;
    DriverOptions options_;
    Rng cost_rng_;
    MetricsCollector& metrics_;
    DriverState state_;
    CondVar scheduler_cv_;
};

}  // namespace streamsim
