// Copyright 2026 The streamsim Authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "streamsim/engine.hpp"
#include "streamsim/rational.hpp"

namespace streamsim {

/// Resource specification of a worker node. Only `speed` affects timing;
/// cores and memory are carried for reporting.
struct RSpec {
    int cores = 1;
    Rational speed{1};
    std::int64_t memory_mb = 1024;

    friend bool operator==(const RSpec&, const RSpec&) = default;
};

struct Worker {
    int id = 0;
    RSpec spec;
    bool busy = false;
    std::optional<SimTime> busy_until;
    std::uint64_t stages_executed = 0;

    /// Ticks needed to process `cost` cost units: ceil(cost / speed).
    Ticks exe_duration(std::int64_t cost) const { return Ticks{div_ceil(cost, spec.speed)}; }
};

/// Idle workers in FIFO order: acquire takes the head, release appends at the
/// tail. A released worker goes straight to the longest-waiting acquirer.
class WorkerPool {
public:
    WorkerPool(Engine& engine, std::vector<Worker> workers) : engine_(engine), workers_(std::move(workers)) {
        for (auto& w : workers_) {
            if (!w.spec.speed.positive()) throw std::invalid_argument("worker speed must be positive");
            w.busy = false;
            idle_.push_back(&w);
        }
    }
    WorkerPool(const WorkerPool&) = delete;
    WorkerPool& operator=(const WorkerPool&) = delete;

    struct AcquireAwaiter {
        WorkerPool& pool;
        Worker* granted = nullptr;

        bool await_ready() const noexcept { return pool.waiters_.empty() && !pool.idle_.empty(); }
        void await_suspend(Process::handle_type h) {
            pool.waiters_.push_back(Waiter{h, this});
            pool.engine_.mark_blocked(h, "idle worker");
        }
        Worker& await_resume() {
            if (granted) return *granted;
            return pool.take_head();
        }
    };

    /// Suspends while no worker is idle.
    [[nodiscard]] AcquireAwaiter acquire() { return AcquireAwaiter{*this}; }

    void release(Worker& w) {
        if (!w.busy) throw std::logic_error("release of idle worker " + std::to_string(w.id));
        w.busy = false;
        w.busy_until.reset();
        if (!waiters_.empty()) {
            const auto waiter = waiters_.front();
            waiters_.pop_front();
            w.busy = true;
            waiter.awaiter->granted = &w;
            engine_.clear_blocked(waiter.handle);
            engine_.schedule_resume(engine_.now(), waiter.handle, "worker-granted");
            return;
        }
        idle_.push_back(&w);
    }

    std::size_t total() const { return workers_.size(); }
    std::size_t idle_count() const { return idle_.size(); }
    std::size_t busy_count() const {
        return static_cast<std::size_t>(std::count_if(workers_.begin(), workers_.end(), [](const Worker& w) { return w.busy; }));
    }
    std::size_t waiting() const { return waiters_.size(); }
    std::span<const Worker> workers() const { return workers_; }
    std::vector<int> idle_ids() const {
        std::vector<int> ids;
        for (const auto* w : idle_) ids.push_back(w->id);
        return ids;
    }

private:
    struct Waiter {
        Process::handle_type handle;
        AcquireAwaiter* awaiter;
    };

    Worker& take_head() {
        if (idle_.empty()) throw std::logic_error("acquire with no idle worker");
        auto* w = idle_.front();
        idle_.pop_front();
        w->busy = true;
        return *w;
    }

    Engine& engine_;
    std::vector<Worker> workers_;
    std::deque<Worker*> idle_;
    std::deque<Waiter> waiters_;
};

/// Creates `count` identical workers with ids 0..count-1.
inline std::vector<Worker> conf_setup(int count, const RSpec& spec) {
    if (count < 1) throw std::invalid_argument("worker count must be at least 1");
    if (!spec.speed.positive()) throw std::invalid_argument("worker speed must be positive");
    std::vector<Worker> workers;
    workers.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        Worker w;
        w.id = i;
        w.spec = spec;
        workers.push_back(std::move(w));
    }
    return workers;
}

}  // namespace streamsim
