// Copyright 2026 The streamsim Authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

// Discrete-event engine with cooperative simulated processes.
//
// A simulated process is a C++20 coroutine returning `Process`. It runs until
// it suspends on `engine.sleep(d)`, on a `CondVar`, or on another awaitable
// built on `Engine::schedule_resume`. Events are dispatched in (time, seq)
// order, where seq is a global insertion counter, so runs are fully
// deterministic. Each event runs to completion before the next is dispatched.

#pragma once

#include <algorithm>
#include <concepts>
#include <coroutine>
#include <cstdint>
#include <deque>
#include <exception>
#include <functional>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "streamsim/time.hpp"

namespace streamsim {

class Process {
public:
    struct promise_type {
        std::string name;
        std::uint64_t pid = 0;
        std::exception_ptr error;

        Process get_return_object() noexcept { return Process{std::coroutine_handle<promise_type>::from_promise(*this)}; }
        std::suspend_always initial_suspend() noexcept { return {}; }
        std::suspend_always final_suspend() noexcept { return {}; }
        void return_void() noexcept {}
        void unhandled_exception() noexcept { error = std::current_exception(); }
    };
    using handle_type = std::coroutine_handle<promise_type>;

    Process(Process&& other) noexcept : handle_(std::exchange(other.handle_, {})) {}
    Process& operator=(Process&& other) noexcept {
        if (this != &other) {
            if (handle_) handle_.destroy();
            handle_ = std::exchange(other.handle_, {});
        }
        return *this;
    }
    Process(const Process&) = delete;
    Process& operator=(const Process&) = delete;
    ~Process() {
        if (handle_) handle_.destroy();
    }

    handle_type release() noexcept { return std::exchange(handle_, {}); }

private:
    explicit Process(handle_type h) : handle_(h) {}
    handle_type handle_;
};

class Engine {
public:
    using Action = std::function<void()>;

    Engine() = default;
    Engine(const Engine&) = delete;
    Engine& operator=(const Engine&) = delete;
    ~Engine() {
        for (auto& [pid, handle] : live_) handle.destroy();
    }

    SimTime now() const { return now_; }

    /// Runs `action` at `at`, after every event already scheduled for the
    /// same instant. Scheduling into the past is an engine bug.
    std::uint64_t schedule(SimTime at, Action action) {
        if (at < now_) {
            throw std::logic_error("event scheduled in the past: " + std::to_string(tick_of(at)) + " < " +
                                   std::to_string(tick_of(now_)));
        }
        const auto seq = next_seq_++;
        queue_.push_back(Event{at, seq, std::move(action)});
        std::push_heap(queue_.begin(), queue_.end(), Later{});
        return seq;
    }

    /// Dispatches every event with fire time <= horizon. Returns the clock:
    /// the horizon if events remain beyond it, otherwise the time of the last
    /// dispatched event.
    SimTime run_until(SimTime horizon) {
        while (!queue_.empty() && queue_.front().at <= horizon) {
            std::pop_heap(queue_.begin(), queue_.end(), Later{});
            Event ev = std::move(queue_.back());
            queue_.pop_back();
            now_ = ev.at;
            ev.action();
            ++dispatched_;
            if (hook_) hook_();
        }
        if (!queue_.empty() && horizon > now_) now_ = horizon;
        return now_;
    }

    /// Registers a process; its body starts at the current instant.
    void spawn(std::string name, Process process) {
        auto handle = process.release();
        handle.promise().name = std::move(name);
        handle.promise().pid = next_pid_++;
        live_.emplace(handle.promise().pid, handle);
        schedule_resume(now_, handle, "spawn");
    }

    struct SleepAwaiter {
        Engine& engine;
        Ticks duration;
        bool await_ready() const noexcept { return false; }
        void await_suspend(Process::handle_type h) { engine.schedule_resume(engine.now() + duration, h, "wake"); }
        void await_resume() const noexcept {}
    };

    [[nodiscard]] SleepAwaiter sleep(Ticks duration) { return SleepAwaiter{*this, duration}; }
    /// Re-queues the caller behind everything already scheduled for now.
    [[nodiscard]] SleepAwaiter yield() { return SleepAwaiter{*this, Ticks{0}}; }

    void schedule_resume(SimTime at, Process::handle_type h, std::string_view kind) {
        schedule(at, [this, h, kind] { resume(h, kind); });
    }

    void resume(Process::handle_type h, std::string_view kind) {
        trace(h.promise().name, kind);
        const auto previous = std::exchange(current_, h);
        h.resume();
        current_ = previous;
        if (!h.done()) return;
        trace(h.promise().name, "exit");
        auto error = h.promise().error;
        live_.erase(h.promise().pid);
        blocked_.erase(h.promise().pid);
        h.destroy();
        if (error) std::rethrow_exception(error);
    }

    std::string_view current_process() const {
        return current_ ? std::string_view{current_.promise().name} : std::string_view{"engine"};
    }

    void set_trace_sink(std::ostream* sink) { trace_ = sink; }
    bool tracing() const { return trace_ != nullptr; }

    void trace(std::string_view kind) { trace(current_process(), kind); }
    void trace(std::string_view process, std::string_view kind) {
        if (trace_) *trace_ << tick_of(now_) << '\t' << process << '\t' << kind << '\n';
    }

    /// Called after every dispatched event; used for invariant audits.
    void set_event_hook(std::function<void()> hook) { hook_ = std::move(hook); }

    void mark_blocked(Process::handle_type h, std::string on) { blocked_[h.promise().pid] = h.promise().name + " on " + on; }
    void clear_blocked(Process::handle_type h) { blocked_.erase(h.promise().pid); }

    /// Processes suspended on a condition, in spawn order.
    std::vector<std::string> blocked_processes() const {
        std::vector<std::string> out;
        out.reserve(blocked_.size());
        for (const auto& [pid, what] : blocked_) out.push_back(what);
        return out;
    }
    /// No event left to dispatch while some process still waits on a condition.
    bool deadlocked() const { return queue_.empty() && !blocked_.empty(); }

    bool has_pending_events() const { return !queue_.empty(); }
    std::uint64_t events_dispatched() const { return dispatched_; }
    std::size_t live_processes() const { return live_.size(); }

private:
    struct Event {
        SimTime at;
        std::uint64_t seq;
        Action action;
    };
    struct Later {
        bool operator()(const Event& a, const Event& b) const { return a.at != b.at ? a.at > b.at : a.seq > b.seq; }
    };

    std::vector<Event> queue_;
    SimTime now_{};
    std::uint64_t next_seq_ = 0;
    std::uint64_t next_pid_ = 0;
    std::uint64_t dispatched_ = 0;
    std::map<std::uint64_t, Process::handle_type> live_;
    std::map<std::uint64_t, std::string> blocked_;
    Process::handle_type current_{};
    std::ostream* trace_ = nullptr;
    std::function<void()> hook_;
};

/// Condition variable for `await (predicate)` guards.
///
/// A waiter is re-evaluated in an event at the current instant whenever the
/// condition is notified (and once right after it suspends). Waiters are
/// scanned in suspension order and resumed one at a time, so a resumed
/// process sees the state left by the one resumed before it.
class CondVar {
public:
    CondVar(Engine& engine, std::string name) : engine_(engine), name_(std::move(name)) {}
    CondVar(const CondVar&) = delete;
    CondVar& operator=(const CondVar&) = delete;

    struct Awaiter {
        CondVar& cv;
        std::function<bool()> predicate;
        bool await_ready() const noexcept { return false; }
        void await_suspend(Process::handle_type h) { cv.enqueue(h, std::move(predicate)); }
        void await_resume() const noexcept {}
    };

    template <std::predicate Pred>
    [[nodiscard]] Awaiter wait(Pred predicate) {
        return Awaiter{*this, std::function<bool()>(std::move(predicate))};
    }

    /// State guarded by this condition changed; re-check waiters at now.
    void notify() {
        if (evaluation_pending_) return;
        evaluation_pending_ = true;
        engine_.schedule(engine_.now(), [this] { evaluate(); });
    }

    std::size_t waiting() const { return waiters_.size(); }
    const std::string& name() const { return name_; }

private:
    struct Waiter {
        std::uint64_t ticket;
        Process::handle_type handle;
        std::function<bool()> predicate;
    };

    void enqueue(Process::handle_type h, std::function<bool()> predicate) {
        waiters_.push_back(Waiter{next_ticket_++, h, std::move(predicate)});
        engine_.mark_blocked(h, name_);
        notify();
    }

    void evaluate() {
        evaluation_pending_ = false;
        // Waiters that suspend during this pass are handled by the next one.
        const auto limit = next_ticket_;
        for (;;) {
            auto it = std::find_if(waiters_.begin(), waiters_.end(),
                                   [limit](const Waiter& w) { return w.ticket < limit && w.predicate(); });
            if (it == waiters_.end()) break;
            const auto h = it->handle;
            waiters_.erase(it);
            engine_.clear_blocked(h);
            engine_.resume(h, "signal");
        }
    }

    Engine& engine_;
    std::string name_;
    std::deque<Waiter> waiters_;
    std::uint64_t next_ticket_ = 0;
    bool evaluation_pending_ = false;
};

}  // namespace streamsim
