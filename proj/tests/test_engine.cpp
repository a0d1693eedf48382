// Copyright 2026 The streamsim Authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include <deque>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "streamsim/engine.hpp"
#include "support/oracles.hpp"

using namespace streamsim;

namespace {

Process sleeper(Engine& engine, Ticks period, int rounds, std::vector<std::int64_t>& wakes) {
    for (int i = 0; i < rounds; ++i) {
        co_await engine.sleep(period);
        wakes.push_back(tick_of(engine.now()));
    }
}

Process waiter(Engine& engine, CondVar& cv, std::function<bool()> pred, std::string name, std::vector<std::string>& log,
               std::function<void()> on_resume = {}) {
    co_await cv.wait(pred);
    log.push_back(name + "@" + std::to_string(tick_of(engine.now())));
    if (on_resume) on_resume();
}

Process failing(Engine& engine) {
    co_await engine.sleep(Ticks{3});
    throw std::runtime_error("boom");
}

}  // namespace

TEST(Engine, SameInstantEventsRunInInsertionOrder) {
    Engine engine;
    std::string order;
    engine.schedule(engine.now(), [&] { order += "a"; });
    engine.schedule(engine.now(), [&] { order += "b"; });
    engine.run_until(at_tick(10));
    EXPECT_EQ(order, "ab");
}

TEST(Engine, EventFiresAtExactTick) {
    Engine engine;
    std::int64_t fired_at = -1;
    engine.schedule(engine.now() + Ticks{5}, [&] { fired_at = tick_of(engine.now()); });
    engine.run_until(at_tick(100));
    EXPECT_EQ(fired_at, 5);
}

TEST(Engine, SchedulingInThePastIsAnError) {
    Engine engine;
    engine.schedule(at_tick(10), [&] { engine.schedule(at_tick(9), [] {}); });
    EXPECT_THROW(engine.run_until(at_tick(20)), std::logic_error);
}

TEST(Engine, RunUntilOnEmptyQueueReturnsZero) {
    Engine engine;
    EXPECT_EQ(tick_of(engine.run_until(at_tick(10))), 0);
}

TEST(Engine, RunUntilStopsAtHorizon) {
    Engine engine;
    bool early = false;
    bool late = false;
    engine.schedule(at_tick(7), [&] { early = true; });
    engine.schedule(at_tick(15), [&] { late = true; });
    const auto clock = engine.run_until(at_tick(10));
    EXPECT_TRUE(early);
    EXPECT_FALSE(late);
    EXPECT_EQ(tick_of(clock), 10);
    EXPECT_EQ(tick_of(engine.run_until(at_tick(20))), 15);
    EXPECT_TRUE(late);
}

TEST(Engine, RunUntilReturnsLastEventTimeWhenQueueDrains) {
    Engine engine;
    engine.schedule(at_tick(7), [] {});
    EXPECT_EQ(tick_of(engine.run_until(at_tick(10))), 7);
}

TEST(Engine, SleepingProcessesRecordExactGaps) {
    Engine engine;
    std::vector<std::int64_t> a;
    std::vector<std::int64_t> b;
    engine.spawn("a", sleeper(engine, Ticks{2000}, 50, a));
    engine.spawn("b", sleeper(engine, Ticks{3000}, 50, b));
    engine.run_until(at_tick(1'000'000));
    ASSERT_EQ(a.size(), 50u);
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i], static_cast<std::int64_t>(i + 1) * 2000);
    for (std::size_t i = 0; i < b.size(); ++i) EXPECT_EQ(b[i], static_cast<std::int64_t>(i + 1) * 3000);
}

TEST(Engine, InterleavedSleepersProduceIdenticalTraces) {
    auto trace_of = [] {
        Engine engine;
        std::ostringstream trace;
        engine.set_trace_sink(&trace);
        std::vector<std::int64_t> a;
        std::vector<std::int64_t> b;
        engine.spawn("p1", sleeper(engine, Ticks{2000}, 20, a));
        engine.spawn("p2", sleeper(engine, Ticks{2000}, 20, b));
        engine.run_until(at_tick(100000));
        return trace.str();
    };
    const auto first = trace_of();
    EXPECT_EQ(first, trace_of());
    // p1 was spawned first, so at every shared instant it wakes first.
    EXPECT_NE(first.find("2000\tp1\twake\n2000\tp2\twake\n"), std::string::npos);
}

TEST(CondVar, TruePredicateResumesAfterCurrentEvent) {
    Engine engine;
    CondVar cv(engine, "cv");
    std::vector<std::string> log;
    engine.spawn("w", waiter(engine, cv, [] { return true; }, "w", log));
    engine.schedule(engine.now(), [&] { log.push_back("other@" + std::to_string(tick_of(engine.now()))); });
    engine.run_until(at_tick(10));
    EXPECT_EQ(log, (std::vector<std::string>{"other@0", "w@0"}));
}

TEST(CondVar, OneFreedSlotAdmitsExactlyOneWaiter) {
    Engine engine;
    CondVar cv(engine, "slots");
    int running = 1;
    const int cap = 1;
    std::vector<std::string> log;
    auto pred = [&] { return running < cap; };
    auto take = [&] { ++running; };
    engine.spawn("j1", waiter(engine, cv, pred, "j1", log, take));
    engine.spawn("j2", waiter(engine, cv, pred, "j2", log, take));
    engine.schedule(at_tick(5), [&] {
        --running;
        cv.notify();
    });
    engine.run_until(at_tick(100));
    EXPECT_EQ(log, (std::vector<std::string>{"j1@5"}));
    EXPECT_EQ(cv.waiting(), 1u);
    EXPECT_EQ(running, 1);
}

namespace {

// Minimal FIFO server: one slot, customers queued at time 0.
Process fifo_server(Engine& engine, CondVar& cv, std::deque<std::int64_t>& queue, int& running,
                    std::vector<std::int64_t>& dequeues) {
    while (true) {
        co_await cv.wait([&] { return running < 1; });
        co_await cv.wait([&] { return !queue.empty(); });
        const auto service = queue.front();
        queue.pop_front();
        ++running;
        dequeues.push_back(tick_of(engine.now()));
        engine.schedule(engine.now() + Ticks{service}, [&] {
            --running;
            cv.notify();
        });
    }
}

}  // namespace

TEST(CondVar, SingleSlotServerFollowsQueueRecursion) {
    Engine engine;
    CondVar cv(engine, "scheduler");
    const std::vector<std::int64_t> service{3350, 3350, 3350};
    std::deque<std::int64_t> queue(service.begin(), service.end());
    int running = 0;
    std::vector<std::int64_t> dequeues;
    engine.spawn("server", fifo_server(engine, cv, queue, running, dequeues));
    engine.run_until(at_tick(100000));
    EXPECT_EQ(dequeues, oracle::single_server_dequeues(service));
    EXPECT_EQ(dequeues, (std::vector<std::int64_t>{0, 3350, 6700}));
}

TEST(CondVar, NeverSatisfiedWaiterIsReportedAsDeadlock) {
    Engine engine;
    CondVar cv(engine, "never");
    std::vector<std::string> log;
    engine.spawn("stuck", waiter(engine, cv, [] { return false; }, "stuck", log));
    engine.run_until(at_tick(1000));
    EXPECT_TRUE(engine.deadlocked());
    ASSERT_EQ(engine.blocked_processes().size(), 1u);
    EXPECT_EQ(engine.blocked_processes()[0], "stuck on never");
    EXPECT_TRUE(log.empty());
}

TEST(Engine, ExceptionInProcessPropagates) {
    Engine engine;
    engine.spawn("bad", failing(engine));
    EXPECT_THROW(engine.run_until(at_tick(10)), std::runtime_error);
    EXPECT_EQ(engine.live_processes(), 0u);
}

TEST(Engine, EventsNeverFireBeforeTheyWereScheduled) {
    std::mt19937_64 gen(99);
    for (int trial = 0; trial < 20; ++trial) {
        Engine engine;
        std::int64_t last = 0;
        int violations = 0;
        int fired = 0;
        std::function<void(std::int64_t)> plant = [&](std::int64_t from) {
            const auto delay = static_cast<std::int64_t>(gen() % 50);
            engine.schedule(engine.now() + Ticks{delay}, [&, from, delay] {
                ++fired;
                const auto t = tick_of(engine.now());
                if (t != from + delay || t < last) ++violations;
                last = t;
                if (fired < 2000) plant(t);
                if (fired < 2000 && gen() % 3 == 0) plant(t);
            });
        };
        plant(0);
        engine.run_until(at_tick(1'000'000));
        EXPECT_EQ(violations, 0);
        EXPECT_GE(fired, 2000);
    }
}
