// Copyright 2026 The streamsim Authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "streamsim/config.hpp"
#include "support/oracles.hpp"

namespace fixtures {

using namespace streamsim;

/// Word-count style two-stage job: S1 costs 3100-3400 ms, S2 100 ms, the
/// empty job 100 ms.
inline JobWorkflow word_count_workflow() {
    JobWorkflow wf;
    wf.stages.push_back(StageSpec{"S1", {}, CostExpr{3100, Rational{0}, 0, 300}});
    wf.stages.push_back(StageSpec{"S2", {"S1"}, CostExpr::constant(100)});
    wf.empty_stage = StageSpec{"empty", {}, CostExpr::constant(100)};
    return wf;
}

/// Four-stage diamond: S1 -> {S2, S3} -> S4.
inline JobWorkflow diamond_workflow(std::array<std::int64_t, 4> costs) {
    JobWorkflow wf;
    wf.stages.push_back(StageSpec{"S1", {}, CostExpr::constant(costs[0])});
    wf.stages.push_back(StageSpec{"S2", {"S1"}, CostExpr::constant(costs[1])});
    wf.stages.push_back(StageSpec{"S3", {"S1"}, CostExpr::constant(costs[2])});
    wf.stages.push_back(StageSpec{"S4", {"S2", "S3"}, CostExpr::constant(costs[3])});
    wf.empty_stage = StageSpec{"empty", {}, CostExpr::constant(1)};
    return wf;
}

inline std::vector<oracle::DagStage> to_oracle(const JobWorkflow& wf) {
    std::vector<oracle::DagStage> dag;
    for (const auto& s : wf.stages) dag.push_back({s.id, s.constraints, s.cost.base});
    return dag;
}

/// 30 workers (2 cores, speed 1, 2 GB), exponential arrivals with mean
/// 1960 ms of 1 KB items, bi = 2 s, conJobs = 1.
inline SimConfig scenario1(std::int64_t horizon_ms = 600000, std::uint64_t seed = 20180516) {
    SimConfig c;
    c.workers.count = 30;
    c.workers.spec = RSpec{2, Rational{1}, 2048};
    c.batch_interval_ms = 2000;
    c.concurrent_jobs = 1;
    c.arrival.variant = ExponentialArrivals{1960};
    c.arrival.item_size_bytes = 1024;
    c.workflow = word_count_workflow();
    c.horizon_ms = horizon_ms;
    c.seed = seed;
    return c;
}

/// Scenario 1 with bi = 4 s and conJobs = 15.
inline SimConfig scenario2(std::int64_t horizon_ms = 600000, std::uint64_t seed = 20180516) {
    auto c = scenario1(horizon_ms, seed);
    c.batch_interval_ms = 4000;
    c.concurrent_jobs = 15;
    return c;
}

/// One non-empty batch (three 1 KB items before the first cut) running the
/// diamond workflow.
inline SimConfig single_diamond_job(StageDispatch mode, int workers, std::array<std::int64_t, 4> costs = {10, 20, 30, 40}) {
    SimConfig c;
    c.workers.count = workers;
    c.batch_interval_ms = 2000;
    c.concurrent_jobs = 1;
    c.stage_dispatch = mode;
    c.arrival.variant = DeterministicArrivals{500};
    c.workflow = diamond_workflow(costs);
    c.horizon_ms = 2999;
    c.seed = 1;
    return c;
}

}  // namespace fixtures
