// Copyright 2026 The streamsim Authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

// Application model: batches, stage DAGs and per-stage cost expressions.

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "streamsim/random.hpp"
#include "streamsim/rational.hpp"
#include "streamsim/time.hpp"

namespace streamsim {

using BatchId = std::uint64_t;
using StageId = std::string;

struct Batch {
    BatchId id = 0;
    std::int64_t size_bytes = 0;
    SimTime created_at{};
};

constexpr bool is_empty_batch(const Batch& batch) { return batch.size_bytes == 0; }

/// base + round(per_byte * size) + U[jitter_lo, jitter_hi], in ticks.
struct CostExpr {
    std::int64_t base = 0;
    Rational per_byte{0};
    std::int64_t jitter_lo = 0;
    std::int64_t jitter_hi = 0;

    static CostExpr constant(std::int64_t ticks) { return CostExpr{ticks, Rational{0}, 0, 0}; }
    bool deterministic() const { return jitter_lo == jitter_hi; }
};

struct StageSpec {
    StageId id;
    std::vector<StageId> constraints;
    CostExpr cost;
};

struct JobWorkflow {
    std::vector<StageSpec> stages;
    StageSpec empty_stage{"empty", {}, CostExpr::constant(0)};

    /// Stages run for a batch: the single dummy stage for empty batches.
    std::span<const StageSpec> stages_for(const Batch& batch) const {
        if (is_empty_batch(batch)) return {&empty_stage, 1};
        return stages;
    }
};

/// True iff every constraint appears in `fin`.
inline bool check_constraints(std::span<const StageId> constraints, std::span<const StageId> fin) {
    return std::all_of(constraints.begin(), constraints.end(), [&](const StageId& c) {
        return std::find(fin.begin(), fin.end(), c) != fin.end();
    });
}

/// Evaluates a stage cost for a batch of `size_bytes`. Jitter is drawn from
/// `rng` only when the jitter range is non-degenerate.
inline std::int64_t cost_per_stage(const StageSpec& stage, std::int64_t size_bytes, Rng& rng) {
    const auto& c = stage.cost;
    std::int64_t cost = c.base + mul_round_half_up(c.per_byte, size_bytes);
    cost += c.deterministic() ? c.jitter_lo : rng.uniform_int(c.jitter_lo, c.jitter_hi);
    return std::max<std::int64_t>(cost, 0);
}

/// Structural problems of a workflow; empty means the workflow is valid.
inline std::vector<std::string> validate_workflow(const JobWorkflow& workflow) {
    std::vector<std::string> violations;
    auto check_cost = [&](const StageSpec& s) {
        const auto& c = s.cost;
        if (c.base < 0) violations.push_back("stage " + s.id + ": negative base cost");
        if (c.per_byte.num < 0) violations.push_back("stage " + s.id + ": negative per-byte cost");
        if (c.jitter_lo < 0 || c.jitter_hi < 0) violations.push_back("stage " + s.id + ": negative jitter");
        if (c.jitter_lo > c.jitter_hi) violations.push_back("stage " + s.id + ": jitter lower bound exceeds upper bound");
    };

    if (workflow.stages.empty()) violations.emplace_back("workflow has no stages");

    std::map<StageId, const StageSpec*> by_id;
    for (const auto& s : workflow.stages) {
        if (s.id.empty()) violations.emplace_back("stage with empty id");
        if (!by_id.emplace(s.id, &s).second) violations.push_back("duplicate stage id " + s.id);
        check_cost(s);
    }
    for (const auto& s : workflow.stages) {
        for (const auto& c : s.constraints) {
            if (!by_id.contains(c)) violations.push_back("stage " + s.id + " depends on unknown stage " + c);
            if (c == s.id) violations.push_back("stage " + s.id + " depends on itself");
        }
    }
    if (!workflow.stages.empty() &&
        std::none_of(workflow.stages.begin(), workflow.stages.end(), [](const StageSpec& s) { return s.constraints.empty(); })) {
        violations.emplace_back("workflow has no source stage");
    }

    // Kahn's algorithm over resolvable edges; leftovers sit on a cycle.
    std::map<StageId, int> indegree;
    std::map<StageId, std::vector<StageId>> dependents;
    for (const auto& [id, s] : by_id) indegree[id] = 0;
    for (const auto& [id, s] : by_id) {
        for (const auto& c : std::set<StageId>(s->constraints.begin(), s->constraints.end())) {
            if (!by_id.contains(c)) continue;
            ++indegree[id];
            dependents[c].push_back(id);
        }
    }
    std::vector<StageId> ready;
    for (const auto& [id, deg] : indegree)
        if (deg == 0) ready.push_back(id);
    std::size_t resolved = 0;
    while (!ready.empty()) {
        const auto id = ready.back();
        ready.pop_back();
        ++resolved;
        for (const auto& d : dependents[id])
            if (--indegree[d] == 0) ready.push_back(d);
    }
    if (resolved < by_id.size()) {
        std::string members;
        for (const auto& [id, deg] : indegree) {
            if (deg == 0) continue;
            if (!members.empty()) members += ",";
            members += id;
        }
        violations.push_back("constraint cycle among stages {" + members + "}");
    }

    if (!workflow.empty_stage.constraints.empty()) violations.emplace_back("empty-job stage must not have constraints");
    check_cost(workflow.empty_stage);
    return violations;
}

}  // namespace streamsim
