// Copyright 2026 The streamsim Authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

// Experiment configuration: a single JSON document, durations in ms and
// sizes in bytes. Loading collects every problem it finds instead of stopping
// at the first one.

#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include <nlohmann/json.hpp>

#include "streamsim/arrivals.hpp"
#include "streamsim/cluster.hpp"
#include "streamsim/driver.hpp"
#include "streamsim/rational.hpp"
#include "streamsim/workload.hpp"

namespace streamsim {

struct WorkerOverride {
    int id = 0;
    std::optional<int> cores;
    std::optional<Rational> speed;
    std::optional<std::int64_t> memory_mb;
};

struct WorkersConfig {
    int count = 1;
    RSpec spec;
    std::vector<WorkerOverride> overrides;
};

struct OutputConfig {
    std::filesystem::path dir = "out";
    bool event_trace = false;
};

struct SimConfig {
    WorkersConfig workers;
    std::int64_t batch_interval_ms = 2000;
    int concurrent_jobs = 1;
    StageDispatch stage_dispatch = StageDispatch::sequential;
    std::int64_t poll_quantum_ms = 1;
    std::optional<std::int64_t> stability_threshold_ms;
    ArrivalModel arrival;
    JobWorkflow workflow;
    std::int64_t horizon_ms = 0;
    std::uint64_t seed = 0;
    OutputConfig outputs;

    /// Defaults to one batch interval.
    Ticks stability_threshold() const { return Ticks{stability_threshold_ms.value_or(batch_interval_ms)}; }

    DriverOptions driver_options() const {
        return DriverOptions{Ticks{batch_interval_ms}, concurrent_jobs, stage_dispatch, Ticks{poll_quantum_ms}};
    }
};

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> violations)
        : std::runtime_error(join(violations)), violations_(std::move(violations)) {}

    const std::vector<std::string>& violations() const { return violations_; }

private:
    static std::string join(const std::vector<std::string>& v) {
        std::string out;
        for (const auto& s : v) out += (out.empty() ? "" : "\n") + s;
        return out;
    }
    std::vector<std::string> violations_;
};

inline const char* to_string(StageDispatch d) { return d == StageDispatch::parallel ? "parallel" : "sequential"; }

/// Semantic checks on an already-parsed configuration.
inline std::vector<std::string> validate_config(const SimConfig& c) {
    std::vector<std::string> v;
    if (c.batch_interval_ms < 1) v.emplace_back("/batch_interval_ms: must be >= 1");
    if (c.concurrent_jobs < 1) v.emplace_back("/concurrent_jobs: must be >= 1");
    if (c.poll_quantum_ms < 1) v.emplace_back("/poll_quantum_ms: must be >= 1");
    if (c.horizon_ms < c.batch_interval_ms) v.emplace_back("/horizon_ms: must be >= batch_interval_ms");
    if (c.stability_threshold_ms && *c.stability_threshold_ms < 0) v.emplace_back("/stability_threshold_ms: must be >= 0");
    if (c.workers.count < 1) v.emplace_back("/workers/count: must be >= 1");
    if (c.workers.spec.cores < 1) v.emplace_back("/workers/cores: must be >= 1");
    if (!c.workers.spec.speed.positive()) v.emplace_back("/workers/speed: must be > 0");
    if (c.workers.spec.memory_mb < 1) v.emplace_back("/workers/memory_mb: must be >= 1");
    std::set<int> seen;
    for (const auto& o : c.workers.overrides) {
        const auto where = "/workers/overrides[id=" + std::to_string(o.id) + "]";
        if (o.id < 0 || o.id >= c.workers.count) v.push_back(where + ": id out of range");
        if (!seen.insert(o.id).second) v.push_back(where + ": duplicate override");
        if (o.speed && !o.speed->positive()) v.push_back(where + "/speed: must be > 0");
        if (o.cores && *o.cores < 1) v.push_back(where + "/cores: must be >= 1");
        if (o.memory_mb && *o.memory_mb < 1) v.push_back(where + "/memory_mb: must be >= 1");
    }
    if (c.arrival.item_size_bytes < 1) v.emplace_back("/arrival/item_size_bytes: must be >= 1");
    if (const auto* e = std::get_if<ExponentialArrivals>(&c.arrival.variant); e && e->mean_ms < 1)
        v.emplace_back("/arrival/mean_ms: must be >= 1");
    if (const auto* d = std::get_if<DeterministicArrivals>(&c.arrival.variant); d && d->interval_ms < 1)
        v.emplace_back("/arrival/interval_ms: must be >= 1");
    for (const auto& w : validate_workflow(c.workflow)) v.push_back("/workflow: " + w);
    return v;
}

/// Workers after applying per-worker overrides.
inline std::vector<Worker> build_workers(const SimConfig& c) {
    auto workers = conf_setup(c.workers.count, c.workers.spec);
    for (const auto& o : c.workers.overrides) {
        auto& w = workers.at(static_cast<std::size_t>(o.id));
        if (o.cores) w.spec.cores = *o.cores;
        if (o.speed) w.spec.speed = *o.speed;
        if (o.memory_mb) w.spec.memory_mb = *o.memory_mb;
    }
    return workers;
}

namespace detail {

using json = nlohmann::json;

class FieldReader {
public:
    std::vector<std::string> violations;

    void unknown_keys(const json& obj, const std::string& path, std::initializer_list<const char*> known) {
        if (!obj.is_object()) return;
        for (const auto& [key, value] : obj.items()) {
            if (std::none_of(known.begin(), known.end(), [&](const char* k) { return key == k; }))
                violations.push_back(path + "/" + key + ": unknown field");
        }
    }

    const json* object(const json& parent, const std::string& path, const char* key, bool required) {
        if (!parent.contains(key)) {
            if (required) violations.push_back(path + "/" + key + ": missing required object");
            return nullptr;
        }
        const auto& v = parent.at(key);
        if (!v.is_object()) {
            violations.push_back(path + "/" + key + ": expected an object");
            return nullptr;
        }
        return &v;
    }

    template <typename Int>
    void integer(const json& parent, const std::string& path, const char* key, Int& out, bool required) {
        if (!parent.contains(key)) {
            if (required) violations.push_back(path + "/" + key + ": missing required integer");
            return;
        }
        const auto& v = parent.at(key);
        if (v.is_number_unsigned()) {
            const auto u = v.get<std::uint64_t>();
            if (u > static_cast<std::uint64_t>(std::numeric_limits<Int>::max())) {
                violations.push_back(path + "/" + key + ": integer out of range");
                return;
            }
            out = static_cast<Int>(u);
        } else if (v.is_number_integer()) {
            const auto i = v.get<std::int64_t>();
            if constexpr (std::is_unsigned_v<Int>) {
                violations.push_back(path + "/" + key + ": expected a non-negative integer");
                return;
            } else {
                if (i < std::numeric_limits<Int>::min() || i > std::numeric_limits<Int>::max()) {
                    violations.push_back(path + "/" + key + ": integer out of range");
                    return;
                }
                out = static_cast<Int>(i);
            }
        } else {
            violations.push_back(path + "/" + key + ": expected an integer");
        }
    }

    template <typename Int>
    std::optional<Int> optional_integer(const json& parent, const std::string& path, const char* key) {
        if (!parent.contains(key)) return std::nullopt;
        Int value{};
        const auto before = violations.size();
        integer(parent, path, key, value, true);
        if (violations.size() != before) return std::nullopt;
        return value;
    }

    std::optional<Rational> rational(const json& parent, const std::string& path, const char* key) {
        if (!parent.contains(key)) return std::nullopt;
        const auto& v = parent.at(key);
        if (v.is_number_integer()) return Rational{v.get<std::int64_t>()};
        if (v.is_number_float()) {
            if (auto r = Rational::from_decimal(v.get<double>())) return r;
            violations.push_back(path + "/" + key + ": expected a decimal with at most 9 fractional digits");
            return std::nullopt;
        }
        violations.push_back(path + "/" + key + ": expected a number");
        return std::nullopt;
    }

    void boolean(const json& parent, const std::string& path, const char* key, bool& out) {
        if (!parent.contains(key)) return;
        const auto& v = parent.at(key);
        if (!v.is_boolean()) {
            violations.push_back(path + "/" + key + ": expected true or false");
            return;
        }
        out = v.get<bool>();
    }

    std::optional<std::string> string(const json& parent, const std::string& path, const char* key, bool required) {
        if (!parent.contains(key)) {
            if (required) violations.push_back(path + "/" + key + ": missing required string");
            return std::nullopt;
        }
        const auto& v = parent.at(key);
        if (!v.is_string()) {
            violations.push_back(path + "/" + key + ": expected a string");
            return std::nullopt;
        }
        return v.get<std::string>();
    }
};

inline CostExpr read_cost(FieldReader& r, const json& stage, const std::string& path, bool allow_variable) {
    CostExpr cost;
    const auto* c = r.object(stage, path, "cost", true);
    if (!c) return cost;
    const auto cpath = path + "/cost";
    if (allow_variable) {
        r.unknown_keys(*c, cpath, {"base_ms", "per_kb_ms", "jitter_ms"});
    } else {
        r.unknown_keys(*c, cpath, {"base_ms"});
    }
    r.integer(*c, cpath, "base_ms", cost.base, true);
    if (!allow_variable) return cost;
    if (auto per_kb = r.rational(*c, cpath, "per_kb_ms")) cost.per_byte = *per_kb / 1024;
    if (c->contains("jitter_ms")) {
        const auto& j = c->at("jitter_ms");
        if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer()) {
            r.violations.push_back(cpath + "/jitter_ms: expected [lo, hi] integers");
        } else {
            cost.jitter_lo = j[0].get<std::int64_t>();
            cost.jitter_hi = j[1].get<std::int64_t>();
        }
    }
    return cost;
}

inline JobWorkflow read_workflow(FieldReader& r, const json& wf) {
    JobWorkflow workflow;
    r.unknown_keys(wf, "/workflow", {"stages", "empty_job"});
    if (!wf.contains("stages") || !wf.at("stages").is_array()) {
        r.violations.emplace_back("/workflow/stages: expected an array of stages");
    } else {
        const auto& stages = wf.at("stages");
        for (std::size_t i = 0; i < stages.size(); ++i) {
            const auto path = "/workflow/stages/" + std::to_string(i);
            const auto& s = stages[i];
            if (!s.is_object()) {
                r.violations.push_back(path + ": expected an object");
                continue;
            }
            r.unknown_keys(s, path, {"id", "constraints", "cost"});
            StageSpec spec;
            spec.id = r.string(s, path, "id", true).value_or("");
            if (s.contains("constraints")) {
                const auto& c = s.at("constraints");
                if (!c.is_array()) {
                    r.violations.push_back(path + "/constraints: expected an array of stage ids");
                } else {
                    for (const auto& dep : c) {
                        if (dep.is_string()) spec.constraints.push_back(dep.get<std::string>());
                        else r.violations.push_back(path + "/constraints: stage ids must be strings");
                    }
                }
            }
            spec.cost = read_cost(r, s, path, true);
            workflow.stages.push_back(std::move(spec));
        }
    }
    if (const auto* empty = r.object(wf, "/workflow", "empty_job", true)) {
        r.unknown_keys(*empty, "/workflow/empty_job", {"id", "cost"});
        if (auto id = r.string(*empty, "/workflow/empty_job", "id", false)) workflow.empty_stage.id = *id;
        workflow.empty_stage.cost = read_cost(r, *empty, "/workflow/empty_job", false);
    }
    return workflow;
}

inline ArrivalModel read_arrival(FieldReader& r, const json& a, const std::filesystem::path& base_dir) {
    ArrivalModel model;
    const std::string path = "/arrival";
    const auto kind = r.string(a, path, "model", true);
    r.integer(a, path, "item_size_bytes", model.item_size_bytes, false);
    if (!kind) return model;
    if (*kind == "exponential") {
        r.unknown_keys(a, path, {"model", "mean_ms", "item_size_bytes"});
        ExponentialArrivals e;
        r.integer(a, path, "mean_ms", e.mean_ms, true);
        model.variant = e;
    } else if (*kind == "deterministic") {
        r.unknown_keys(a, path, {"model", "interval_ms", "item_size_bytes"});
        DeterministicArrivals d;
        r.integer(a, path, "interval_ms", d.interval_ms, true);
        model.variant = d;
    } else if (*kind == "trace") {
        r.unknown_keys(a, path, {"model", "path", "item_size_bytes"});
        TraceArrivals t;
        if (auto p = r.string(a, path, "path", true)) {
            t.path = std::filesystem::path(*p).is_absolute() ? std::filesystem::path(*p) : base_dir / *p;
            try {
                t.events = load_arrival_trace(t.path);
            } catch (const TraceFormatError& e) {
                r.violations.push_back(path + "/path: " + e.what());
            }
        }
        model.variant = std::move(t);
    } else {
        r.violations.push_back(path + "/model: expected one of exponential, deterministic, trace");
    }
    return model;
}

}  // namespace detail

/// Builds a configuration from a parsed JSON document. Relative trace paths
/// resolve against `base_dir`. Throws ConfigError listing every problem.
inline SimConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir = ".") {
    detail::FieldReader r;
    SimConfig c;
    if (!doc.is_object()) throw ConfigError({"/: expected a JSON object"});
    r.unknown_keys(doc, "", {"workers", "batch_interval_ms", "concurrent_jobs", "stage_dispatch", "poll_quantum_ms",
                             "stability_threshold_ms", "arrival", "workflow", "horizon_ms", "seed", "outputs"});

    if (const auto* w = r.object(doc, "", "workers", true)) {
        r.unknown_keys(*w, "/workers", {"count", "cores", "speed", "memory_mb", "overrides"});
        r.integer(*w, "/workers", "count", c.workers.count, true);
        r.integer(*w, "/workers", "cores", c.workers.spec.cores, false);
        if (auto s = r.rational(*w, "/workers", "speed")) c.workers.spec.speed = *s;
        r.integer(*w, "/workers", "memory_mb", c.workers.spec.memory_mb, false);
        if (w->contains("overrides")) {
            const auto& list = w->at("overrides");
            if (!list.is_array()) {
                r.violations.emplace_back("/workers/overrides: expected an array");
            } else {
                for (std::size_t i = 0; i < list.size(); ++i) {
                    const auto path = "/workers/overrides/" + std::to_string(i);
                    if (!list[i].is_object()) {
                        r.violations.push_back(path + ": expected an object");
                        continue;
                    }
                    r.unknown_keys(list[i], path, {"id", "cores", "speed", "memory_mb"});
                    WorkerOverride o;
                    r.integer(list[i], path, "id", o.id, true);
                    o.cores = r.optional_integer<int>(list[i], path, "cores");
                    o.speed = r.rational(list[i], path, "speed");
                    o.memory_mb = r.optional_integer<std::int64_t>(list[i], path, "memory_mb");
                    c.workers.overrides.push_back(o);
                }
            }
        }
    }
    r.integer(doc, "", "batch_interval_ms", c.batch_interval_ms, true);
    r.integer(doc, "", "concurrent_jobs", c.concurrent_jobs, false);
    if (auto d = r.string(doc, "", "stage_dispatch", false)) {
        if (*d == "sequential") c.stage_dispatch = StageDispatch::sequential;
        else if (*d == "parallel") c.stage_dispatch = StageDispatch::parallel;
        else r.violations.emplace_back("/stage_dispatch: expected sequential or parallel");
    }
    r.integer(doc, "", "poll_quantum_ms", c.poll_quantum_ms, false);
    c.stability_threshold_ms = r.optional_integer<std::int64_t>(doc, "", "stability_threshold_ms");
    if (const auto* a = r.object(doc, "", "arrival", true)) c.arrival = detail::read_arrival(r, *a, base_dir);
    if (const auto* wf = r.object(doc, "", "workflow", true)) c.workflow = detail::read_workflow(r, *wf);
    r.integer(doc, "", "horizon_ms", c.horizon_ms, true);
    r.integer(doc, "", "seed", c.seed, true);
    if (const auto* o = r.object(doc, "", "outputs", false)) {
        r.unknown_keys(*o, "/outputs", {"dir", "event_trace"});
        if (auto dir = r.string(*o, "/outputs", "dir", false)) c.outputs.dir = *dir;
        r.boolean(*o, "/outputs", "event_trace", c.outputs.event_trace);
    }

    // Semantic checks only make sense once the structure is sound.
    if (r.violations.empty()) {
        auto semantic = validate_config(c);
        r.violations.insert(r.violations.end(), semantic.begin(), semantic.end());
    }
    if (!r.violations.empty()) throw ConfigError(std::move(r.violations));
    return c;
}

/// Parses JSON text; syntax errors are reported with line and column.
inline SimConfig parse_config_text(const std::string& text, const std::filesystem::path& base_dir = ".",
                                   const std::string& source = "config") {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        std::size_t line = 1;
        std::size_t column = 1;
        const auto limit = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
        for (std::size_t i = 0; i < limit; ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        throw ConfigError({source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": JSON syntax error: " + e.what()});
    }
    return parse_config(doc, base_dir);
}

inline SimConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError({path.string() + ": cannot open configuration file"});
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config_text(text.str(), path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path(),
                             path.string());
}

}  // namespace streamsim
