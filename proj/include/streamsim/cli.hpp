// Copyright 2026 The streamsim Authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

// Command implementations behind the streamsim executable: run, sweep and
// validate. Each returns the process exit code.

#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "streamsim/config.hpp"
#include "streamsim/metrics.hpp"
#include "streamsim/simulation.hpp"

namespace streamsim::cli {

enum ExitCode : int {
    kOk = 0,
    kConfigError = 2,
    kIoError = 3,
};

struct RunOptions {
    std::filesystem::path config;
    std::optional<std::filesystem::path> out;
    std::optional<std::uint64_t> seed;
    bool trace = false;
};

struct SweepOptions {
    std::filesystem::path config;
    std::string axis;
    std::vector<std::string> values;
    std::optional<std::filesystem::path> out;
    unsigned parallelism = 0;  ///< 0 picks the hardware concurrency
};

inline const std::vector<std::string>& sweep_axes() {
    static const std::vector<std::string> axes{"batch_interval_ms", "concurrent_jobs", "workers.count", "workers.speed"};
    return axes;
}

/// Simulates `config` and writes batches.csv, stages.csv, summary.json (and
/// events.tsv when tracing) into `dir`.
inline RunResult run_to_dir(const SimConfig& config, const std::filesystem::path& dir, bool trace) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
    std::optional<std::ofstream> trace_file;
    if (trace) {
        trace_file.emplace(dir / "events.tsv", std::ios::binary | std::ios::trunc);
        if (!*trace_file) throw IoError("cannot open " + (dir / "events.tsv").string() + " for writing");
    }
    auto result = simulate(config, trace_file ? &*trace_file : nullptr);
    if (trace_file) {
        trace_file->flush();
        if (!*trace_file) throw IoError("write to " + (dir / "events.tsv").string() + " failed");
    }
    export_csv(dir, result.metrics, summary_document(config, result));
    return result;
}

inline void print_violations(std::ostream& err, const ConfigError& e) {
    err << "configuration error:\n";
    for (const auto& v : e.violations()) err << "  " << v << '\n';
}

inline int validate(const std::filesystem::path& config_path, std::ostream& out, std::ostream& err) {
    try {
        const auto config = load_config(config_path);
        out << config_path.string() << ": ok (" << config.workflow.stages.size() << " stages, " << config.workers.count
            << " workers, bi=" << config.batch_interval_ms << " ms, conJobs=" << config.concurrent_jobs << ")\n";
        return kOk;
    } catch (const ConfigError& e) {
        print_violations(err, e);
        return kConfigError;
    }
}

inline int run(const RunOptions& options, std::ostream& out, std::ostream& err) {
    try {
        auto config = load_config(options.config);
        if (options.seed) config.seed = *options.seed;
        const auto dir = options.out.value_or(config.outputs.dir);
        const auto result = run_to_dir(config, dir, options.trace || config.outputs.event_trace);
        const auto& s = result.summary;
        out << "batches " << s.batches_total << " (" << s.batches_empty << " empty), completed " << s.batches_completed
            << ", max scheduling delay " << s.max_scheduling_delay_ms << " ms, stability " << (s.stable ? "true" : "false")
            << " -> " << dir.string() << '\n';
        return kOk;
    } catch (const ConfigError& e) {
        print_violations(err, e);
        return kConfigError;
    } catch (const IoError& e) {
        err << "i/o error: " << e.what() << '\n';
        return kIoError;
    }
}

/// Applies one sweep value to a copy of `base`. Throws ConfigError for an
/// unknown axis or a malformed value.
inline SimConfig with_axis_value(SimConfig base, const std::string& axis, const std::string& value) {
    auto as_integer = [&]() -> std::int64_t {
        try {
            std::size_t used = 0;
            const auto v = std::stoll(value, &used);
            if (used != value.size()) throw std::invalid_argument(value);
            return v;
        } catch (const std::logic_error&) {
            throw ConfigError({"--values: '" + value + "' is not an integer (axis " + axis + ")"});
        }
    };
    if (axis == "batch_interval_ms") {
        base.batch_interval_ms = as_integer();
    } else if (axis == "concurrent_jobs") {
        base.concurrent_jobs = static_cast<int>(as_integer());
    } else if (axis == "workers.count") {
        base.workers.count = static_cast<int>(as_integer());
    } else if (axis == "workers.speed") {
        std::optional<Rational> speed;
        try {
            std::size_t used = 0;
            const double d = std::stod(value, &used);
            if (used == value.size()) speed = Rational::from_decimal(d);
        } catch (const std::logic_error&) {
        }
        if (!speed) throw ConfigError({"--values: '" + value + "' is not a decimal speed"});
        base.workers.spec.speed = *speed;
    } else {
        std::string known;
        for (const auto& a : sweep_axes()) known += (known.empty() ? "" : ", ") + a;
        throw ConfigError({"--axis: unknown axis '" + axis + "' (expected one of " + known + ")"});
    }
    auto violations = validate_config(base);
    if (!violations.empty()) {
        for (auto& v : violations) v = axis + "=" + value + ": " + v;
        throw ConfigError(std::move(violations));
    }
    return base;
}

inline std::string format_ms(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

inline int sweep(const SweepOptions& options, std::ostream& out, std::ostream& err) {
    try {
        const auto base = load_config(options.config);
        if (options.values.empty()) throw ConfigError({"--values: at least one value is required"});
        std::vector<SimConfig> configs;
        for (const auto& v : options.values) configs.push_back(with_axis_value(base, options.axis, v));

        const auto root = options.out.value_or(base.outputs.dir);
        std::error_code ec;
        std::filesystem::create_directories(root, ec);
        if (ec) throw IoError("cannot create output directory " + root.string() + ": " + ec.message());

        // Runs share nothing mutable, so they may proceed concurrently.
        const unsigned width = options.parallelism ? options.parallelism : std::max(1u, std::thread::hardware_concurrency());
        std::vector<RunSummary> summaries(configs.size());
        for (std::size_t first = 0; first < configs.size(); first += width) {
            std::vector<std::future<RunSummary>> batch;
            for (std::size_t i = first; i < std::min(configs.size(), first + width); ++i) {
                const auto dir = root / (options.axis + "=" + options.values[i]);
                batch.push_back(std::async(std::launch::async, [&configs, i, dir] {
                    return run_to_dir(configs[i], dir, configs[i].outputs.event_trace).summary;
                }));
            }
            for (std::size_t k = 0; k < batch.size(); ++k) summaries[first + k] = batch[k].get();
        }

        std::ostringstream csv;
        csv << "axis,value,batches_total,batches_empty,batches_dispatched,batches_completed,mean_scheduling_delay_ms,"
               "max_scheduling_delay_ms,mean_processing_time_ms,max_processing_time_ms,generation_interval_min_ms,"
               "generation_interval_max_ms,stability\n";
        for (std::size_t i = 0; i < summaries.size(); ++i) {
            const auto& s = summaries[i];
            auto opt = [](const std::optional<std::int64_t>& v) { return v ? std::to_string(*v) : std::string{}; };
            csv << options.axis << ',' << options.values[i] << ',' << s.batches_total << ',' << s.batches_empty << ','
                << s.batches_dispatched << ',' << s.batches_completed << ',' << format_ms(s.mean_scheduling_delay_ms) << ','
                << s.max_scheduling_delay_ms << ',' << format_ms(s.mean_processing_time_ms) << ',' << s.max_processing_time_ms
                << ',' << opt(s.generation_interval_min_ms) << ',' << opt(s.generation_interval_max_ms) << ','
                << (s.stable ? "true" : "false") << '\n';
        }
        detail::write_file(root / "sweep.csv", [&](std::ostream& o) { o << csv.str(); });
        out << "sweep over " << options.axis << ": " << summaries.size() << " runs -> " << (root / "sweep.csv").string() << '\n';
        return kOk;
    } catch (const ConfigError& e) {
        print_violations(err, e);
        return kConfigError;
    } catch (const IoError& e) {
        err << "i/o error: " << e.what() << '\n';
        return kIoError;
    }
}

}  // namespace streamsim::cli
