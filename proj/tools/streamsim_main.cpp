// Copyright 2026 The streamsim Authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "streamsim/cli.hpp"

namespace {

std::vector<std::string> split_values(const std::string& csv) {
    std::vector<std::string> values;
    std::stringstream in(csv);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (!item.empty()) values.push_back(item);
    }
    return values;
}

}  // namespace

int main(int argc, char** argv) {
    namespace cli = streamsim::cli;

    CLI::App app{"streamsim - discrete-event simulator of micro-batch stream processing"};
    app.require_subcommand(1);

    cli::RunOptions run;
    std::string run_out;
    std::uint64_t seed = 0;
    auto* run_cmd = app.add_subcommand("run", "simulate one configuration and write metrics");
    run_cmd->add_option("--config", run.config, "configuration JSON")->required();
    run_cmd->add_option("--out", run_out, "output directory (default: outputs.dir)");
    auto* seed_opt = run_cmd->add_option("--seed", seed, "override the configured seed");
    run_cmd->add_flag("--trace", run.trace, "write events.tsv");

    cli::SweepOptions sweep;
    std::string sweep_values;
    std::string sweep_out;
    auto* sweep_cmd = app.add_subcommand("sweep", "run one simulation per parameter value");
    sweep_cmd->add_option("--config", sweep.config, "configuration JSON template")->required();
    sweep_cmd->add_option("--axis", sweep.axis, "batch_interval_ms | concurrent_jobs | workers.count | workers.speed")->required();
    sweep_cmd->add_option("--values", sweep_values, "comma-separated values")->required();
    sweep_cmd->add_option("--out", sweep_out, "output root (default: outputs.dir)");
    sweep_cmd->add_option("--jobs", sweep.parallelism, "concurrent runs (default: hardware threads)");

    std::string validate_path;
    auto* validate_cmd = app.add_subcommand("validate", "check a configuration without running it");
    validate_cmd->add_option("--config", validate_path, "configuration JSON")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : cli::kConfigError;
    }

    if (*run_cmd) {
        if (!run_out.empty()) run.out = run_out;
        if (*seed_opt) run.seed = seed;
        return cli::run(run, std::cout, std::cerr);
    }
    if (*sweep_cmd) {
        sweep.values = split_values(sweep_values);
        if (!sweep_out.empty()) sweep.out = sweep_out;
        return cli::sweep(sweep, std::cout, std::cerr);
    }
    return cli::validate(validate_path, std::cout, std::cerr);
}
