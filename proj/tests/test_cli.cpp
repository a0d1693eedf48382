// Copyright 2026 The streamsim Authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "streamsim/cli.hpp"
#include "support/fixtures.hpp"

using namespace streamsim;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    auto dir = fs::temp_directory_path() / ("streamsim_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path config_file(const char* name) { return fs::path(STREAMSIM_SOURCE_DIR) / "configs" / name; }

int shell(const std::string& args) {
    const auto status = std::system((std::string(STREAMSIM_CLI) + " " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(CliRun, WritesAllOutputs) {
    const auto dir = scratch("run");
    std::ostringstream out, err;
    cli::RunOptions o{config_file("fig1_dag.json"), dir / "out", std::nullopt, true};
    ASSERT_EQ(cli::run(o, out, err), cli::kOk) << err.str();
    for (const char* f : {"batches.csv", "stages.csv", "summary.json", "events.tsv"}) EXPECT_TRUE(fs::exists(dir / "out" / f)) << f;
    const auto trace = slurp(dir / "out" / "events.tsv");
    EXPECT_NE(trace.find("\tbatch-generator\tbatch-cut\n"), std::string::npos);
    EXPECT_NE(trace.find("\tstage-1-S4\tstage-end\n"), std::string::npos);
    fs::remove_all(dir);
}

TEST(CliRun, MissingConfigExitsTwo) {
    std::ostringstream out, err;
    EXPECT_EQ(cli::run(cli::RunOptions{"/nonexistent.json", std::nullopt, std::nullopt, false}, out, err), cli::kConfigError);
    EXPECT_NE(err.str().find("cannot open"), std::string::npos);
}

TEST(CliRun, UnwritableOutputExitsThree) {
    const auto dir = scratch("unwritable");
    std::ofstream(dir / "blocker") << "x";
    std::ostringstream out, err;
    cli::RunOptions o{config_file("fig1_dag.json"), dir / "blocker" / "out", std::nullopt, false};
    EXPECT_EQ(cli::run(o, out, err), cli::kIoError);
    fs::remove_all(dir);
}

TEST(CliRun, SeedOverrideChangesResults) {
    const auto dir = scratch("seed");
    std::ostringstream out, err;
    ASSERT_EQ(cli::run({config_file("scenario1.json"), dir / "a", 1, false}, out, err), cli::kOk);
    ASSERT_EQ(cli::run({config_file("scenario1.json"), dir / "b", 2, false}, out, err), cli::kOk);
    EXPECT_NE(slurp(dir / "a" / "batches.csv"), slurp(dir / "b" / "batches.csv"));
    fs::remove_all(dir);
}

// The validator refuses horizon < bi in configuration files; the library path
// still produces a well-formed, header-only result.
TEST(CliRun, HorizonShorterThanIntervalGivesEmptyCsv) {
    auto config = fixtures::scenario1(1000);
    const auto dir = scratch("short");
    const auto r = cli::run_to_dir(config, dir, false);
    EXPECT_EQ(r.summary.batches_total, 0u);
    EXPECT_EQ(slurp(dir / "batches.csv"), std::string(kBatchesCsvHeader) + "\n");
    EXPECT_FALSE(validate_config(config).empty());
    fs::remove_all(dir);
}

TEST(CliValidate, ReportsOkAndViolations) {
    std::ostringstream out, err;
    EXPECT_EQ(cli::validate(config_file("scenario1.json"), out, err), cli::kOk);
    const auto dir = scratch("validate");
    std::ofstream(dir / "partial.json") << R"({"seed": 1, "horizon_ms": 10, "batch_interval_ms": 0})";
    EXPECT_EQ(cli::validate(dir / "partial.json", out, err), cli::kConfigError);
    EXPECT_NE(err.str().find("/workflow"), std::string::npos);

    auto text = slurp(config_file("scenario1.json"));
    text.replace(text.find("\"batch_interval_ms\": 2000"), 25, "\"batch_interval_ms\": 0");
    text.replace(text.find("\"poll_quantum_ms\": 1"), 20, "\"poll_quantum_ms\": 0");
    std::ofstream(dir / "bad.json") << text;
    std::ostringstream err2;
    EXPECT_EQ(cli::validate(dir / "bad.json", out, err2), cli::kConfigError);
    EXPECT_NE(err2.str().find("/batch_interval_ms"), std::string::npos);
    EXPECT_NE(err2.str().find("/poll_quantum_ms"), std::string::npos);
    fs::remove_all(dir);
}

TEST(CliSweep, SingleValueMatchesRun) {
    const auto dir = scratch("sweep_one");
    std::ostringstream out, err;
    ASSERT_EQ(cli::run({config_file("scenario1.json"), dir / "run", std::nullopt, false}, out, err), cli::kOk);
    cli::SweepOptions s{config_file("scenario1.json"), "batch_interval_ms", {"2000"}, dir / "sweep", 1};
    ASSERT_EQ(cli::sweep(s, out, err), cli::kOk) << err.str();
    EXPECT_EQ(slurp(dir / "run" / "batches.csv"), slurp(dir / "sweep" / "batch_interval_ms=2000" / "batches.csv"));
    EXPECT_TRUE(fs::exists(dir / "sweep" / "sweep.csv"));
    fs::remove_all(dir);
}

TEST(CliSweep, LongerIntervalHasFewerEmptyBatches) {
    const auto dir = scratch("sweep_bi");
    std::ostringstream out, err;
    cli::SweepOptions s{config_file("scenario1.json"), "batch_interval_ms", {"2000", "4000"}, dir, 0};
    ASSERT_EQ(cli::sweep(s, out, err), cli::kOk) << err.str();
    auto fraction = [&](const char* sub) {
        const auto j = nlohmann::json::parse(slurp(dir / sub / "summary.json"));
        return j["batches_empty"].get<double>() / j["batches_total"].get<double>();
    };
    EXPECT_GT(fraction("batch_interval_ms=2000"), fraction("batch_interval_ms=4000"));
    std::istringstream csv(slurp(dir / "sweep.csv"));
    std::string line;
    int lines = 0;
    while (std::getline(csv, line)) ++lines;
    EXPECT_EQ(lines, 3);
    fs::remove_all(dir);
}

TEST(CliSweep, UnknownAxisOrBadValueExitsTwo) {
    std::ostringstream out, err;
    EXPECT_EQ(cli::sweep({config_file("scenario1.json"), "colour", {"1"}, std::nullopt, 1}, out, err), cli::kConfigError);
    EXPECT_EQ(cli::sweep({config_file("scenario1.json"), "concurrent_jobs", {"x"}, std::nullopt, 1}, out, err), cli::kConfigError);
    EXPECT_EQ(cli::sweep({config_file("scenario1.json"), "concurrent_jobs", {"0"}, std::nullopt, 1}, out, err), cli::kConfigError);
}

TEST(CliBinary, ExitCodes) {
    const auto dir = scratch("binary");
    EXPECT_EQ(shell("validate --config " + config_file("scenario2.json").string()), 0);
    EXPECT_EQ(shell("run --config /nonexistent.json"), 2);
    EXPECT_EQ(shell("run --bogus"), 2);
    EXPECT_EQ(shell("sweep --config " + config_file("scenario1.json").string() + " --axis nope --values 1 --out " + dir.string()), 2);
    std::ofstream(dir / "blocker") << "x";
    EXPECT_EQ(shell("run --config " + config_file("fig1_dag.json").string() + " --out " + (dir / "blocker" / "x").string()), 3);
    EXPECT_EQ(shell("run --config " + config_file("fig1_dag.json").string() + " --out " + (dir / "ok").string()), 0);
    EXPECT_TRUE(fs::exists(dir / "ok" / "summary.json"));
    fs::remove_all(dir);
}
