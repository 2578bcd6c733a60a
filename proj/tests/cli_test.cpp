// Copyright 2026 The wcorr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <string>

#include "wcorr/io.hpp"

namespace {

const std::string kCli = WCORR_CLI;
const std::filesystem::path kFixtures = WCORR_FIXTURES;

struct Result {
    int exit_code;
    std::string out;
};

Result invoke(const std::string &args) {
    std::string cmd = "\"" + kCli + "\" " + args + " 2>/dev/null";
    FILE *pipe = popen(cmd.c_str(), "r");
    if (!pipe) {
        return {-1, {}};
    }
    std::string out;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) {
        out.append(buf, n);
    }
    int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string fx(const std::string &name) { return "\"" + (kFixtures / name).string() + "\""; }

wcorr::Json run_json(const std::string &args) {
    auto r = invoke(args);
    EXPECT_EQ(r.exit_code, 0) << args;
    return wcorr::Json::parse(r.out);
}

std::size_t count_lines(const std::string &s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST(CliTables, ThreeQubitsMatchGolden) {
    auto r = invoke("tables 3");
    ASSERT_EQ(r.exit_code, 0);
    EXPECT_EQ(r.out, wcorr::read_file(kFixtures / "golden" / "tables_3.txt"));
}

TEST(CliTables, SingleQubitLinesCoincide) {
    auto r = invoke("tables 1");
    ASSERT_EQ(r.exit_code, 0);
    EXPECT_NE(r.out.find("line,1,2\n"), std::string::npos);
    EXPECT_NE(r.out.find("A1i,|0><0|,|1><1|\nA2i,|0><0|,|1><1|\n"), std::string::npos);
}

TEST(CliTables, TwoQubitsReconstruct) {
    auto r = invoke("tables 2");
    ASSERT_EQ(r.exit_code, 0);
    EXPECT_NE(r.out.find("line,1,2,3,4\n"), std::string::npos);
    EXPECT_NE(r.out.find("A3i,"), std::string::npos);
    EXPECT_EQ(r.out.find("A4i,"), std::string::npos);
    EXPECT_NE(r.out.find("reconstruction,OK,OK,OK,OK\n"), std::string::npos);
}

TEST(CliRun, GhzAnalytic) {
    auto doc = run_json("run --state " + fx("ghz.json") + " --config " + fx("analytic.json"));
    EXPECT_NEAR(doc["C"].get<double>(), 1.5, 1e-10);
    EXPECT_EQ(doc["skipped_k"], wcorr::Json::parse("[2, 3, 5, 8]"));
    EXPECT_NEAR(doc["oracle_diag"].get<double>(), 1.5, 1e-10);
    ASSERT_EQ(doc["postselections"].size(), 8u);
    EXPECT_TRUE(doc["postselections"][1]["weak_values"].is_null());
    EXPECT_EQ(doc["postselections"][0]["weak_values"]["A4"].size(), 8u);
}

TEST(CliRun, ProductStateIsUncorrelated) {
    auto doc = run_json("run --state " + fx("product.json"));
    EXPECT_LT(std::abs(doc["C"].get<double>()), 1e-10);
    EXPECT_TRUE(doc["skipped_k"].empty());
    auto circuit = run_json("run --state " + fx("product.json") + " --config " + fx("circuit.json"));
    EXPECT_LE(std::abs(circuit["C"].get<double>()), 1e-8);
}

TEST(CliRun, FlagsOverrideConfig) {
    auto doc = run_json("run --state " + fx("ghz.json") + " --config " + fx("analytic.json") +
                        " --backend circuit --mode literal --g 2e-3 --sigma 0.9");
    EXPECT_EQ(doc["backend"], "circuit");
    EXPECT_EQ(doc["mode"], "literal");
    EXPECT_DOUBLE_EQ(doc["g"].get<double>(), 2e-3);
    EXPECT_NEAR(doc["C"].get<double>(), 1.5, 1e-10);
}

TEST(CliRun, EnumerateListsEveryBranch) {
    auto doc = run_json("run --state " + fx("ghz.json") + " --config " + fx("enumerate.json"));
    ASSERT_EQ(doc["outcome_branches"].size(), 4u);
    EXPECT_NEAR(doc["branch_probability_total"].get<double>(), 1.0, 1e-12);
    for (const auto &b : doc["outcome_branches"]) {
        EXPECT_NEAR(b["C"].get<double>(), 1.5, 1e-10);
    }
}

TEST(CliRun, CsvFormat) {
    auto r = invoke("run --state " + fx("ghz.json") + " --format csv");
    ASSERT_EQ(r.exit_code, 0);
    EXPECT_EQ(r.out.rfind("k,label,P,skipped,term\n", 0), 0u);
    EXPECT_NE(r.out.find("2,++-,0.00000000000e+00,true,0.00000000000e+00\n"), std::string::npos);
    EXPECT_NE(r.out.find("C,1.50000000000e+00\n"), std::string::npos);
}

TEST(CliRun, ByteStable) {
    auto dir = std::filesystem::temp_directory_path() / "wcorr_cli_test";
    std::filesystem::create_directories(dir);
    for (const char *backend : {"analytic", "circuit"}) {
        auto a = dir / "a.json", b = dir / "b.json";
        std::string common = std::string("run --seed 7 --backend ") + backend + " --out ";
        ASSERT_EQ(invoke(common + "\"" + a.string() + "\"").exit_code, 0);
        ASSERT_EQ(invoke(common + "\"" + b.string() + "\"").exit_code, 0);
        EXPECT_EQ(wcorr::read_file(a), wcorr::read_file(b)) << backend;
    }
    std::filesystem::remove_all(dir);
}

TEST(CliRun, RandomStateDependsOnSeed) {
    auto a = invoke("run --seed 1").out;
    auto b = invoke("run --seed 2").out;
    EXPECT_NE(a, b);
}

TEST(CliSweep, RowsAndColumns) {
    auto r = invoke("sweep --state " + fx("ghz.json") + " --g-list 1e-2,5e-3,2.5e-3");
    ASSERT_EQ(r.exit_code, 0);
    EXPECT_EQ(r.out.rfind("g,C_circuit,abs_error,max_wv_residual,error_ratio\n", 0), 0u);
    EXPECT_EQ(count_lines(r.out), 4u);
    auto j = run_json("sweep --state " + fx("product.json") + " --g-list 1e-4 --format json");
    EXPECT_LE(std::abs(j["sweep"][0]["C_circuit"].get<double>()), 1e-8);
    EXPECT_TRUE(j["sweep"][0]["error_ratio"].is_null());
}

TEST(CliOracle, Reports) {
    auto ghz = run_json("oracle --state " + fx("ghz.json"));
    EXPECT_LE(ghz["max_residual"].get<double>(), 1e-10);
    EXPECT_EQ(ghz["elements"].size(), 64u);
    EXPECT_NEAR(ghz["trace_distance_to_product_of_marginals"].get<double>(), 0.875, 1e-10);
    auto mixed = run_json("oracle --state " + fx("mixed.json"));
    EXPECT_EQ(mixed["oracle_diag"].get<double>(), 0.0);
    auto random = run_json("oracle --seed 7");
    EXPECT_LE(random["max_residual"].get<double>(), 1e-10);
}

TEST(CliExitCodes, InputErrorsAreTwo) {
    EXPECT_EQ(invoke("").exit_code, 2);
    EXPECT_EQ(invoke("frobnicate").exit_code, 2);
    EXPECT_EQ(invoke("run --state " + fx("broken.json")).exit_code, 2);
    EXPECT_EQ(invoke("run --state /nonexistent/state.json").exit_code, 2);
    EXPECT_EQ(invoke("run --backend quantum").exit_code, 2);
    EXPECT_EQ(invoke("run --format xml").exit_code, 2);
    EXPECT_EQ(invoke("sweep --state " + fx("ghz.json")).exit_code, 2);
    EXPECT_EQ(invoke("sweep --state " + fx("ghz.json") + " --g-list 1e-3,1e-2").exit_code, 2);
    EXPECT_EQ(invoke("sweep --state " + fx("ghz.json") + " --g-list 1e-3,-1e-4").exit_code, 2);
    EXPECT_EQ(invoke("tables 0").exit_code, 2);
}

TEST(CliExitCodes, InvariantViolationsAreThree) {
    EXPECT_EQ(invoke("run --state " + fx("nonhermitian.json")).exit_code, 3);
    EXPECT_EQ(invoke("run --state " + fx("bad_weights.json")).exit_code, 3);
    EXPECT_EQ(invoke("run --g 0").exit_code, 3);
    EXPECT_EQ(invoke("run --sigma -1").exit_code, 3);
}

TEST(CliExitCodes, ViolatedInvariantIsNamed) {
    std::string cmd = "\"" + kCli + "\" run --state " + fx("nonhermitian.json") + " 2>&1";
    FILE *pipe = popen(cmd.c_str(), "r");
    ASSERT_NE(pipe, nullptr);
    char buf[512] = {0};
    std::size_t n = fread(buf, 1, sizeof buf - 1, pipe);
    pclose(pipe);
    EXPECT_NE(std::string(buf, n).find("hermitian"), std::string::npos);
}
