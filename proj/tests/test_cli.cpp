// Copyright 2026 The qiprune Authors
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

// End-to-end runs of the qiprune binary.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include <gtest/gtest.h>

#include "qiprune/io.hpp"

namespace qiprune {
namespace {

namespace fs = std::filesystem;

// small shapes keep each run well under a second
const std::string kFast = " --depth 2 --epochs 1 --ensemble-size 8";

fs::path scratch(const std::string &name) {
    const fs::path p = fs::path(::testing::TempDir()) / ("qiprune_cli_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

int cli(const std::string &args, const fs::path &log) {
    const std::string cmd = std::string("\"") + QIPRUNE_CLI_PATH + "\" " + args + " > \"" + log.string() + "\" 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

TEST(Cli, HelpAndUsageErrors) {
    const auto dir = scratch("usage");
    EXPECT_EQ(cli("--help", dir / "log"), 0);
    EXPECT_EQ(cli("", dir / "log"), 2);
    EXPECT_EQ(cli("prune --task cifar", dir / "log"), 2);
    EXPECT_EQ(cli("prune --task bas --delta 2" + kFast, dir / "log"), 2);
    EXPECT_EQ(cli("prune --task mnist49 --data-dir " + (dir / "missing").string() + kFast, dir / "log"), 2);
    EXPECT_NE(slurp(dir / "log").find("error"), std::string::npos);
}

TEST(Cli, VerifyPassesAndWritesReport) {
    const auto dir = scratch("verify");
    EXPECT_EQ(cli("verify --out " + dir.string(), dir / "log"), 0);
    const auto doc = read_json_file((dir / "verify.json").string());
    EXPECT_TRUE(doc.at("passed").get<bool>());
    EXPECT_GT(doc.at("checks").size(), 64u);
}

TEST(Cli, CorruptedTableFailsVerify) {
    const auto dir = scratch("corrupt");
    auto rows = published_table_rows();
    rows[3].rhs_raw = 9.0;
    write_json_file((dir / "table.json").string(), table_rows_to_json(rows));
    EXPECT_EQ(cli("verify --table " + (dir / "table.json").string() + " --out " + dir.string(), dir / "log"), 1);
    ASSERT_TRUE(fs::exists(dir / "verify.json"));
    EXPECT_FALSE(read_json_file((dir / "verify.json").string()).at("passed").get<bool>());
    EXPECT_NE(slurp(dir / "log").find("FAIL table.rhs[mnist49 delta=0.01 sigma=0.01]"), std::string::npos);
}

TEST(Cli, PruneWritesJsonAndCsv) {
    const auto dir = scratch("prune");
    EXPECT_EQ(cli("prune --task bas --delta 0.02 --sigma 0.006 --seed 1 --out " + dir.string() + kFast, dir / "log"), 0);
    const auto j = read_json_file((dir / "bas_d0.02_s0.006_seed1.json").string());
    EXPECT_EQ(j.at("dataset"), "bas");
    for (const char *k : {"Acc_base", "Acc_pruned", "Acc_drop", "Replace(%)", "RHS_raw", "RHS_clip", "dq_max(repl.)"}) {
        EXPECT_TRUE(j.at("table").contains(k)) << k;
    }
    EXPECT_EQ(j.at("provenance").at("seed"), 1);
    EXPECT_EQ(j.at("provenance").at("config_hash").get<std::string>().size(), 16u);
    EXPECT_TRUE(j.at("certificate").at("passed").get<bool>());
    const auto csv = slurp(dir / "bas_d0.02_s0.006_seed1.csv");
    EXPECT_EQ(csv.substr(0, csv.find('\n') + 1), csv_header());
}

TEST(Cli, ZeroSigmaReplacesEightyPercent) {
    const auto dir = scratch("sigma0");
    EXPECT_EQ(cli("prune --task bas --sigma 0 --out " + dir.string() + kFast, dir / "log"), 0);
    const auto j = read_json_file((dir / "bas_d0.01_s0_seed0.json").string());
    EXPECT_EQ(j.at("table").at("Replace(%)").get<double>(), 80.0);
    EXPECT_LT(j.at("certificate").at("max_trace_distance").get<double>(), 1e-14);
}

TEST(Cli, TfimUsesEnergyColumns) {
    const auto dir = scratch("tfim");
    EXPECT_EQ(cli("prune --task tfim --vqe-iters 5 --out " + dir.string() + kFast, dir / "log"), 0);
    const auto j = read_json_file((dir / "tfim_d0.01_s0.001_seed0.json").string());
    EXPECT_TRUE(j.at("table").contains("E_drop"));
}

TEST(Cli, SweepIsDeterministicAndFeedsReport) {
    const auto a = scratch("sweep_a"), b = scratch("sweep_b");
    const std::string grid = " --task bas --deltas 0.01,0.02 --sigmas 0.001,0.003,0.006,0.01" + kFast;
    EXPECT_EQ(cli("sweep" + grid + " --out " + a.string(), a / "log"), 0);
    EXPECT_EQ(cli("sweep" + grid + " --out " + b.string(), b / "log"), 0);
    const auto csv = slurp(a / "sweep_bas_seed0.csv");
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 9);
    EXPECT_EQ(csv, slurp(b / "sweep_bas_seed0.csv"));
    // point documents differ only in the recorded output directory
    auto ja = read_json_file((a / "bas_d0.02_s0.003_seed0.json").string());
    auto jb = read_json_file((b / "bas_d0.02_s0.003_seed0.json").string());
    ja["provenance"]["config"].erase("output_dir");
    jb["provenance"]["config"].erase("output_dir");
    EXPECT_EQ(ja.dump(), jb.dump());

    const auto out = scratch("report");
    EXPECT_EQ(cli("report " + (a / "sweep_bas_seed0.csv").string() + " --out " + out.string(), out / "log"), 0);
    for (const char *p : {"panel_replace_pct.csv", "panel_metric_drop.csv", "panel_dq_max_repl.csv"}) {
        ASSERT_TRUE(fs::exists(out / p)) << p;
        const auto text = slurp(out / p);
        EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 9) << p;
    }
    EXPECT_EQ(cli("report " + (out / "log").string() + " --out " + out.string(), out / "log2"), 2);
}

TEST(Cli, ConfigFileAndFlagPrecedence) {
    const auto dir = scratch("config");
    write_json_file((dir / "cfg.json").string(), json{{"task", "bas"}, {"sigma", 0.003}, {"depth", 2}, {"M", 8}, {"epochs", 1}});
    EXPECT_EQ(cli("prune --config " + (dir / "cfg.json").string() + " --out " + dir.string(), dir / "log"), 0);
    EXPECT_TRUE(fs::exists(dir / "bas_d0.01_s0.003_seed0.json"));
    // an explicit flag beats the file
    EXPECT_EQ(cli("prune --config " + (dir / "cfg.json").string() + " --sigma 0.01 --out " + dir.string(), dir / "log"), 0);
    const auto j = read_json_file((dir / "bas_d0.01_s0.01_seed0.json").string());
    EXPECT_EQ(j.at("provenance").at("config").at("depth"), 2);

    write_json_file((dir / "bad.json").string(), json{{"colour", "red"}});
    EXPECT_EQ(cli("prune --config " + (dir / "bad.json").string(), dir / "log"), 2);
}

TEST(Cli, DatasetGenerateAndInspect) {
    const auto dir = scratch("dataset");
    EXPECT_EQ(cli("dataset generate --task bas " + (dir / "bas.json").string(), dir / "log"), 0);
    EXPECT_EQ(cli("dataset inspect " + (dir / "bas.json").string(), dir / "log"), 0);
    EXPECT_NE(slurp(dir / "log").find("samples=28 positive=14"), std::string::npos);
    EXPECT_EQ(cli("dataset generate --task tfim " + (dir / "t.json").string(), dir / "log"), 2);
}

} // namespace
} // namespace qiprune
