// Copyright 2026 The qconv Authors
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

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "gtest/gtest.h"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        const auto *info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir_ = fs::temp_directory_path() /
               ("qconv-cli-" + std::to_string(::getpid()) + "-" + info->name());
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    int run(const std::string &args) {
        const std::string cmd = std::string("\"") + QCONV_CLI + "\" --out \"" + dir_.string() +
                                "\" " + args + " > \"" + (dir_ / "stdout.txt").string() +
                                "\" 2> \"" + (dir_ / "stderr.txt").string() + "\"";
        const int status = std::system(cmd.c_str());
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }

    std::string slurp(const std::string &name) const {
        std::ifstream in(dir_ / name, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    std::vector<std::string> lines(const std::string &name) const {
        std::vector<std::string> out;
        std::stringstream ss(slurp(name));
        for (std::string line; std::getline(ss, line);) {
            out.push_back(line);
        }
        return out;
    }

    std::string path(const std::string &name) const { return (dir_ / name).string(); }

    fs::path dir_;
};

} // namespace

TEST_F(Cli, frqi_resources_csv) {
    ASSERT_EQ(run("frqi resources --n 2,4,8"), 0);
    const auto rows = lines("resources.csv");
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_EQ(rows[0], "n,angles,qubits,gates");
    EXPECT_EQ(rows[1].substr(0, 6), "2,8,4,");
    EXPECT_EQ(rows[2].substr(0, 7), "4,64,7,");
    EXPECT_EQ(rows[3].substr(0, 9), "8,512,10,");
    EXPECT_TRUE(fs::exists(dir_ / "resources.manifest.json"));
}

TEST_F(Cli, frqi_encode_two_by_two_image) {
    const std::vector<double> theta = {0.1, 0.7, 1.2, 1.5};
    std::ofstream(path("block.json")) << json{{"angles", theta}}.dump();
    ASSERT_EQ(run("frqi encode -i " + path("block.json")), 0);
    const json doc = json::parse(slurp("amplitudes.json"));
    ASSERT_EQ(doc["qubits"], 3);
    const auto &amps = doc["amplitudes"];
    for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_NEAR(amps[i][0].get<double>(), 0.5 * std::cos(theta[i]), 1e-10);
        EXPECT_NEAR(amps[4 + i][0].get<double>(), 0.5 * std::sin(theta[i]), 1e-10);
        EXPECT_NEAR(amps[i][1].get<double>(), 0.0, 1e-15);
    }
}

TEST_F(Cli, frqi_encode_zero_block) {
    std::ofstream(path("block.json")) << R"({"values":[0,0,0,0,0,0,0,0]})";
    ASSERT_EQ(run("frqi encode -i " + path("block.json")), 0);
    const json doc = json::parse(slurp("amplitudes.json"));
    const auto &amps = doc["amplitudes"];
    ASSERT_EQ(amps.size(), 16u);
    for (std::size_t i = 0; i < 16; ++i) {
        EXPECT_NEAR(amps[i][0].get<double>(), i < 8 ? 1.0 / std::sqrt(8.0) : 0.0, 1e-12);
    }
}

TEST_F(Cli, seed_is_mandatory) {
    EXPECT_NE(run("voxel gen -C 1 -N 4"), 0);
    const json err = json::parse(slurp("stderr.txt"));
    EXPECT_EQ(err["error"], "invalid-parameter");
    EXPECT_FALSE(fs::exists(dir_ / "grid.voxg"));
}

TEST_F(Cli, format_error_reports_offset) {
    std::ofstream(path("bad.voxg"), std::ios::binary) << "VOXX\x01";
    EXPECT_EQ(run("voxel info -i " + path("bad.voxg")), 2);
    const json err = json::parse(slurp("stderr.txt"));
    EXPECT_EQ(err["error"], "format-error");
    EXPECT_TRUE(err.contains("offset"));
}

TEST_F(Cli, voxel_pipeline_and_info) {
    ASSERT_EQ(run("--seed 3 voxel gen -C 2 -N 8 --kind sparse-atoms -o g.voxg"), 0);
    ASSERT_EQ(run("voxel blur -i " + path("g.voxg") + " --sigma 1 -o b.voxg"), 0);
    ASSERT_EQ(run("voxel info -i " + path("b.voxg")), 0);
    const json info = json::parse(slurp("stdout.txt"));
    EXPECT_EQ(info["channels"], 2);
    EXPECT_EQ(info["side"], 8);
}

TEST_F(Cli, qconv_run_and_replay) {
    ASSERT_EQ(run("--seed 3 voxel gen -C 1 -N 8 -o g.voxg"), 0);
    ASSERT_EQ(run("--seed 4 --jobs 2 qconv run -i " + path("g.voxg") + " --gates 40"), 0);
    const json sidecar = json::parse(slurp("features.json"));
    EXPECT_EQ(sidecar["qubits"], 7);
    ASSERT_EQ(run("replay " + path("features.manifest.json")), 0);
    const json report = json::parse(slurp("stdout.txt"));
    EXPECT_TRUE(report["identical"].get<bool>());
}

TEST_F(Cli, noise_run_outputs) {
    ASSERT_EQ(run("--seed 2 noise run --qubits 3 --gates 20 --p 0.01,0.03"), 0);
    EXPECT_EQ(lines("noise.csv").size(), 1u + 3u * 2u * 8u);
    EXPECT_EQ(lines("noise_summary.csv").size(), 1u + 3u * 2u);
}

TEST_F(Cli, drer_zero_noise_has_zero_error) {
    ASSERT_EQ(run("--seed 5 drer gen --p 0 --samples 6 --qubits 3 --gates 40"), 0);
    ASSERT_EQ(run("drer eval --test " + path("dataset.jsonl")), 0);
    const auto rows = lines("score.csv");
    ASSERT_EQ(rows.size(), 2u);
    std::stringstream ss(rows[1]);
    std::string channel, p, alpha, mse_noisy;
    std::getline(ss, channel, ',');
    std::getline(ss, p, ',');
    std::getline(ss, alpha, ',');
    std::getline(ss, mse_noisy, ',');
    EXPECT_LE(std::stod(mse_noisy), 1e-12);
}

TEST_F(Cli, drer_fit_with_sweep) {
    ASSERT_EQ(run("--seed 5 drer gen --p 0.01 --samples 30 --qubits 3 --gates 40 -o tr.jsonl"),
              0);
    ASSERT_EQ(run("--seed 6 drer gen --p 0.01 --samples 10 --qubits 3 --gates 40 -o va.jsonl"),
              0);
    ASSERT_EQ(run("drer fit --train " + path("tr.jsonl") + " --validation " + path("va.jsonl")),
              0);
    EXPECT_EQ(lines("model_sweep.csv").size(), 6u);
    ASSERT_EQ(run("drer eval --test " + path("va.jsonl") + " --model " + path("model.json")), 0);
    EXPECT_EQ(lines("score.csv").size(), 2u);
}

TEST_F(Cli, drer_table_is_deterministic) {
    const std::string args =
        "--seed 8 drer table --channels all --p 0.03,0.01,0.008,0.005,0.003,0.001 --train 12 "
        "--validation 6 --test 6 --qubits 3 --gates 30";
    ASSERT_EQ(run(args), 0);
    const std::string first = slurp("table.csv");
    EXPECT_EQ(lines("table.csv").size(), 19u);
    ASSERT_EQ(run(args + " --jobs 3"), 0);
    EXPECT_EQ(slurp("table.csv"), first);
}
