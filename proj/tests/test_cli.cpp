// Copyright 2026 The lsmix Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "lsmix/mixture.hpp"
#include "lsmix/text_io.hpp"

namespace lsmix {
namespace {

namespace fs = std::filesystem;

struct Invocation {
  int code;
  std::string out, err;
};

Invocation run(std::vector<std::string> args) {
  args.insert(args.begin(), "lsmix");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("lsmix_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  fs::path dir_;
};

TEST_F(CliTest, VersionAndHelp) {
  const Invocation v = run({"--version"});
  EXPECT_EQ(v.code, cli::kOk);
  EXPECT_NE(v.out.find("lsmix"), std::string::npos);
  EXPECT_EQ(run({"--help"}).code, cli::kOk);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run({}).code, cli::kUsage);
  EXPECT_EQ(run({"frobnicate"}).code, cli::kUsage);
  EXPECT_EQ(run({"fit", "--method", "kmeans", "--k", "2", "--input", "x.csv"}).code, cli::kUsage);
  EXPECT_EQ(run({"fit", "--method", "mwde", "--input", "x.csv"}).code, cli::kUsage);
}

TEST_F(CliTest, MissingFileIsDataError) {
  const Invocation r = run({"fit", "--method", "mwde", "--k", "2", "--input", path("missing.csv")});
  EXPECT_EQ(r.code, cli::kDataError);
  EXPECT_NE(r.err.find("missing.csv"), std::string::npos);
  EXPECT_EQ(run({"simulate", "--config", path("missing.json"), "--out", path("o")}).code, cli::kDataError);
}

TEST_F(CliTest, EvalAriIdentical) {
  write_file(path("a.csv"), "1\n1\n2\n2\n3\n");
  const Invocation r = run({"eval", "--metric", "ari", "--labels-a", path("a.csv"), "--labels-b", path("a.csv")});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  std::istringstream lines(r.out);
  std::string header, row;
  std::getline(lines, header);
  std::getline(lines, row);
  EXPECT_EQ(header, "metric,value,config_hash");
  EXPECT_EQ(row.substr(0, 8), "ari,1.0,");
}

TEST_F(CliTest, EvalL2AndOverlap) {
  MixtureModel m{Family::normal(), MixingDistribution({0.5, 0.5}, {0.0, 3.2897}, {1.0, 1.0})};
  write_file(path("g.json"), m.to_json());
  const Invocation l2 = run({"eval", "--metric", "l2", "--g1", path("g.json"), "--g2", path("g.json")});
  ASSERT_EQ(l2.code, cli::kOk) << l2.err;
  EXPECT_NE(l2.out.find("\nl2,0"), std::string::npos) << l2.out;
  const Invocation ov = run({"eval", "--metric", "overlap", "--g1", path("g.json")});
  ASSERT_EQ(ov.code, cli::kOk) << ov.err;
  const std::size_t at = ov.out.find("overlap_1_2,");
  ASSERT_NE(at, std::string::npos) << ov.out;
  EXPECT_NEAR(std::stod(ov.out.substr(at + 12)), 0.1, 1e-3);
  EXPECT_NE(ov.out.find("mean_omega,"), std::string::npos);
}

TEST_F(CliTest, FitIsDeterministic) {
  std::string data;
  for (double x : sample(MixingDistribution({0.5, 0.5}, {0.0, 5.0}, {1.0, 1.0}), Family::normal(), 200, 1)) {
    data += format_double(x) + "\n";
  }
  write_file(path("x.csv"), data);
  for (const char* method : {"mwde", "pmle"}) {
    const std::vector<std::string> args{"fit", "--method", method, "--k", "2", "--starts", "3", "--seed", "4",
                                        "--input", path("x.csv")};
    std::vector<std::string> a1 = args, a2 = args;
    a1.insert(a1.end(), {"--out", path("fit1.json")});
    a2.insert(a2.end(), {"--out", path("fit2.json")});
    ASSERT_EQ(run(a1).code, cli::kOk);
    ASSERT_EQ(run(a2).code, cli::kOk);
    EXPECT_EQ(read_file(path("fit1.json")), read_file(path("fit2.json")));
    EXPECT_TRUE(fs::exists(path("fit1.json.manifest.json")));
  }
}

TEST_F(CliTest, BadDataIsDataError) {
  write_file(path("x.csv"), "1.0\nbanana\n");
  EXPECT_EQ(run({"fit", "--method", "pmle", "--k", "1", "--input", path("x.csv")}).code, cli::kDataError);
  write_file(path("c.json"), R"({"scenario": {"kind": "table1", "row": "I"}, "sample_sizes": []})");
  EXPECT_EQ(run({"simulate", "--config", path("c.json"), "--out", path("o")}).code, cli::kDataError);
}

TEST_F(CliTest, SimulateWritesOutputs) {
  write_file(path("c.json"),
             R"({"scenario": {"kind": "two_component", "p": 0.5, "a": 1, "b": 4}, "sample_sizes": [40],
                 "replications": 2, "master_seed": 1, "starts": 1})");
  ASSERT_EQ(run({"simulate", "--config", path("c.json"), "--out", path("o"), "--threads", "1"}).code, cli::kOk);
  for (const char* f : {"results.csv", "summary.json", "timings.csv", "manifest.json"}) {
    EXPECT_TRUE(fs::exists(dir_ / "o" / f)) << f;
  }
}

}  // namespace
}  // namespace lsmix
