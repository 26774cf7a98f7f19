// Copyright 2026 The fisherdpi Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <json.hpp>

namespace {

using Json = nlohmann::json;
namespace fs = std::filesystem;

struct Run {
  int exit_code = -1;
  std::string out;
  std::string err;
  std::vector<std::string> lines() const {
    std::vector<std::string> v;
    std::istringstream in(out);
    for (std::string line; std::getline(in, line);) v.push_back(line);
    return v;
  }
  Json last() const { return Json::parse(lines().back()); }
};

fs::path scratch_dir() {
  static const fs::path dir = [] {
    auto p = fs::temp_directory_path() / ("fisherdpi_cli_" + std::to_string(::getpid()));
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

Run run(const std::string& args) {
  const auto err_path = scratch_dir() / "stderr.txt";
  const std::string cmd = std::string(FISHERDPI_CLI) + " " + args + " 2>" + err_path.string();
  Run r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  char buf[4096];
  for (std::size_t n; (n = std::fread(buf, 1, sizeof(buf), pipe)) > 0;) r.out.append(buf, n);
  const int status = ::pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream err(err_path);
  r.err.assign(std::istreambuf_iterator<char>(err), std::istreambuf_iterator<char>());
  return r;
}

std::string data(const std::string& name) { return std::string(FISHERDPI_DATA) + "/" + name; }

std::string write_scratch(const std::string& name, const std::string& text) {
  const auto p = scratch_dir() / name;
  std::ofstream(p) << text;
  return p.string();
}

// Removes the one field allowed to differ between identical invocations.
std::string without_runtime(const std::string& out) {
  std::string result;
  std::istringstream in(out);
  for (std::string line; std::getline(in, line);) {
    Json j = Json::parse(line);
    j.erase("runtime_ms");
    result += j.dump() + "\n";
  }
  return result;
}

void expect_single_error_line(const Run& r, const std::string& code) {
  EXPECT_EQ(r.err.rfind("error:" + code + ":", 0), 0u) << r.err;
  EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1) << r.err;
  EXPECT_TRUE(r.out.empty());
}

TEST(CliFisher, ExampleValues) {
  auto r = run("fisher --model " + data("base_model.json") + " --povm " + data("sigma_x_povm.json") + " --theta 0.3");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const Json j = r.last();
  EXPECT_EQ(j["command"], "fisher");
  EXPECT_NEAR(j["value"].get<double>(), 4.0, 1e-8);
  EXPECT_EQ(j["inputs"]["theta"].get<double>(), 0.3);
  EXPECT_TRUE(j.contains("tolerances"));
  EXPECT_TRUE(j.contains("runtime_ms"));

  r = run("fisher --model " + data("base_model.json") + " --povm " + data("sigma_z_povm.json") + " --theta 0.3");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_NEAR(r.last()["value"].get<double>(), 0.0, 1e-10);
}

TEST(CliFisher, DimensionMismatchExitsThree) {
  const auto r = run("fisher --model " + data("base_model.json") + " --povm " + data("qutrit_povm.json") + " --theta 0.3");
  EXPECT_EQ(r.exit_code, 3);
  expect_single_error_line(r, "DimensionMismatch");
}

TEST(CliFisher, ParseErrorsExitTwo) {
  auto r = run("fisher --model " + data("missing.json") + " --povm " + data("sigma_x_povm.json") + " --theta 0");
  EXPECT_EQ(r.exit_code, 2);
  expect_single_error_line(r, "ParseError");

  const auto broken = write_scratch("broken.json", "{\"dim\": 2,\n  \"kind\": \"unitary\",\n  \"generator\": [[\n");
  r = run("fisher --model " + broken + " --povm " + data("sigma_x_povm.json") + " --theta 0");
  EXPECT_EQ(r.exit_code, 2);
  expect_single_error_line(r, "ParseError");
  EXPECT_NE(r.err.find("line"), std::string::npos);

  const auto no_state = write_scratch(
      "no_state.json", R"({"dim": 2, "kind": "unitary", "generator": [[[1,0],[0,0]],[[0,0],[-1,0]]]})");
  r = run("fisher --model " + no_state + " --povm " + data("sigma_x_povm.json") + " --theta 0");
  EXPECT_EQ(r.exit_code, 2);
  expect_single_error_line(r, "ParseError");
  EXPECT_NE(r.err.find("initial_state"), std::string::npos);

  r = run("fisher --model " + data("base_model.json"));
  EXPECT_EQ(r.exit_code, 2);
  expect_single_error_line(r, "ParseError");

  r = run("frobnicate");
  EXPECT_EQ(r.exit_code, 2);
  expect_single_error_line(r, "ParseError");
}

TEST(CliFisher, InvalidPhysicsExitsTwo) {
  const auto unnormalized = write_scratch(
      "unnormalized.json",
      R"({"dim": 2, "kind": "unitary", "generator": [[[1,0],[0,0]],[[0,0],[-1,0]]], "initial_state": [[1,0],[1,0]]})");
  const auto r = run("fisher --model " + unnormalized + " --povm " + data("sigma_x_povm.json") + " --theta 0");
  EXPECT_EQ(r.exit_code, 2);
  expect_single_error_line(r, "NotNormalized");
}

TEST(CliQfi, BaseAndDephasedModels) {
  auto r = run("qfi --model " + data("base_model.json") + " --theta 0.4");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_NEAR(r.last()["values"]["qfi"].get<double>(), 4.0, 1e-8);
  EXPECT_NEAR(r.last()["values"]["achieved_by_sld_povm"].get<double>(), 4.0, 1e-7);
  r = run("qfi --model " + data("dephasing_model.json") + " --theta 0.4");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_NEAR(r.last()["values"]["qfi"].get<double>(), 2.56, 1e-9);
}

TEST(CliBayes, UninformativeMeasurementGivesPriorVariance) {
  const auto r = run("bayes --model " + data("base_model.json") + " --povm " + data("sigma_z_povm.json") +
                     " --prior uniform:0,1");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const Json v = r.last()["values"];
  EXPECT_NEAR(v["risk"].get<double>(), 1.0 / 12.0, 1e-6);
  EXPECT_NEAR(v["risk_direct"].get<double>(), v["risk"].get<double>(), 1e-10);
  EXPECT_TRUE(v["bcrb"]["vacuous"].get<bool>());
}

TEST(CliBayes, GaussianPriorReportsBothBounds) {
  const auto r = run("bayes --model " + data("base_model.json") + " --povm " + data("sigma_x_povm.json") +
                     " --prior gauss:0.8,0.1,0.1,1.5 --grid 301");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const Json b = r.last()["values"]["bcrb"];
  EXPECT_NEAR(b["j"].get<double>(), 4.0, 1e-8);
  EXPECT_TRUE(b["van_trees_satisfied"].get<bool>());
}

TEST(CliBayes, BadPriorExitsTwo) {
  const auto r = run("bayes --model " + data("base_model.json") + " --povm " + data("sigma_x_povm.json") +
                     " --prior cauchy:0,1");
  EXPECT_EQ(r.exit_code, 2);
  expect_single_error_line(r, "ParseError");
}

TEST(CliOptimize, UnrestrictedAndPinned) {
  auto r = run("optimize --model " + data("base_model.json") + " --theta 0.4 --restarts 8 --seed 3");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  Json j = r.last();
  EXPECT_NEAR(j["values"]["fisher"].get<double>(), 4.0, 1e-6);
  EXPECT_EQ(j["seed"], 3);
  EXPECT_TRUE(j["context"].contains("state"));
  EXPECT_TRUE(j["context"].contains("povm"));

  r = run("optimize --model " + data("base_model.json") + " --theta 0.4 --restarts 4 --fix-state --fix-povm " +
          data("sigma_z_povm.json"));
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_NEAR(r.last()["values"]["fisher"].get<double>(), 0.0, 1e-10);

  r = run("optimize --model " + data("rotated_model.json") + " --theta 0.4 --restarts 4 --fix-state --fix-povm " +
          data("sigma_z_povm.json"));
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_NEAR(r.last()["values"]["fisher"].get<double>(), 4.0, 1e-8);

  r = run("optimize --model " + data("base_model.json") + " --restarts 4 --prior uniform:0,1.5 --grid 31");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_NEAR(r.last()["values"]["bayesian_information"].get<double>(), 4.0, 1e-6);
}

TEST(CliOptimize, DeterministicOutput) {
  const std::string args = "optimize --model " + data("base_model.json") + " --theta 1.1 --restarts 6 --seed 42";
  const auto a = run(args), b = run(args);
  ASSERT_EQ(a.exit_code, 0);
  ASSERT_EQ(b.exit_code, 0);
  EXPECT_EQ(without_runtime(a.out), without_runtime(b.out));
}

TEST(CliDpi, ClassicalSuiteEmitsTrialLinesAndSummary) {
  const auto r = run("dpi --mode classical --trials 40 --dim 0 --seed 7");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const auto lines = r.lines();
  ASSERT_EQ(lines.size(), 41u);
  for (std::size_t i = 0; i < 40; ++i) {
    const Json t = Json::parse(lines[i]);
    EXPECT_EQ(t["index"], i);
    EXPECT_FALSE(t["violated"].get<bool>());
  }
  const Json s = r.last();
  EXPECT_EQ(s["command"], "dpi");
  EXPECT_EQ(s["summary"]["violations"], 0);
  EXPECT_EQ(s["seed"], 7);
}

TEST(CliDpi, QuantumSuiteIsDeterministic) {
  const std::string args = "dpi --mode quantum --trials 4 --dim 2 --kraus 2 --seed 11 --restarts 8";
  const auto a = run(args), b = run(args);
  ASSERT_EQ(a.exit_code, 0) << a.err;
  EXPECT_EQ(a.last()["summary"]["violations"], 0);
  EXPECT_EQ(without_runtime(a.out), without_runtime(b.out));
}

TEST(CliDpi, RejectsBadArguments) {
  auto r = run("dpi --mode sideways");
  EXPECT_EQ(r.exit_code, 2);
  expect_single_error_line(r, "ParseError");
  r = run("dpi --mode quantum --trials 1 --dim 7");
  EXPECT_EQ(r.exit_code, 2);
  expect_single_error_line(r, "InvalidArgument");
}

TEST(CliWorkedExample, FourValues) {
  const auto r = run("paper-example --theta 0.4");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const Json v = r.last()["values"];
  EXPECT_NEAR(v["base"].get<double>(), 4.0, 1e-8);
  EXPECT_NEAR(v["multipass"].get<double>(), 16.0, 1e-8);
  EXPECT_NEAR(v["restricted"].get<double>(), 0.0, 1e-10);
  EXPECT_NEAR(v["restricted_plus_rotation"].get<double>(), 4.0, 1e-8);
}

}  // namespace
