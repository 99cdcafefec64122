// Copyright 2026 The UAST Harness Authors.
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

#include "uast/uast.h"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

std::string Config() { return std::string(UAST_DATA_DIR) + "/arducopter.cfg"; }

std::string Scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("uast_capi_" + name);
  fs::remove_all(dir);
  return dir.string();
}

std::string Slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CApi : public ::testing::Test {
 protected:
  void SetUp() override { ASSERT_EQ(uast_project_open(Config().c_str(), &p_), UAST_OK); }
  void TearDown() override { uast_project_close(p_); }
  uast_project* p_ = nullptr;
};

TEST(CApiErrors, MissingConfig) {
  uast_project* p = reinterpret_cast<uast_project*>(1);
  EXPECT_EQ(uast_project_open("/nonexistent/x.cfg", &p), UAST_E_IO);
  EXPECT_EQ(p, nullptr);
  EXPECT_NE(std::string(uast_last_error()).find("x.cfg"), std::string::npos);
  EXPECT_EQ(uast_project_open(nullptr, &p), UAST_E_INVALID_ARGUMENT);
  EXPECT_STREQ(uast_status_name(UAST_E_PARSE), "parse error");
}

TEST(CApiErrors, BadConfigIsParseError) {
  std::string dir = Scratch("badcfg");
  fs::create_directories(dir);
  std::ofstream(dir + "/bad.cfg") << "machine\n";
  uast_project* p = nullptr;
  EXPECT_EQ(uast_project_open((dir + "/bad.cfg").c_str(), &p), UAST_E_PARSE);
  EXPECT_EQ(p, nullptr);
}

TEST_F(CApi, Info) {
  size_t states = 0, actions = 0, constraints = 0;
  ASSERT_EQ(uast_project_info(p_, &states, &actions, &constraints), UAST_OK);
  EXPECT_EQ(states, 17u);
  EXPECT_EQ(actions, 23u);
  EXPECT_EQ(constraints, 28u);
  EXPECT_EQ(uast_project_info(p_, nullptr, nullptr, nullptr), UAST_OK);
}

TEST_F(CApi, EnvironmentStepping) {
  uast_env* env = nullptr;
  ASSERT_EQ(uast_env_create(p_, &env), UAST_OK);
  size_t needed = 0;
  ASSERT_EQ(uast_env_state(env, nullptr, 0, &needed), UAST_OK);
  EXPECT_EQ(needed, 5u);  // "Idle"
  char buf[64];
  char tiny[2];
  EXPECT_EQ(uast_env_state(env, tiny, sizeof(tiny), nullptr), UAST_E_INVALID_ARGUMENT);

  uast_step_result r;
  ASSERT_EQ(uast_env_step(env, "takeoff", &r), UAST_OK);
  EXPECT_FALSE(r.action_correct);
  ASSERT_EQ(uast_env_step(env, "armUAV", &r), UAST_OK);
  EXPECT_TRUE(r.action_correct);
  EXPECT_EQ(r.terminal, UAST_RUNNING);
  ASSERT_EQ(uast_env_state(env, buf, sizeof(buf), nullptr), UAST_OK);
  EXPECT_STREQ(buf, "Armed");
  ASSERT_EQ(uast_env_step(env, "takeoff", &r), UAST_OK);
  double tuple[9];
  ASSERT_EQ(uast_env_observe(env, tuple), UAST_OK);
  EXPECT_LT(tuple[8], 100.0);  // battery drains every tick

  EXPECT_EQ(uast_env_step(env, "warpDrive", &r), UAST_E_NOT_FOUND);
  ASSERT_EQ(uast_env_reset(env, 3), UAST_OK);
  ASSERT_EQ(uast_env_state(env, buf, sizeof(buf), nullptr), UAST_OK);
  EXPECT_STREQ(buf, "Idle");
  uast_env_destroy(env);
}

TEST_F(CApi, TrainEvaluateReportExport) {
  const std::string dir = Scratch("pipeline");
  const std::string train = dir + "/train", eval = dir + "/eval", base = dir + "/base";
  ASSERT_EQ(uast_project_set_seed(p_, 5), UAST_OK);
  ASSERT_EQ(uast_train(p_, train.c_str(), 2, nullptr), UAST_OK) << uast_last_error();
  const std::string ckpt = train + "/checkpoint.bin";
  EXPECT_TRUE(fs::exists(ckpt));
  ASSERT_EQ(uast_evaluate(p_, ckpt.c_str(), eval.c_str(), 3), UAST_OK) << uast_last_error();
  ASSERT_EQ(uast_baseline(p_, base.c_str(), 3), UAST_OK);
  ASSERT_EQ(uast_report(p_, eval.c_str(), base.c_str(), (dir + "/report").c_str()), UAST_OK)
      << uast_last_error();
  EXPECT_NE(Slurp(dir + "/report/report.txt").find("Flight state"), std::string::npos);

  size_t written = 0;
  const std::string tmpl = std::string(UAST_DATA_DIR) + "/internal_sim.tmpl";
  ASSERT_EQ(uast_export_script(p_, ckpt.c_str(), nullptr, tmpl.c_str(),
                               (dir + "/scripts").c_str(), 2, &written),
            UAST_OK)
      << uast_last_error();
  EXPECT_EQ(written, 2u);
  EXPECT_EQ(uast_export_script(p_, ckpt.c_str(), (eval + "/trace.csv").c_str(), nullptr,
                               (dir + "/x").c_str(), 0, nullptr),
            UAST_E_INVALID_ARGUMENT);
  ASSERT_EQ(uast_export_script(p_, nullptr, (eval + "/trace.csv").c_str(), nullptr,
                               (dir + "/y").c_str(), 0, &written),
            UAST_OK);
  EXPECT_EQ(written, 3u);

  // Inputs that are not checkpoints are rejected.
  EXPECT_EQ(uast_evaluate(p_, (eval + "/trace.csv").c_str(), eval.c_str(), 1), UAST_E_PARSE);
  EXPECT_EQ(uast_train(p_, train.c_str(), 1, "/nonexistent.bin"), UAST_E_IO);
}

}  // namespace
