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

// Command-line front end over the C API.

#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "uast/uast.h"

namespace {

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
};

void AddCommon(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "project config file")->required();
  cmd->add_option("--seed", c.seed, "run seed (overrides the config)");
  cmd->add_option("--out", c.out, "output directory")->required();
}

int Report(const char* what, uast_status status) {
  if (status == UAST_OK) return 0;
  std::fprintf(stderr, "uast %s: %s: %s\n", what, uast_status_name(status),
               uast_last_error());
  return 1;
}

class ProjectHandle {
 public:
  ~ProjectHandle() { uast_project_close(p_); }
  uast_status Open(const Common& c) {
    uast_status s = uast_project_open(c.config.c_str(), &p_);
    if (s == UAST_OK && c.seed) s = uast_project_set_seed(p_, *c.seed);
    return s;
  }
  uast_project* get() const { return p_; }

 private:
  uast_project* p_ = nullptr;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"UAV autopilot test generation harness"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(uast_version()));

  Common train_c, eval_c, base_c, report_c, export_c;
  std::size_t train_episodes = 0, eval_episodes = 0, base_episodes = 0,
              export_episodes = 0;
  std::string resume, eval_model, export_model, export_trace, export_template;
  std::string ait_dir, base_dir;

  auto* train = app.add_subcommand("train", "train a test agent");
  AddCommon(train, train_c);
  train->add_option("--episodes", train_episodes, "episodes to train (default: config)");
  train->add_option("--resume", resume, "continue from this checkpoint");

  auto* eval = app.add_subcommand("eval", "run greedy evaluation episodes");
  AddCommon(eval, eval_c);
  eval->add_option("--model", eval_model, "checkpoint to evaluate")->required();
  eval->add_option("--episodes", eval_episodes, "episodes (default: config)");

  auto* base = app.add_subcommand("baseline", "run random-action episodes");
  AddCommon(base, base_c);
  base->add_option("--episodes", base_episodes, "episodes (default: config)");

  auto* report = app.add_subcommand("report", "compare two trace directories");
  AddCommon(report, report_c);
  report->add_option("ait", ait_dir, "agent trace directory")->required();
  report->add_option("random", base_dir, "baseline trace directory")->required();

  auto* exp = app.add_subcommand("export-script", "turn test paths into scripts");
  AddCommon(exp, export_c);
  auto* model_opt = exp->add_option("--model", export_model, "evaluate this checkpoint");
  auto* trace_opt = exp->add_option("--trace", export_trace, "export from a trace file");
  model_opt->excludes(trace_opt);
  exp->add_option("--template", export_template, "command template (default: config)");
  exp->add_option("--episodes", export_episodes, "episodes to export (default: all)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::fprintf(stderr, "uast: %s\n", e.what());
    return 2;
  }

  ProjectHandle project;
  if (*train) {
    if (int rc = Report("train", project.Open(train_c))) return rc;
    return Report("train", uast_train(project.get(), train_c.out.c_str(), train_episodes,
                                      resume.empty() ? nullptr : resume.c_str()));
  }
  if (*eval) {
    if (int rc = Report("eval", project.Open(eval_c))) return rc;
    return Report("eval", uast_evaluate(project.get(), eval_model.c_str(),
                                        eval_c.out.c_str(), eval_episodes));
  }
  if (*base) {
    if (int rc = Report("baseline", project.Open(base_c))) return rc;
    return Report("baseline",
                  uast_baseline(project.get(), base_c.out.c_str(), base_episodes));
  }
  if (*report) {
    if (int rc = Report("report", project.Open(report_c))) return rc;
    return Report("report", uast_report(project.get(), ait_dir.c_str(), base_dir.c_str(),
                                        report_c.out.c_str()));
  }
  if (*exp) {
    if (export_model.empty() == export_trace.empty()) {
      std::fprintf(stderr, "uast export-script: one of --model and --trace is required\n");
      return 2;
    }
    if (int rc = Report("export-script", project.Open(export_c))) return rc;
    return Report("export-script",
                  uast_export_script(
                      project.get(), export_model.empty() ? nullptr : export_model.c_str(),
                      export_trace.empty() ? nullptr : export_trace.c_str(),
                      export_template.empty() ? nullptr : export_template.c_str(),
                      export_c.out.c_str(), export_episodes, nullptr));
  }
  return 2;
}
