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

// A project bundles the model inputs named by a key=value config file:
//
//   machine = arducopter.sm          state machine
//   schema = arducopter.schema       domain schema
//   constraints = arducopter.ocl     invariants
//   template = ardupilot.tmpl        command template for script export
//   seed = 7
//   sim.<key> = ...                  see SimConfig::FromKeyValues
//   train.<key> = ...                see TrainConfig::FromKeyValues
//
// Relative paths resolve against the config file's directory. The run
// commands below write their outputs into an output directory:
//
//   train     trace.csv, checkpoint.bin, mar.dat
//   eval      trace.csv, violations.txt
//   baseline  trace.csv, violations.txt
//   report    report.txt, report.csv, mar.dat
//   export    episode_<n>.script

#ifndef UAST_PROJECT_H_
#define UAST_PROJECT_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "uast/agent.h"
#include "uast/analysis.h"
#include "uast/behavior_model.h"
#include "uast/constraint.h"
#include "uast/domain_model.h"
#include "uast/script.h"
#include "uast/sim.h"

namespace uast {

struct Project {
  std::string config_path;
  FlightStateMachine machine;  // as parsed
  std::shared_ptr<const BehaviorModel> model;  // flattened
  std::shared_ptr<const DomainSchema> schema;
  std::shared_ptr<const ConstraintSet> constraints;
  std::optional<CommandTemplate> script_template;
  SimConfig sim;
  TrainConfig train;

  AgentContext Context() const;
  void SetSeed(std::uint64_t seed) { train.seed = seed; }
};

Project LoadProject(const std::string& config_path);

// Builds a project from in-memory texts (no template).
Project MakeProject(std::string_view machine_text, std::string_view schema_text,
                    std::string_view constraints_text, const KeyValues& config);

struct TrainOptions {
  std::size_t episodes = 0;  // 0 = train.training_episodes
  std::string resume;        // checkpoint path, empty for a fresh run
};

// Returns the per-episode cumulative rewards of the whole run.
std::vector<double> RunTrain(const Project& project, const std::string& out_dir,
                             const TrainOptions& options);

RunResult RunEvaluate(const Project& project, const std::string& model_path,
                      const std::string& out_dir, std::size_t episodes = 0);

RunResult RunBaseline(const Project& project, const std::string& out_dir,
                      std::size_t episodes = 0);

ComparisonReport RunReport(const Project& project, const std::string& ait_dir,
                           const std::string& base_dir,
                           const std::string& out_dir);

struct ExportOptions {
  std::string model_path;     // evaluate this checkpoint greedily, or
  std::string trace_path;     // export episodes of an existing trace file
  std::string template_path;  // overrides the project's template
  std::size_t episodes = 0;   // how many episodes to export, 0 = all
};

// Returns the written file paths. Each script header names the environment
// seed its episode ran under.
std::vector<std::string> RunExportScript(const Project& project,
                                         const std::string& out_dir,
                                         const ExportOptions& options);

std::vector<EpisodeTrace> ReadTraceFile(const Project& project,
                                        const std::string& path);

}  // namespace uast

#endif  // UAST_PROJECT_H_
