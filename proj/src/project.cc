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

#include "uast/project.h"

#include <filesystem>
#include <fstream>

#include "uast/error.h"
#include "uast/text.h"

namespace uast {

namespace fs = std::filesystem;

namespace {

constexpr const char* kTraceFile = "trace.csv";
constexpr const char* kCheckpointFile = "checkpoint.bin";
constexpr const char* kMarFile = "mar.dat";

std::string Join(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

void EnsureDir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw Error(ErrorCode::kIo, "cannot create output directory '" + dir + "'");
  }
}

void AppendFile(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) throw Error(ErrorCode::kIo, "cannot write '" + path + "'");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error(ErrorCode::kIo, "write failed for '" + path + "'");
}

// Reports a model-file error with the file it came from.
template <typename F>
auto WithFile(const std::string& path, F f) -> decltype(f()) {
  try {
    return f();
  } catch (const ParseError& e) {
    throw Error(ErrorCode::kParse, path + ": " + e.what());
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

void CheckTopLevelKeys(const KeyValues& kv) {
  for (const auto& [key, value] : kv.entries()) {
    if (key == "machine" || key == "schema" || key == "constraints" ||
        key == "template" || key == "seed" || key.rfind("sim.", 0) == 0 ||
        key.rfind("train.", 0) == 0) {
      continue;
    }
    throw Error(ErrorCode::kInvalidArgument, "unknown config key '" + key + "'");
  }
}

void FinishProject(Project& p, const KeyValues& kv) {
  CheckTopLevelKeys(kv);
  p.sim = SimConfig::FromKeyValues(kv.WithPrefix("sim."));
  p.sim.Validate(*p.schema, p.model->machine());
  p.train = TrainConfig::FromKeyValues(kv.WithPrefix("train."));
  if (kv.Has("seed")) p.train.seed = static_cast<std::uint64_t>(kv.GetInt("seed", 0));
}

std::string ViolationSummary(const ViolationLedger& ledger,
                             const BehaviorModel& model) {
  std::string out = "# state total unique\n";
  std::vector<std::string> seen;
  for (std::size_t i = 0; i < model.state_count(); ++i) {
    std::string top(TopLevelState(model.state_name(i)));
    if (std::find(seen.begin(), seen.end(), top) != seen.end()) continue;
    seen.push_back(top);
    out += top + " " + std::to_string(ledger.StateTotal(top)) + " " +
           std::to_string(ledger.StateUnique(top)) + "\n";
  }
  out += "Total " + std::to_string(ledger.GrandTotal()) + " " +
         std::to_string(ledger.GrandUnique()) + "\n";
  return out;
}

std::string MarOnly(const std::vector<double>& rewards) {
  std::string out = "# episode mar\n";
  if (rewards.empty()) return out;
  std::size_t n = DefaultMarWindow(rewards.size());
  MarSeries m = Mar(rewards, n);
  for (std::size_t k = 0; k < m.values.size(); ++k) {
    out += std::to_string(k + n - 1) + " " + FormatDouble(m.values[k]) + "\n";
  }
  return out;
}

std::string TracesText(const std::vector<EpisodeTrace>& traces) {
  std::string out;
  for (const auto& t : traces) out += FormatTrace(t);
  return out;
}

}  // namespace

AgentContext Project::Context() const {
  AgentContext ctx;
  ctx.model = model;
  ctx.schema = schema;
  ctx.constraints = constraints;
  SimConfig sim_cfg = sim;
  auto m = model;
  auto s = schema;
  ctx.make_env = [sim_cfg, m, s]() -> std::unique_ptr<Environment> {
    return std::make_unique<InternalSimulator>(sim_cfg, m, s);
  };
  return ctx;
}

Project MakeProject(std::string_view machine_text, std::string_view schema_text,
                    std::string_view constraints_text, const KeyValues& config) {
  Project p;
  p.machine = ParseStateMachine(machine_text);
  p.model = std::make_shared<const BehaviorModel>(Flatten(p.machine));
  p.schema = std::make_shared<const DomainSchema>(ParseDomainSchema(schema_text));
  p.constraints = std::make_shared<const ConstraintSet>(
      ParseConstraints(constraints_text, *p.schema, p.machine));
  FinishProject(p, config);
  return p;
}

Project LoadProject(const std::string& config_path) {
  Project p;
  p.config_path = config_path;
  KeyValues kv =
      WithFile(config_path, [&] { return KeyValues::Parse(ReadFile(config_path)); });
  const fs::path base = fs::path(config_path).parent_path();
  auto resolve = [&](const char* key) -> std::string {
    auto v = kv.Get(key);
    if (!v) {
      throw Error(ErrorCode::kInvalidArgument,
                  config_path + ": missing required key '" + key + "'");
    }
    fs::path path(*v);
    return (path.is_absolute() ? path : base / path).string();
  };
  const std::string machine_path = resolve("machine");
  const std::string schema_path = resolve("schema");
  const std::string constraints_path = resolve("constraints");
  p.machine = WithFile(machine_path, [&] { return ParseStateMachine(ReadFile(machine_path)); });
  p.model = WithFile(machine_path, [&] {
    return std::make_shared<const BehaviorModel>(Flatten(p.machine));
  });
  p.schema = WithFile(schema_path, [&] {
    return std::make_shared<const DomainSchema>(ParseDomainSchema(ReadFile(schema_path)));
  });
  p.constraints = WithFile(constraints_path, [&] {
    return std::make_shared<const ConstraintSet>(
        ParseConstraints(ReadFile(constraints_path), *p.schema, p.machine));
  });
  if (kv.Has("template")) {
    const std::string tmpl_path = resolve("template");
    p.script_template =
        WithFile(tmpl_path, [&] { return ParseTemplate(ReadFile(tmpl_path)); });
  }
  WithFile(config_path, [&] {
    FinishProject(p, kv);
    return 0;
  });
  return p;
}

std::vector<double> RunTrain(const Project& project, const std::string& out_dir,
                             const TrainOptions& options) {
  EnsureDir(out_dir);
  Agent agent(project.train, project.Context());
  const std::string trace_path = Join(out_dir, kTraceFile);
  const std::string ckpt_path = Join(out_dir, kCheckpointFile);
  bool append = false;
  if (!options.resume.empty()) {
    agent.Resume(ReadFile(options.resume));
    append = fs::exists(trace_path);
  }
  if (!append) WriteFile(trace_path, "");
  std::size_t remaining =
      options.episodes ? options.episodes : project.train.training_episodes;
  const std::size_t every = project.train.checkpoint_every;
  std::vector<double> rewards;
  while (remaining > 0) {
    std::size_t chunk = remaining;
    if (every > 0) {
      std::size_t done = static_cast<std::size_t>(agent.episodes_done());
      chunk = std::min(remaining, every - done % every);
    }
    RunResult r = agent.Train(chunk);
    AppendFile(trace_path, TracesText(r.traces));
    rewards = r.episode_rewards;
    remaining -= chunk;
    if (every > 0 || remaining == 0) WriteFile(ckpt_path, agent.SaveCheckpoint());
  }
  WriteFile(Join(out_dir, kMarFile), MarOnly(rewards));
  return rewards;
}

RunResult RunEvaluate(const Project& project, const std::string& model_path,
                      const std::string& out_dir, std::size_t episodes) {
  LstmNetwork policy = WithFile(model_path, [&] {
    return LoadPolicy(ReadFile(model_path), *project.model, project.train.history_len);
  });
  if (policy.shape().hidden != project.train.hidden ||
      policy.shape().layers != project.train.layers) {
    throw Error(ErrorCode::kIncompatible,
                model_path + ": network dimensions differ from the configuration");
  }
  RunResult r = Evaluate(policy, project.train, project.Context(),
                         episodes ? episodes : project.train.evaluation_episodes);
  if (!out_dir.empty()) {
    EnsureDir(out_dir);
    WriteFile(Join(out_dir, kTraceFile), TracesText(r.traces));
    WriteFile(Join(out_dir, "violations.txt"), ViolationSummary(r.ledger, *project.model));
  }
  return r;
}

RunResult RunBaseline(const Project& project, const std::string& out_dir,
                      std::size_t episodes) {
  RunResult r = RandomBaseline(project.train, project.Context(),
                               episodes ? episodes : project.train.evaluation_episodes);
  if (!out_dir.empty()) {
    EnsureDir(out_dir);
    WriteFile(Join(out_dir, kTraceFile), TracesText(r.traces));
    WriteFile(Join(out_dir, "violations.txt"), ViolationSummary(r.ledger, *project.model));
  }
  return r;
}

std::vector<EpisodeTrace> ReadTraceFile(const Project& project,
                                        const std::string& path) {
  return WithFile(path, [&] {
    return ParseTraces(ReadFile(path), project.model->state_name(project.model->initial_state()));
  });
}

ComparisonReport RunReport(const Project& project, const std::string& ait_dir,
                           const std::string& base_dir,
                           const std::string& out_dir) {
  auto ait = ReadTraceFile(project, Join(ait_dir, kTraceFile));
  auto base = ReadTraceFile(project, Join(base_dir, kTraceFile));
  ComparisonReport report =
      CompileReport(ait, base, *project.constraints, project.model->machine());
  EnsureDir(out_dir);
  WriteFile(Join(out_dir, "report.txt"), FormatReport(report));
  WriteFile(Join(out_dir, "report.csv"), FormatReportCsv(report));
  std::vector<double> ra, rb;
  for (const auto& t : ait) ra.push_back(t.cumulative_reward);
  for (const auto& t : base) rb.push_back(t.cumulative_reward);
  WriteFile(Join(out_dir, kMarFile),
            FormatMarData(ra, rb, DefaultMarWindow(std::min(ra.size(), rb.size()))));
  return report;
}

std::vector<std::string> RunExportScript(const Project& project,
                                         const std::string& out_dir,
                                         const ExportOptions& options) {
  CommandTemplate tmpl;
  if (!options.template_path.empty()) {
    tmpl = WithFile(options.template_path,
                    [&] { return ParseTemplate(ReadFile(options.template_path)); });
  } else if (project.script_template) {
    tmpl = *project.script_template;
  } else {
    throw Error(ErrorCode::kInvalidArgument,
                "no command template configured (set 'template' or pass one)");
  }
  std::vector<EpisodeTrace> traces;
  if (!options.model_path.empty()) {
    traces = RunEvaluate(project, options.model_path, "", options.episodes).traces;
  } else if (!options.trace_path.empty()) {
    traces = ReadTraceFile(project, options.trace_path);
  } else {
    throw Error(ErrorCode::kInvalidArgument, "export needs a model or a trace file");
  }
  if (options.episodes > 0 && traces.size() > options.episodes) {
    traces.resize(options.episodes);
  }
  EnsureDir(out_dir);
  std::vector<std::string> written;
  for (const auto& t : traces) {
    const std::uint64_t env_seed = DeriveSeed(project.train.seed, kEvalEnvStream,
                                              static_cast<std::uint64_t>(t.episode));
    std::string path = Join(out_dir, "episode_" + std::to_string(t.episode) + ".script");
    WriteFile(path, ExportScript(t, tmpl, env_seed));
    written.push_back(path);
  }
  return written;
}

}  // namespace uast
