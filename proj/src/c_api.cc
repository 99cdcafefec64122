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

#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <string>

#include "uast/error.h"
#include "uast/project.h"

struct uast_project {
  uast::Project project;
};

struct uast_env {
  std::unique_ptr<uast::InternalSimulator> sim;
  std::string state;
};

namespace {

thread_local std::string g_last_error;

uast_status StatusOf(uast::ErrorCode code) {
  switch (code) {
    case uast::ErrorCode::kInvalidArgument: return UAST_E_INVALID_ARGUMENT;
    case uast::ErrorCode::kParse: return UAST_E_PARSE;
    case uast::ErrorCode::kNotFound: return UAST_E_NOT_FOUND;
    case uast::ErrorCode::kIo: return UAST_E_IO;
    case uast::ErrorCode::kState: return UAST_E_STATE;
    case uast::ErrorCode::kIncompatible: return UAST_E_INCOMPATIBLE;
  }
  return UAST_E_INTERNAL;
}

uast_status Fail(uast_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

template <typename F>
uast_status Guard(F&& f) {
  g_last_error.clear();
  try {
    f();
    return UAST_OK;
  } catch (const uast::ParseError& e) {
    return Fail(UAST_E_PARSE, e.what());
  } catch (const uast::Error& e) {
    return Fail(StatusOf(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return Fail(UAST_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return Fail(UAST_E_INTERNAL, e.what());
  } catch (...) {
    return Fail(UAST_E_INTERNAL, "unknown error");
  }
}

std::string Str(const char* s) { return s ? std::string(s) : std::string(); }

uast_terminal TerminalOf(uast::TerminalKind k) {
  switch (k) {
    case uast::TerminalKind::kRunning: return UAST_RUNNING;
    case uast::TerminalKind::kCrashed: return UAST_CRASHED;
    case uast::TerminalKind::kGoal: return UAST_GOAL;
    case uast::TerminalKind::kStepLimit: return UAST_STEP_LIMIT;
    case uast::TerminalKind::kAborted: return UAST_ABORTED;
  }
  return UAST_ABORTED;
}

#define UAST_REQUIRE(cond, what) \
  if (!(cond)) return Fail(UAST_E_INVALID_ARGUMENT, what)

}  // namespace

extern "C" {

const char* uast_version(void) { return "1.0.0"; }

const char* uast_last_error(void) { return g_last_error.c_str(); }

const char* uast_status_name(uast_status status) {
  switch (status) {
    case UAST_OK: return "ok";
    case UAST_E_INVALID_ARGUMENT: return "invalid argument";
    case UAST_E_PARSE: return "parse error";
    case UAST_E_NOT_FOUND: return "not found";
    case UAST_E_IO: return "i/o error";
    case UAST_E_STATE: return "invalid state";
    case UAST_E_INCOMPATIBLE: return "incompatible";
    case UAST_E_INTERNAL: return "internal error";
  }
  return "unknown status";
}

uast_status uast_project_open(const char* config_path, uast_project** out) {
  UAST_REQUIRE(config_path && out, "config path and output handle are required");
  *out = nullptr;
  return Guard([&] {
    auto p = std::make_unique<uast_project>();
    p->project = uast::LoadProject(config_path);
    *out = p.release();
  });
}

void uast_project_close(uast_project* project) { delete project; }

uast_status uast_project_set_seed(uast_project* project, uint64_t seed) {
  UAST_REQUIRE(project, "project handle is null");
  project->project.SetSeed(seed);
  return UAST_OK;
}

uast_status uast_project_info(const uast_project* project, size_t* states,
                              size_t* actions, size_t* constraints) {
  UAST_REQUIRE(project, "project handle is null");
  const auto& p = project->project;
  if (states) *states = p.model->state_count();
  if (actions) *actions = p.model->action_count();
  if (constraints) *constraints = p.constraints->size();
  return UAST_OK;
}

uast_status uast_train(uast_project* project, const char* out_dir, size_t episodes,
                       const char* resume) {
  UAST_REQUIRE(project && out_dir, "project and output directory are required");
  return Guard([&] {
    uast::TrainOptions opts;
    opts.episodes = episodes;
    opts.resume = Str(resume);
    uast::RunTrain(project->project, out_dir, opts);
  });
}

uast_status uast_evaluate(uast_project* project, const char* model_path,
                          const char* out_dir, size_t episodes) {
  UAST_REQUIRE(project && model_path && out_dir,
               "project, model and output directory are required");
  return Guard([&] { uast::RunEvaluate(project->project, model_path, out_dir, episodes); });
}

uast_status uast_baseline(uast_project* project, const char* out_dir, size_t episodes) {
  UAST_REQUIRE(project && out_dir, "project and output directory are required");
  return Guard([&] { uast::RunBaseline(project->project, out_dir, episodes); });
}

uast_status uast_report(uast_project* project, const char* ait_dir,
                        const char* base_dir, const char* out_dir) {
  UAST_REQUIRE(project && ait_dir && base_dir && out_dir,
               "project, both trace directories and output directory are required");
  return Guard([&] { uast::RunReport(project->project, ait_dir, base_dir, out_dir); });
}

uast_status uast_export_script(uast_project* project, const char* model_path,
                               const char* trace_path, const char* template_path,
                               const char* out_dir, size_t episodes, size_t* written) {
  UAST_REQUIRE(project && out_dir, "project and output directory are required");
  UAST_REQUIRE((model_path == nullptr) != (trace_path == nullptr),
               "exactly one of a model and a trace file is required");
  return Guard([&] {
    uast::ExportOptions opts;
    opts.model_path = Str(model_path);
    opts.trace_path = Str(trace_path);
    opts.template_path = Str(template_path);
    opts.episodes = episodes;
    auto files = uast::RunExportScript(project->project, out_dir, opts);
    if (written) *written = files.size();
  });
}

uast_status uast_env_create(const uast_project* project, uast_env** out) {
  UAST_REQUIRE(project && out, "project and output handle are required");
  *out = nullptr;
  return Guard([&] {
    const auto& p = project->project;
    auto env = std::make_unique<uast_env>();
    env->sim = std::make_unique<uast::InternalSimulator>(p.sim, p.model, p.schema);
    env->state = env->sim->Reset(p.sim.seed).flight_state;
    *out = env.release();
  });
}

void uast_env_destroy(uast_env* env) { delete env; }

uast_status uast_env_reset(uast_env* env, uint64_t seed) {
  UAST_REQUIRE(env, "environment handle is null");
  return Guard([&] { env->state = env->sim->Reset(seed).flight_state; });
}

uast_status uast_env_step(uast_env* env, const char* action, uast_step_result* out) {
  UAST_REQUIRE(env && action, "environment and action are required");
  return Guard([&] {
    uast::StepOutcome o = env->sim->Step(std::string_view(action));
    env->state = o.flight_state;
    if (out) {
      out->action_correct = o.action_correct;
      out->crashed = o.crashed;
      out->goal_reached = o.goal_reached;
      out->terminal = TerminalOf(o.status);
    }
  });
}

uast_status uast_env_state(const uast_env* env, char* buf, size_t cap, size_t* needed) {
  UAST_REQUIRE(env, "environment handle is null");
  const size_t n = env->state.size() + 1;
  if (needed) *needed = n;
  if (!buf) return needed ? UAST_OK : Fail(UAST_E_INVALID_ARGUMENT, "buffer is null");
  UAST_REQUIRE(cap >= n, "buffer too small for the flight state");
  std::memcpy(buf, env->state.c_str(), n);
  return UAST_OK;
}

uast_status uast_env_observe(const uast_env* env, double tuple[9]) {
  UAST_REQUIRE(env && tuple, "environment and output array are required");
  return Guard([&] {
    uast::StateTuple t = uast::ToStateTuple(env->sim->Observe());
    for (int i = 0; i < 9; ++i) tuple[i] = t.values[static_cast<size_t>(i)];
  });
}

}  // extern "C"
