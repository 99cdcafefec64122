/* Copyright 2026 The UAST Harness Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface of libuast.
 *
 * Every fallible call returns a uast_status. On failure, uast_last_error()
 * returns a one-line message for the calling thread, valid until that
 * thread's next call into the library. Handles are not thread-safe; distinct
 * handles may be used from different threads.
 */

#ifndef UAST_UAST_H_
#define UAST_UAST_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define UAST_API __declspec(dllexport)
#elif defined(UAST_BUILDING_LIBRARY)
#define UAST_API __attribute__((visibility("default")))
#else
#define UAST_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum uast_status {
  UAST_OK = 0,
  UAST_E_INVALID_ARGUMENT = 1,
  UAST_E_PARSE = 2,
  UAST_E_NOT_FOUND = 3,
  UAST_E_IO = 4,
  UAST_E_STATE = 5,
  UAST_E_INCOMPATIBLE = 6,
  UAST_E_INTERNAL = 7
} uast_status;

typedef enum uast_terminal {
  UAST_RUNNING = 0,
  UAST_CRASHED = 1,
  UAST_GOAL = 2,
  UAST_STEP_LIMIT = 3,
  UAST_ABORTED = 4
} uast_terminal;

typedef struct uast_project uast_project;
typedef struct uast_env uast_env;

typedef struct uast_step_result {
  int action_correct;
  int crashed;
  int goal_reached;
  uast_terminal terminal;
} uast_step_result;

UAST_API const char* uast_version(void);
UAST_API const char* uast_last_error(void);
UAST_API const char* uast_status_name(uast_status status);

/* Loads a project config and the model files it names. */
UAST_API uast_status uast_project_open(const char* config_path, uast_project** out);
UAST_API void uast_project_close(uast_project* project);
UAST_API uast_status uast_project_set_seed(uast_project* project, uint64_t seed);
/* Any out pointer may be NULL. State count is after flattening. */
UAST_API uast_status uast_project_info(const uast_project* project, size_t* states,
                                       size_t* actions, size_t* constraints);

/* episodes = 0 uses the configured count. resume may be NULL. */
UAST_API uast_status uast_train(uast_project* project, const char* out_dir,
                                size_t episodes, const char* resume);
UAST_API uast_status uast_evaluate(uast_project* project, const char* model_path,
                                   const char* out_dir, size_t episodes);
UAST_API uast_status uast_baseline(uast_project* project, const char* out_dir,
                                   size_t episodes);
UAST_API uast_status uast_report(uast_project* project, const char* ait_dir,
                                 const char* base_dir, const char* out_dir);
/* Exactly one of model_path and trace_path must be non-NULL. template_path
 * may be NULL to use the project's template. written may be NULL. */
UAST_API uast_status uast_export_script(uast_project* project, const char* model_path,
                                        const char* trace_path,
                                        const char* template_path,
                                        const char* out_dir, size_t episodes,
                                        size_t* written);

/* Internal-simulator environment built from the project's configuration. */
UAST_API uast_status uast_env_create(const uast_project* project, uast_env** out);
UAST_API void uast_env_destroy(uast_env* env);
UAST_API uast_status uast_env_reset(uast_env* env, uint64_t seed);
UAST_API uast_status uast_env_step(uast_env* env, const char* action,
                                   uast_step_result* out);
/* Copies the NUL-terminated flight state into buf. needed (may be NULL)
 * receives the required size including the terminator; a short buffer
 * yields UAST_E_INVALID_ARGUMENT. */
UAST_API uast_status uast_env_state(const uast_env* env, char* buf, size_t cap,
                                    size_t* needed);
/* Fills the 9 numeric slots of the observed state tuple. */
UAST_API uast_status uast_env_observe(const uast_env* env, double tuple[9]);

#ifdef __cplusplus
}
#endif

#endif /* UAST_UAST_H_ */
