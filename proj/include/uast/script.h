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

// Test-path to test-script export.
//
// Command-template file:
//
//   comment <prefix>             line-comment marker of the target language
//   prologue =>                  emitted once before the first step
//     ...
//   end
//   action <Event> => [first body line]
//     ...                        further body lines
//   end
//   epilogue =>
//     ...
//   end
//
// Bodies may use {step}, {action}, {source} (state before the step) and
// {state} (state after it). Lines outside blocks starting with '#' are
// ignored.

#ifndef UAST_SCRIPT_H_
#define UAST_SCRIPT_H_

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "uast/sim.h"
#include "uast/trace.h"

namespace uast {

struct CommandTemplate {
  std::string comment = "#";
  std::vector<std::string> prologue;
  std::vector<std::string> epilogue;
  std::map<std::string, std::vector<std::string>> actions;
};

CommandTemplate ParseTemplate(std::string_view text);

// One expanded body per correct step, in trace order; incorrect steps become
// comments. Throws kNotFound naming the first action without a template
// entry.
std::string ExportScript(const EpisodeTrace& trace, const CommandTemplate& tmpl,
                         std::uint64_t seed);

// Executes a script made from the internal-simulator template: every
// non-comment line `step <event>` is applied to `env` after Reset(seed).
// Returns the flight state after each executed step.
std::vector<std::string> ReplayScript(std::string_view script, Environment& env,
                                      std::uint64_t seed);

}  // namespace uast

#endif  // UAST_SCRIPT_H_
