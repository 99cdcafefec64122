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

// Episode traces and their line-oriented file form:
//
//   <episode>,<tick>,<state>,<action>,<correct 0|1>,<failed ids ;-joined>,<reward>
//   <episode>,<terminal kind>,<cumulative reward>
//
// `state` is the flight state after the action. A step line is followed by
// further steps of the same episode and finally by the footer line.

#ifndef UAST_TRACE_H_
#define UAST_TRACE_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "uast/domain_model.h"
#include "uast/sim.h"

namespace uast {

struct StepRecord {
  std::int64_t tick = 0;
  std::string state;
  std::string action;
  bool correct = false;
  std::vector<std::string> failed;
  double reward = 0;
  StateTuple tuple;  // in-memory only, not serialized
};

struct EpisodeTrace {
  std::int64_t episode = 0;
  std::string initial_state;
  std::vector<StepRecord> steps;
  TerminalKind terminal = TerminalKind::kRunning;
  double cumulative_reward = 0;

  // Flight state before step i.
  const std::string& StateBefore(std::size_t i) const {
    return i == 0 ? initial_state : steps[i - 1].state;
  }
};

std::string FormatTrace(const EpisodeTrace& trace);

// Parses a whole trace file. `initial_state` is the machine's initial state,
// which the file does not repeat.
std::vector<EpisodeTrace> ParseTraces(std::string_view text,
                                      const std::string& initial_state);

}  // namespace uast

#endif  // UAST_TRACE_H_
