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

// Flight-behavior state machine: parsing, flattening and queries.
//
// File format (one declaration per line, '#' comments):
//
//   event <name> [kind=call]
//   state <Name> [stereotype=<Phase>] [initial] [goal]
//   composite <Name> [stereotype=<Phase>] [initial] [goal] {
//     state <Sub> [stereotype=<Phase>] [initial]
//     trans <Sub> --<event>--> <Sub>
//   }
//   trans <Source> --<event>--> <Target>
//
// Composite states are flattened Binder-style: each substate becomes a
// top-level state named Parent.Sub, transitions into the parent land on its
// initial substate, and transitions out of the parent are replicated for every
// substate. A substate's own transition on an event takes priority over the
// replicated parent transition on the same event.

#ifndef UAST_BEHAVIOR_MODEL_H_
#define UAST_BEHAVIOR_MODEL_H_

#include <cstddef>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace uast {

struct FlightStateMachine;

// Canonical name of a flight-phase stereotype, resolving the Ascend/Descend
// aliases. Returns nullopt for names outside the behavioral vocabulary.
std::optional<std::string> CanonicalPhase(std::string_view name);

struct StateDef {
  std::string name;
  std::string stereotype;  // canonical phase, or empty when undeclared
  bool initial = false;
  bool goal = false;
  std::shared_ptr<const FlightStateMachine> substates;
  // Set by flattening: stereotype of the outermost composite that contained
  // this state. Empty for states that were already top level.
  std::string context_stereotype;

  bool is_composite() const { return substates != nullptr; }
  bool operator==(const StateDef& other) const;
};

struct Transition {
  std::string source;
  std::string event;
  std::string target;
  int line = 0;  // source line, 0 when synthesized

  bool operator==(const Transition& other) const {
    return source == other.source && event == other.event &&
           target == other.target;
  }
};

struct FlightStateMachine {
  std::vector<StateDef> states;
  std::vector<std::string> events;
  std::vector<Transition> transitions;
  std::string initial;
  std::string goal;  // empty inside composite sub-machines

  bool operator==(const FlightStateMachine& other) const;

  bool is_flat() const;
  const StateDef* FindState(std::string_view name) const;
  bool HasEvent(std::string_view name) const;

  // Transition count including those inside composite sub-machines.
  std::size_t TotalTransitionCount() const;
  // Every state name at every nesting level, plus the dotted Parent.Sub forms.
  std::set<std::string> AllStateNames() const;
};

FlightStateMachine ParseStateMachine(std::string_view text);
FlightStateMachine Flatten(const FlightStateMachine& sm);

// Queries on a flattened machine. Linear scans; BehaviorModel below is the
// indexed form used by the simulator and agent.
std::set<std::string> LegalActions(const FlightStateMachine& sm,
                                   std::string_view state);
std::optional<std::string> NextState(const FlightStateMachine& sm,
                                     std::string_view state,
                                     std::string_view event);
bool IsGoal(const FlightStateMachine& sm, std::string_view state);

// True when `state` is `scope` or nested inside it (Parent.Sub naming).
bool InState(std::string_view state, std::string_view scope);

// Top-level ancestor of a flattened state name ("Ascend.TurningLeft" ->
// "Ascend").
std::string_view TopLevelState(std::string_view state);

// Immutable, indexed view of a flattened machine. Actions are the declared
// events in declaration order; states are in flattened declaration order.
class BehaviorModel {
 public:
  explicit BehaviorModel(FlightStateMachine flat);

  const FlightStateMachine& machine() const { return machine_; }
  std::size_t state_count() const { return machine_.states.size(); }
  std::size_t action_count() const { return machine_.events.size(); }
  const std::vector<std::string>& actions() const { return machine_.events; }
  const std::string& state_name(std::size_t i) const {
    return machine_.states[i].name;
  }
  const StateDef& state(std::size_t i) const { return machine_.states[i]; }

  std::size_t initial_state() const { return initial_; }
  std::size_t goal_state() const { return goal_; }

  std::size_t StateIndex(std::string_view name) const;    // throws kNotFound
  std::size_t ActionIndex(std::string_view name) const;   // throws kNotFound

  // Target state index, or -1 when the action is not legal in `state`.
  int Next(std::size_t state, std::size_t action) const {
    return table_[state * action_count() + action];
  }
  bool IsLegal(std::size_t state, std::size_t action) const {
    return Next(state, action) >= 0;
  }
  std::vector<std::size_t> LegalActionIndices(std::size_t state) const;
  bool IsGoal(std::size_t state) const { return state == goal_; }

 private:
  FlightStateMachine machine_;
  std::vector<int> table_;
  std::size_t initial_ = 0;
  std::size_t goal_ = 0;
};

}  // namespace uast

#endif  // UAST_BEHAVIOR_MODEL_H_
