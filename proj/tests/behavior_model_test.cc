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

#include "uast/behavior_model.h"

#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>
#include <string>

#include "test_util.h"
#include "uast/error.h"

namespace uast {
namespace {

using testing::ArduMachine;

constexpr const char* kDegenerate = R"(
state Only stereotype=Disarmed initial goal
)";

TEST(ParseStateMachine, ArduCopterCounts) {
  FlightStateMachine sm = ArduMachine();
  EXPECT_EQ(sm.states.size(), 12u);
  EXPECT_EQ(sm.events.size(), 23u);
  EXPECT_EQ(sm.TotalTransitionCount(), 43u);
  EXPECT_EQ(sm.initial, "Idle");
  EXPECT_EQ(sm.goal, "Landed");
  EXPECT_FALSE(sm.is_flat());
}

TEST(ParseStateMachine, DegenerateSingleState) {
  FlightStateMachine sm = ParseStateMachine(kDegenerate);
  ASSERT_EQ(sm.states.size(), 1u);
  EXPECT_TRUE(sm.transitions.empty());
  EXPECT_EQ(sm.initial, "Only");
  EXPECT_EQ(sm.goal, "Only");
  FlightStateMachine flat = Flatten(sm);
  EXPECT_TRUE(IsGoal(flat, "Only"));
  EXPECT_TRUE(LegalActions(flat, "Only").empty());
  BehaviorModel model(flat);
  EXPECT_TRUE(model.IsGoal(model.initial_state()));
}

ParseError ParseFailure(std::string_view text) {
  try {
    ParseStateMachine(text);
  } catch (const ParseError& e) {
    return e;
  }
  ADD_FAILURE() << "expected a parse error";
  return ParseError(0, 0, "");
}

TEST(ParseStateMachine, UndeclaredStateReportsLine) {
  ParseError e = ParseFailure(R"(event go
state A initial
state B goal
trans A --go--> B
trans B --go--> Hover
)");
  EXPECT_EQ(e.line(), 5);
  EXPECT_NE(std::string(e.what()).find("Hover"), std::string::npos);
}

TEST(ParseStateMachine, RejectsMalformedMachines) {
  // Missing initial.
  EXPECT_THROW(ParseStateMachine("state A goal\n"), ParseError);
  // Missing goal.
  EXPECT_THROW(ParseStateMachine("state A initial\n"), ParseError);
  // Two initials.
  EXPECT_THROW(ParseStateMachine("state A initial\nstate B initial goal\n"), ParseError);
  // Undeclared event.
  EXPECT_THROW(ParseStateMachine("state A initial\nstate B goal\ntrans A --go--> B\n"),
               ParseError);
  // Duplicate (source, event).
  EXPECT_THROW(ParseStateMachine(R"(event go
state A initial
state B goal
state C
trans A --go--> B
trans A --go--> C
trans B --go--> C
)"),
               ParseError);
  // Unknown stereotype.
  EXPECT_THROW(ParseStateMachine("state A stereotype=Hovering initial goal\n"),
               ParseError);
  // Unreachable state.
  EXPECT_THROW(ParseStateMachine("event go\nstate A initial goal\nstate B\n"),
               ParseError);
  // Composite without initial substate.
  EXPECT_THROW(ParseStateMachine(R"(event go
state A initial
composite P {
  state X
}
state G goal
trans A --go--> P
trans P --go--> G
)"),
               ParseError);
  // Signal events are not representable.
  EXPECT_THROW(ParseStateMachine("event ping kind=signal\nstate A initial goal\n"),
               ParseError);
  EXPECT_THROW(ParseStateMachine(""), ParseError);
}

TEST(ParseStateMachine, SyntaxErrorHasColumn) {
  ParseError e = ParseFailure("state A initial goal\nstat B\n");
  EXPECT_EQ(e.line(), 2);
  EXPECT_EQ(e.column(), 1);
}

TEST(Flatten, FlatMachineUnchanged) {
  FlightStateMachine sm = ParseStateMachine(R"(event go
event back
state A stereotype=Armed initial
state B stereotype=Landing
state C stereotype=Disarmed goal
trans A --go--> B
trans B --back--> A
trans B --go--> C
)");
  EXPECT_TRUE(sm.is_flat());
  EXPECT_EQ(Flatten(sm), sm);
}

TEST(Flatten, CompositeExpandsWithOutgoingReplicated) {
  FlightStateMachine sm = ParseStateMachine(R"(event up
event down
event left
event right
event straight
state T stereotype=Takeoff initial
composite Ascend stereotype=Climb {
  state Straight initial
  state TurningLeft
  state TurningRight
  trans Straight --left--> TurningLeft
  trans Straight --right--> TurningRight
  trans TurningLeft --straight--> Straight
  trans TurningRight --straight--> Straight
}
state D stereotype=Disarmed goal
trans T --up--> Ascend
trans Ascend --down--> D
)");
  FlightStateMachine flat = Flatten(sm);
  EXPECT_TRUE(flat.is_flat());
  EXPECT_EQ(flat.states.size(), 5u);
  for (const char* sub : {"Ascend.Straight", "Ascend.TurningLeft", "Ascend.TurningRight"}) {
    ASSERT_NE(flat.FindState(sub), nullptr) << sub;
    EXPECT_EQ(NextState(flat, sub, "down"), std::optional<std::string>("D")) << sub;
    EXPECT_EQ(flat.FindState(sub)->context_stereotype, "Climb");
  }
  EXPECT_EQ(NextState(flat, "T", "up"), std::optional<std::string>("Ascend.Straight"));
  EXPECT_EQ(NextState(flat, "Ascend.Straight", "left"),
            std::optional<std::string>("Ascend.TurningLeft"));
  EXPECT_FALSE(NextState(flat, "Ascend.TurningLeft", "left").has_value());
  EXPECT_EQ(flat.initial, "T");
  EXPECT_EQ(Flatten(flat), flat);
}

TEST(Flatten, SubstateTransitionOverridesParent) {
  FlightStateMachine flat = Flatten(ParseStateMachine(R"(event go
event stop
state A initial
composite P {
  state X initial
  state Y
  trans X --go--> Y
}
state G goal
trans A --go--> P
trans P --go--> G
trans P --stop--> G
)"));
  EXPECT_EQ(NextState(flat, "P.X", "go"), std::optional<std::string>("P.Y"));
  EXPECT_EQ(NextState(flat, "P.Y", "go"), std::optional<std::string>("G"));
}

TEST(Flatten, ArduCopterFlattenedCounts) {
  FlightStateMachine flat = Flatten(ArduMachine());
  EXPECT_EQ(flat.states.size(), 17u);
  EXPECT_EQ(flat.transitions.size(), 55u);
  EXPECT_EQ(Flatten(flat), flat);
}

TEST(LegalActions, ArduCopterExamples) {
  FlightStateMachine flat = Flatten(ArduMachine());
  EXPECT_EQ(LegalActions(flat, "Takeoff"),
            (std::set<std::string>{"increaseAlt", "decreaseAlt", "startLoiter",
                                   "holdPosition", "holdAlt", "landUAV"}));
  EXPECT_EQ(LegalActions(flat, "Idle"), (std::set<std::string>{"armUAV"}));
  EXPECT_FALSE(LegalActions(flat, "Armed").count("startLoiter"));
  EXPECT_THROW(LegalActions(flat, "Hover"), Error);
}

TEST(NextState, ArduCopterExamples) {
  FlightStateMachine flat = Flatten(ArduMachine());
  EXPECT_EQ(NextState(flat, "Idle", "armUAV"), std::optional<std::string>("Armed"));
  EXPECT_EQ(NextState(flat, "Armed", "takeoff"), std::optional<std::string>("Takeoff"));
  EXPECT_FALSE(NextState(flat, "Armed", "startLoiter").has_value());
  EXPECT_THROW(NextState(flat, "Armed", "fly"), Error);
  EXPECT_TRUE(IsGoal(flat, "Landed"));
  EXPECT_FALSE(IsGoal(flat, "Ascend.Straight"));
}

TEST(BehaviorModel, TableAgreesWithLinearQueries) {
  FlightStateMachine flat = Flatten(ArduMachine());
  BehaviorModel model(flat);
  EXPECT_EQ(model.state_count(), 17u);
  EXPECT_EQ(model.action_count(), 23u);
  for (std::size_t s = 0; s < model.state_count(); ++s) {
    const std::string& name = model.state_name(s);
    auto legal = LegalActions(flat, name);
    EXPECT_EQ(legal.empty(), model.IsGoal(s)) << name;
    for (std::size_t a = 0; a < model.action_count(); ++a) {
      auto next = NextState(flat, name, model.actions()[a]);
      EXPECT_EQ(next.has_value(), legal.count(model.actions()[a]) == 1);
      EXPECT_EQ(model.IsLegal(s, a), next.has_value());
      if (next) {
        EXPECT_EQ(model.state_name(static_cast<std::size_t>(model.Next(s, a))), *next);
      }
    }
  }
}

TEST(InState, PrefixMatchesOnlyWholeSegments) {
  EXPECT_TRUE(InState("Ascend", "Ascend"));
  EXPECT_TRUE(InState("Ascend.TurningLeft", "Ascend"));
  EXPECT_FALSE(InState("AscendFast", "Ascend"));
  EXPECT_FALSE(InState("Ascend", "Ascend.TurningLeft"));
  EXPECT_EQ(TopLevelState("Loiter.Clockwise"), "Loiter");
  EXPECT_EQ(TopLevelState("Idle"), "Idle");
}

// Hierarchical execution used as an oracle for flattening: a configuration
// is (top-level state, active substate or empty). An event is handled by the
// innermost level that has a transition for it.
struct Config {
  std::string top, sub;
  bool operator<(const Config& o) const { return std::tie(top, sub) < std::tie(o.top, o.sub); }
  std::string Name() const { return sub.empty() ? top : top + "." + sub; }
};

Config Enter(const FlightStateMachine& sm, const std::string& state) {
  const StateDef* s = sm.FindState(state);
  return {state, s->is_composite() ? s->substates->initial : std::string()};
}

std::optional<Config> HierStep(const FlightStateMachine& sm, const Config& c,
                               const std::string& event) {
  if (!c.sub.empty()) {
    for (const auto& t : sm.FindState(c.top)->substates->transitions) {
      if (t.source == c.sub && t.event == event) return Config{c.top, t.target};
    }
  }
  for (const auto& t : sm.transitions) {
    if (t.source == c.top && t.event == event) return Enter(sm, t.target);
  }
  return std::nullopt;
}

// Valid random machine: a spine guarantees reachability at each level.
std::string RandomMachineText(std::mt19937& gen) {
  auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(gen); };
  const int n_events = 2 + pick(5);
  const int n_top = 2 + pick(7);
  std::string text;
  for (int e = 0; e < n_events; ++e) text += "event e" + std::to_string(e) + "\n";
  std::set<std::pair<std::string, int>> used;
  auto trans = [&](std::string& out, const std::string& a, const std::string& b, int e) {
    if (!used.insert({a, e}).second) return;
    out += "trans " + a + " --e" + std::to_string(e) + "--> " + b + "\n";
  };
  std::string top_trans;
  for (int i = 0; i < n_top; ++i) {
    const std::string name = "S" + std::to_string(i);
    const bool goal = i == n_top - 1;
    const bool composite = !goal && i > 0 && pick(3) == 0;
    if (composite) {
      const int n_sub = 1 + pick(3);
      std::string inner;
      text += "composite " + name + " {\n";
      for (int j = 0; j < n_sub; ++j) {
        text += "  state Q" + std::to_string(j) + (j == 0 ? " initial" : "") + "\n";
      }
      std::set<std::pair<std::string, int>> saved = used;
      used.clear();
      for (int j = 1; j < n_sub; ++j) {
        trans(inner, "Q" + std::to_string(j - 1), "Q" + std::to_string(j), pick(n_events));
      }
      for (int k = pick(4); k > 0; --k) {
        trans(inner, "Q" + std::to_string(pick(n_sub)), "Q" + std::to_string(pick(n_sub)),
              pick(n_events));
      }
      used = saved;
      text += inner + "}\n";
    } else {
      text += "state " + name + (i == 0 ? " initial" : "") + (goal ? " goal" : "") + "\n";
    }
    if (i > 0) trans(top_trans, "S" + std::to_string(i - 1), name, pick(n_events));
  }
  for (int k = pick(8); k > 0; --k) {
    int a = pick(n_top - 1);  // never leave the goal
    trans(top_trans, "S" + std::to_string(a), "S" + std::to_string(pick(n_top)), pick(n_events));
  }
  return text + top_trans;
}

TEST(Flatten, MatchesHierarchicalExecutionOnRandomMachines) {
  std::mt19937 gen(20260101);
  for (int trial = 0; trial < 300; ++trial) {
    const std::string text = RandomMachineText(gen);
    FlightStateMachine sm = ParseStateMachine(text);
    FlightStateMachine flat = Flatten(sm);
    ASSERT_TRUE(flat.is_flat()) << text;
    ASSERT_LE(flat.states.size(), 20u);
    EXPECT_EQ(Flatten(flat), flat) << text;

    // Breadth-first over hierarchical configurations.
    std::set<Config> seen{Enter(sm, sm.initial)};
    std::vector<Config> queue(seen.begin(), seen.end());
    ASSERT_EQ(queue[0].Name(), flat.initial) << text;
    for (std::size_t q = 0; q < queue.size(); ++q) {
      const Config c = queue[q];
      for (const auto& e : sm.events) {
        auto h = HierStep(sm, c, e);
        auto f = NextState(flat, c.Name(), e);
        ASSERT_EQ(h.has_value(), f.has_value()) << text << c.Name() << " " << e;
        if (!h) continue;
        ASSERT_EQ(h->Name(), *f) << text;
        if (seen.insert(*h).second) queue.push_back(*h);
      }
    }
    // Both machines reach the same states. Inner transitions shadow outer
    // ones, so a spine does not guarantee that every state is reachable.
    std::set<std::string> reached;
    for (const auto& c : seen) reached.insert(c.Name());
    std::set<std::string> flat_reached{flat.initial};
    std::vector<std::string> todo{flat.initial};
    while (!todo.empty()) {
      const std::string s = todo.back();
      todo.pop_back();
      for (const auto& e : flat.events) {
        auto f = NextState(flat, s, e);
        if (f && flat_reached.insert(*f).second) todo.push_back(*f);
      }
    }
    EXPECT_EQ(reached, flat_reached) << text;
  }
}

}  // namespace
}  // namespace uast
