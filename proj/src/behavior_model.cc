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

#include <algorithm>
#include <deque>
#include <map>
#include <utility>

#include "uast/error.h"
#include "uast/text.h"

namespace uast {

namespace {

constexpr std::string_view kPhases[] = {
    "Disarmed",     "Armed",        "Taxiing",     "Takeoff",
    "Climb",        "Cruise",       "Descent",     "AltitudeHold",
    "PositionHold", "Loiter",       "Circle",      "Flipping",
    "Drifting",     "FlyingStraight", "TurningLeft", "TurningRight",
    "Approach",     "Landing",
};

struct PendingTransition {
  Transition t;
  int event_column = 0;
  int target_column = 0;
};

// Mutable form of one nesting level while parsing.
struct Level {
  FlightStateMachine sm;
  std::map<std::string, int> state_lines;
  std::vector<PendingTransition> pending;
  std::vector<int> initial_lines;
  std::vector<int> goal_lines;
  int open_line = 0;  // line of the 'composite' header, 0 for top level
  std::string name;   // composite name
};

struct EventDecl {
  int line;
};

class MachineParser {
 public:
  explicit MachineParser(std::string_view text) : lines_(SplitLines(text)) {}

  FlightStateMachine Parse() {
    std::size_t index = 0;
    Level top;
    ParseBlock(index, top);
    if (top.sm.states.empty()) throw ParseError(1, 0, "no states declared");
    FinishLevel(top, /*top_level=*/true);
    top.sm.events = event_order_;
    return std::move(top.sm);
  }

 private:
  [[noreturn]] void Fail(int line, int column, const std::string& msg) const {
    throw ParseError(line, column, msg);
  }

  // Parses declarations until '}' (nested) or end of input (top level).
  void ParseBlock(std::size_t& index, Level& level) {
    while (index < lines_.size()) {
      const int line_no = static_cast<int>(index) + 1;
      std::string_view line = StripComment(lines_[index], "#");
      ++index;
      auto tokens = Tokenize(line);
      if (tokens.empty()) continue;
      std::string_view kw = tokens[0].text;
      if (kw == "}") {
        if (level.open_line == 0) Fail(line_no, tokens[0].column, "unmatched '}'");
        if (tokens.size() > 1) {
          Fail(line_no, tokens[1].column, "unexpected text after '}'");
        }
        return;
      }
      if (kw == "event") {
        ParseEvent(line_no, tokens);
      } else if (kw == "state") {
        ParseState(line_no, tokens, level, /*composite=*/false, index);
      } else if (kw == "composite") {
        ParseState(line_no, tokens, level, /*composite=*/true, index);
      } else if (kw == "trans") {
        ParseTransition(line_no, tokens, level);
      } else {
        Fail(line_no, tokens[0].column,
             "unknown declaration '" + std::string(kw) + "'");
      }
    }
    if (level.open_line != 0) {
      Fail(level.open_line, 0,
           "composite '" + level.name + "' is missing its closing '}'");
    }
  }

  void ParseEvent(int line_no, const std::vector<Token>& tokens) {
    if (tokens.size() < 2) Fail(line_no, 0, "expected event name");
    std::string name(tokens[1].text);
    if (!IsIdentifier(name)) {
      Fail(line_no, tokens[1].column, "invalid event name '" + name + "'");
    }
    for (std::size_t i = 2; i < tokens.size(); ++i) {
      std::string_view attr = tokens[i].text;
      if (attr.rfind("kind=", 0) == 0) {
        std::string_view kind = attr.substr(5);
        if (kind == "call") continue;
        if (kind == "signal" || kind == "time" || kind == "change") {
          Fail(line_no, tokens[i].column,
               "event '" + name + "': only call events are supported, got '" +
                   std::string(kind) + "'");
        }
        Fail(line_no, tokens[i].column,
             "unknown event kind '" + std::string(kind) + "'");
      }
      Fail(line_no, tokens[i].column,
           "unexpected attribute '" + std::string(attr) + "'");
    }
    if (events_.count(name)) {
      Fail(line_no, tokens[1].column, "duplicate event '" + name + "'");
    }
    events_[name] = {line_no};
    event_order_.push_back(name);
  }

  void ParseState(int line_no, const std::vector<Token>& tokens, Level& level,
                  bool composite, std::size_t& index) {
    std::size_t end = tokens.size();
    if (composite) {
      if (tokens.back().text != "{") {
        Fail(line_no, 0, "composite declaration must end with '{'");
      }
      --end;
    }
    if (end < 2) Fail(line_no, 0, "expected state name");
    StateDef def;
    def.name = std::string(tokens[1].text);
    if (!IsIdentifier(def.name)) {
      Fail(line_no, tokens[1].column, "invalid state name '" + def.name + "'");
    }
    for (std::size_t i = 2; i < end; ++i) {
      std::string_view attr = tokens[i].text;
      if (attr == "initial") {
        def.initial = true;
        level.initial_lines.push_back(line_no);
      } else if (attr == "goal") {
        def.goal = true;
        level.goal_lines.push_back(line_no);
      } else if (attr.rfind("stereotype=", 0) == 0) {
        auto phase = CanonicalPhase(attr.substr(11));
        if (!phase) {
          Fail(line_no, tokens[i].column + 11,
               "unknown flight-phase stereotype '" +
                   std::string(attr.substr(11)) + "'");
        }
        def.stereotype = *phase;
      } else {
        Fail(line_no, tokens[i].column,
             "unexpected attribute '" + std::string(attr) + "'");
      }
    }
    if (level.state_lines.count(def.name)) {
      Fail(line_no, tokens[1].column, "duplicate state '" + def.name + "'");
    }
    level.state_lines[def.name] = line_no;
    if (composite) {
      Level child;
      child.open_line = line_no;
      child.name = def.name;
      ParseBlock(index, child);
      if (child.sm.states.empty()) {
        Fail(line_no, 0, "composite '" + def.name + "' declares no substates");
      }
      FinishLevel(child, /*top_level=*/false);
      def.substates =
          std::make_shared<const FlightStateMachine>(std::move(child.sm));
    }
    level.sm.states.push_back(std::move(def));
  }

  void ParseTransition(int line_no, const std::vector<Token>& tokens,
                       Level& level) {
    if (tokens.size() != 4) {
      Fail(line_no, 0, "expected 'trans <Source> --<event>--> <Target>'");
    }
    std::string_view arrow = tokens[2].text;
    if (arrow.size() < 6 || arrow.substr(0, 2) != "--" ||
        arrow.substr(arrow.size() - 3) != "-->") {
      Fail(line_no, tokens[2].column, "expected '--<event>-->'");
    }
    PendingTransition p;
    p.t.source = std::string(tokens[1].text);
    p.t.event = std::string(arrow.substr(2, arrow.size() - 5));
    p.t.target = std::string(tokens[3].text);
    p.t.line = line_no;
    p.event_column = tokens[2].column + 2;
    p.target_column = tokens[3].column;
    if (!IsIdentifier(p.t.source)) {
      Fail(line_no, tokens[1].column, "invalid state name '" + p.t.source + "'");
    }
    if (!IsIdentifier(p.t.event)) {
      Fail(line_no, p.event_column, "invalid event name '" + p.t.event + "'");
    }
    if (!IsIdentifier(p.t.target)) {
      Fail(line_no, p.target_column, "invalid state name '" + p.t.target + "'");
    }
    level.pending.push_back(std::move(p));
  }

  void FinishLevel(Level& level, bool top_level) {
    const std::string where =
        top_level ? std::string("machine") : "composite '" + level.name + "'";
    const int anchor = top_level ? 1 : level.open_line;
    if (level.initial_lines.empty()) {
      Fail(anchor, 0, where + " has no initial state");
    }
    if (level.initial_lines.size() > 1) {
      Fail(level.initial_lines[1], 0, where + " declares a second initial state");
    }
    if (top_level) {
      if (level.goal_lines.empty()) Fail(anchor, 0, "machine has no goal state");
      if (level.goal_lines.size() > 1) {
        Fail(level.goal_lines[1], 0, "machine declares a second goal state");
      }
    } else if (!level.goal_lines.empty()) {
      Fail(level.goal_lines[0], 0, "goal state must be declared at top level");
    }
    for (const auto& s : level.sm.states) {
      if (s.initial) level.sm.initial = s.name;
      if (s.goal) {
        if (s.is_composite()) {
          Fail(level.state_lines[s.name], 0, "goal state cannot be composite");
        }
        level.sm.goal = s.name;
      }
    }

    std::set<std::pair<std::string, std::string>> seen;
    for (auto& p : level.pending) {
      const Transition& t = p.t;
      if (!level.state_lines.count(t.source)) {
        Fail(t.line, 0, "undeclared state '" + t.source + "' in " + where);
      }
      if (!level.state_lines.count(t.target)) {
        Fail(t.line, p.target_column,
             "undeclared state '" + t.target + "' in " + where);
      }
      if (!events_.count(t.event)) {
        Fail(t.line, p.event_column, "undeclared event '" + t.event + "'");
      }
      if (!seen.insert({t.source, t.event}).second) {
        Fail(t.line, 0,
             "duplicate transition from '" + t.source + "' on '" + t.event +
                 "'");
      }
      level.sm.transitions.push_back(t);
    }

    // Every state at this level must be reachable from the initial state.
    std::set<std::string> reached{level.sm.initial};
    std::deque<std::string> queue{level.sm.initial};
    while (!queue.empty()) {
      std::string s = queue.front();
      queue.pop_front();
      for (const auto& t : level.sm.transitions) {
        if (t.source == s && reached.insert(t.target).second) {
          queue.push_back(t.target);
        }
      }
    }
    for (const auto& s : level.sm.states) {
      if (!reached.count(s.name)) {
        Fail(level.state_lines[s.name], 0,
             "state '" + s.name + "' is not reachable from '" +
                 level.sm.initial + "'");
      }
    }
  }

  std::vector<std::string_view> lines_;
  std::map<std::string, EventDecl> events_;
  std::vector<std::string> event_order_;
};

std::string Qualify(const std::string& parent, const std::string& child) {
  return parent + "." + child;
}

const FlightStateMachine& RequireFlat(const FlightStateMachine& sm) {
  if (!sm.is_flat()) {
    throw Error(ErrorCode::kState, "state machine is not flattened");
  }
  return sm;
}

void RequireState(const FlightStateMachine& sm, std::string_view state) {
  if (!sm.FindState(state)) {
    throw Error(ErrorCode::kNotFound,
                "unknown state '" + std::string(state) + "'");
  }
}

}  // namespace

std::optional<std::string> CanonicalPhase(std::string_view name) {
  if (name == "Ascend") return "Climb";
  if (name == "Descend") return "Descent";
  if (name == "TakeOff") return "Takeoff";
  for (std::string_view p : kPhases) {
    if (p == name) return std::string(p);
  }
  return std::nullopt;
}

bool StateDef::operator==(const StateDef& other) const {
  if (name != other.name || stereotype != other.stereotype ||
      initial != other.initial || goal != other.goal ||
      context_stereotype != other.context_stereotype) {
    return false;
  }
  if (is_composite() != other.is_composite()) return false;
  return !is_composite() || *substates == *other.substates;
}

bool FlightStateMachine::operator==(const FlightStateMachine& other) const {
  return states == other.states && events == other.events &&
         transitions == other.transitions && initial == other.initial &&
         goal == other.goal;
}

bool FlightStateMachine::is_flat() const {
  return std::none_of(states.begin(), states.end(),
                      [](const StateDef& s) { return s.is_composite(); });
}

const StateDef* FlightStateMachine::FindState(std::string_view name) const {
  for (const auto& s : states) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

bool FlightStateMachine::HasEvent(std::string_view name) const {
  return std::find(events.begin(), events.end(), name) != events.end();
}

std::size_t FlightStateMachine::TotalTransitionCount() const {
  std::size_t n = transitions.size();
  for (const auto& s : states) {
    if (s.is_composite()) n += s.substates->TotalTransitionCount();
  }
  return n;
}

std::set<std::string> FlightStateMachine::AllStateNames() const {
  std::set<std::string> names;
  for (const auto& s : states) {
    names.insert(s.name);
    if (s.is_composite()) {
      for (const auto& inner : s.substates->AllStateNames()) {
        names.insert(inner);
        names.insert(Qualify(s.name, inner));
      }
    }
  }
  return names;
}

FlightStateMachine ParseStateMachine(std::string_view text) {
  return MachineParser(text).Parse();
}

FlightStateMachine Flatten(const FlightStateMachine& sm) {
  FlightStateMachine out;
  out.events = sm.events;
  out.goal = sm.goal;

  // Flattened name of the state entered when a transition targets `name`,
  // and the set of flattened states a transition out of `name` leaves from.
  std::map<std::string, std::string> entry;
  std::map<std::string, std::vector<std::string>> expansion;
  std::set<std::pair<std::string, std::string>> taken;

  for (const auto& s : sm.states) {
    if (!s.is_composite()) {
      StateDef flat = s;
      out.states.push_back(std::move(flat));
      entry[s.name] = s.name;
      expansion[s.name] = {s.name};
      continue;
    }
    if (s.substates->initial.empty()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "composite state '" + s.name + "' has no initial substate");
    }
    FlightStateMachine inner = Flatten(*s.substates);
    const std::string& context =
        s.stereotype.empty() ? std::string() : s.stereotype;
    for (const auto& sub : inner.states) {
      StateDef flat;
      flat.name = Qualify(s.name, sub.name);
      flat.stereotype = sub.stereotype.empty() ? s.stereotype : sub.stereotype;
      flat.context_stereotype =
          context.empty() ? sub.context_stereotype : context;
      expansion[s.name].push_back(flat.name);
      out.states.push_back(std::move(flat));
    }
    entry[s.name] = Qualify(s.name, inner.initial);
    for (const auto& t : inner.transitions) {
      Transition q{Qualify(s.name, t.source), t.event,
                   Qualify(s.name, t.target), t.line};
      taken.insert({q.source, q.event});
      out.transitions.push_back(std::move(q));
    }
  }

  for (auto& st : out.states) {
    st.initial = false;
    st.goal = false;
  }

  for (const auto& t : sm.transitions) {
    const std::string& target = entry.at(t.target);
    for (const auto& src : expansion.at(t.source)) {
      if (!taken.insert({src, t.event}).second) continue;
      out.transitions.push_back({src, t.event, target, t.line});
    }
  }

  out.initial = entry.at(sm.initial);
  for (auto& st : out.states) {
    if (st.name == out.initial) st.initial = true;
    if (!out.goal.empty() && st.name == out.goal) st.goal = true;
  }
  return out;
}

std::set<std::string> LegalActions(const FlightStateMachine& sm,
                                   std::string_view state) {
  RequireFlat(sm);
  RequireState(sm, state);
  std::set<std::string> out;
  for (const auto& t : sm.transitions) {
    if (t.source == state) out.insert(t.event);
  }
  return out;
}

std::optional<std::string> NextState(const FlightStateMachine& sm,
                                     std::string_view state,
                                     std::string_view event) {
  RequireFlat(sm);
  RequireState(sm, state);
  if (!sm.HasEvent(event)) {
    throw Error(ErrorCode::kNotFound,
                "unknown event '" + std::string(event) + "'");
  }
  for (const auto& t : sm.transitions) {
    if (t.source == state && t.event == event) return t.target;
  }
  return std::nullopt;
}

bool IsGoal(const FlightStateMachine& sm, std::string_view state) {
  RequireFlat(sm);
  RequireState(sm, state);
  return state == sm.goal;
}

bool InState(std::string_view state, std::string_view scope) {
  if (state.size() < scope.size()) return false;
  if (state.compare(0, scope.size(), scope) != 0) return false;
  return state.size() == scope.size() || state[scope.size()] == '.';
}

std::string_view TopLevelState(std::string_view state) {
  std::size_t dot = state.find('.');
  return dot == std::string_view::npos ? state : state.substr(0, dot);
}

BehaviorModel::BehaviorModel(FlightStateMachine flat)
    : machine_(std::move(flat)) {
  RequireFlat(machine_);
  const std::size_t n = machine_.states.size();
  const std::size_t a = machine_.events.size();
  table_.assign(n * a, -1);
  for (const auto& t : machine_.transitions) {
    std::size_t s = StateIndex(t.source);
    std::size_t e = ActionIndex(t.event);
    table_[s * a + e] = static_cast<int>(StateIndex(t.target));
  }
  initial_ = StateIndex(machine_.initial);
  goal_ = StateIndex(machine_.goal);
  for (std::size_t s = 0; s < n; ++s) {
    if (s != goal_ && LegalActionIndices(s).empty()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "state '" + machine_.states[s].name +
                      "' has no outgoing transitions and is not the goal");
    }
  }
}

std::size_t BehaviorModel::StateIndex(std::string_view name) const {
  for (std::size_t i = 0; i < machine_.states.size(); ++i) {
    if (machine_.states[i].name == name) return i;
  }
  throw Error(ErrorCode::kNotFound, "unknown state '" + std::string(name) + "'");
}

std::size_t BehaviorModel::ActionIndex(std::string_view name) const {
  for (std::size_t i = 0; i < machine_.events.size(); ++i) {
    if (machine_.events[i] == name) return i;
  }
  throw Error(ErrorCode::kNotFound, "unknown event '" + std::string(name) + "'");
}

std::vector<std::size_t> BehaviorModel::LegalActionIndices(
    std::size_t state) const {
  std::vector<std::size_t> out;
  for (std::size_t a = 0; a < action_count(); ++a) {
    if (IsLegal(state, a)) out.push_back(a);
  }
  return out;
}

}  // namespace uast
