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

#include "uast/error.h"
#include "uast/sim.h"

namespace uast {

ReplayBackend::ReplayBackend(std::string_view records,
                             std::shared_ptr<const BehaviorModel> model,
                             std::shared_ptr<const DomainSchema> schema,
                             int max_steps)
    : model_(std::move(model)), schema_(std::move(schema)), max_steps_(max_steps) {
  if (max_steps_ <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "max_steps must be positive");
  }
  int line_no = 0;
  std::int64_t last_tick = -1;
  for (std::string_view raw : SplitLines(records)) {
    ++line_no;
    auto tokens = Tokenize(StripComment(raw, "#"));
    if (tokens.empty()) continue;
    auto tick = ParseInt(tokens[0].text);
    if (!tick || *tick < 0) {
      throw ParseError(line_no, tokens[0].column, "expected a tick number");
    }
    if (*tick <= last_tick) {
      throw ParseError(line_no, tokens[0].column, "ticks must increase");
    }
    last_tick = *tick;
    std::map<std::string, double> values;
    for (std::size_t i = 1; i < tokens.size(); ++i) {
      std::string_view t = tokens[i].text;
      std::size_t eq = t.find('=');
      auto v = eq == std::string_view::npos ? std::nullopt
                                            : ParseDouble(t.substr(eq + 1));
      if (!v) {
        throw ParseError(line_no, tokens[i].column, "expected path=value");
      }
      std::string path(t.substr(0, eq));
      if (!schema_->FindSlot(path)) {
        throw ParseError(line_no, tokens[i].column,
                         "unknown field path '" + path + "'");
      }
      values[path] = *v;
    }
    records_.emplace_back(*tick, std::move(values));
  }
}

void ReplayBackend::Apply(std::int64_t tick) {
  std::map<std::string, double> merged;
  while (next_record_ < records_.size() && records_[next_record_].first <= tick) {
    for (const auto& [p, v] : records_[next_record_].second) merged[p] = v;
    ++next_record_;
  }
  snapshot_ = Populate(snapshot_, merged, model_->state_name(state_), tick);
}

StepOutcome ReplayBackend::Reset(std::uint64_t /*seed*/) {
  state_ = model_->initial_state();
  next_record_ = 0;
  snapshot_ = MakeSnapshot(schema_, model_->state_name(state_));
  status_ = TerminalKind::kRunning;
  reset_ = true;
  Apply(0);
  StepOutcome out;
  out.snapshot = snapshot_;
  out.flight_state = snapshot_.flight_state;
  return out;
}

StepOutcome ReplayBackend::Step(std::size_t action) {
  if (!reset_) throw Error(ErrorCode::kState, "environment was not reset");
  if (status_ != TerminalKind::kRunning) {
    throw Error(ErrorCode::kState, "episode already terminated");
  }
  StepOutcome out;
  int next = model_->Next(state_, action);
  out.action_correct = next >= 0;
  if (next >= 0) state_ = static_cast<std::size_t>(next);
  Apply(snapshot_.tick + 1);
  auto alt = schema_->TupleSlot(1);
  bool grounded = !alt || snapshot_.values[*alt] == 0.0;
  if (model_->IsGoal(state_) && grounded) {
    status_ = TerminalKind::kGoal;
  } else if (snapshot_.tick >= max_steps_) {
    status_ = TerminalKind::kStepLimit;
  }
  out.snapshot = snapshot_;
  out.flight_state = snapshot_.flight_state;
  out.goal_reached = status_ == TerminalKind::kGoal;
  out.status = status_;
  return out;
}

}  // namespace uast
