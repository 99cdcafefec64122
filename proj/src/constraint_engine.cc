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

#include "uast/constraint.h"
#include "uast/error.h"

namespace uast {

namespace {

double Value(const Expr::Operand& o, const std::vector<double>& values) {
  if (!o.is_path) return o.number;
  if (o.slot >= values.size()) {
    throw Error(ErrorCode::kState,
                "snapshot has no slot for '" + o.path + "'");
  }
  return values[o.slot];
}

}  // namespace

bool EvaluateExpr(const Expr& e, const std::vector<double>& values,
                  std::string_view flight_state) {
  switch (e.kind) {
    case Expr::Kind::kBool:
      return e.value;
    case Expr::Kind::kCompare: {
      double a = Value(e.lhs, values);
      double b = Value(e.rhs, values);
      switch (e.op) {
        case CmpOp::kGt: return a > b;
        case CmpOp::kGe: return a >= b;
        case CmpOp::kLt: return a < b;
        case CmpOp::kLe: return a <= b;
        case CmpOp::kEq: return a == b;
        case CmpOp::kNe: return a != b;
      }
      return false;
    }
    case Expr::Kind::kAnd:
      for (const auto& a : e.args) {
        if (!EvaluateExpr(*a, values, flight_state)) return false;
      }
      return true;
    case Expr::Kind::kOr:
      for (const auto& a : e.args) {
        if (EvaluateExpr(*a, values, flight_state)) return true;
      }
      return false;
    case Expr::Kind::kNot:
      return !EvaluateExpr(*e.args[0], values, flight_state);
    case Expr::Kind::kInState:
      return InState(flight_state, e.state);
  }
  return false;
}

EvalResult Evaluate(const ConstraintSet& constraints, const Snapshot& snapshot) {
  if (snapshot.schema &&
      snapshot.values.size() != snapshot.schema->field_count()) {
    throw Error(ErrorCode::kState, "snapshot does not match its schema");
  }
  EvalResult r;
  for (const auto& c : constraints) {
    if (c.scope && !InState(snapshot.flight_state, *c.scope)) continue;
    r.evaluated.push_back(c.id);
    if (!EvaluateExpr(*c.body, snapshot.values, snapshot.flight_state)) {
      r.failed.push_back(c.id);
    }
  }
  return r;
}

void ViolationLedger::Record(const std::string& state,
                             const EvalResult& result) {
  Record(state, result.failed);
}

void ViolationLedger::Record(const std::string& state,
                             const std::vector<std::string>& failed) {
  for (const auto& id : failed) ++counts_[{state, id}];
}

std::int64_t ViolationLedger::Total(const std::string& state,
                                    const std::string& id) const {
  auto it = counts_.find({state, id});
  return it == counts_.end() ? 0 : it->second;
}

std::int64_t ViolationLedger::StateTotal(const std::string& state) const {
  std::int64_t n = 0;
  for (const auto& [key, count] : counts_) {
    if (key.first == state) n += count;
  }
  return n;
}

std::size_t ViolationLedger::StateUnique(const std::string& state) const {
  std::size_t n = 0;
  for (const auto& [key, count] : counts_) {
    if (key.first == state && count > 0) ++n;
  }
  return n;
}

std::int64_t ViolationLedger::GrandTotal() const {
  std::int64_t n = 0;
  for (const auto& [key, count] : counts_) n += count;
  return n;
}

std::size_t ViolationLedger::GrandUnique() const { return counts_.size(); }

std::set<std::string> ViolationLedger::States() const {
  std::set<std::string> out;
  for (const auto& [key, count] : counts_) out.insert(key.first);
  return out;
}

}  // namespace uast
