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

// OCL-style invariants over domain snapshots.
//
// One constraint per line:
//
//   <id>: context <Class> inv: <expr>
//
//   expr    := or
//   or      := and ('or' and)*
//   and     := unary ('and' unary)*
//   unary   := 'not' unary | primary
//   primary := '(' expr ')' | 'true' | 'false'
//            | ['self.']oclIsInState '(' <State> ')'
//            | operand cmp operand
//   operand := number | '-' number | ['self.']<path> | <enum literal>
//   cmp     := '>' | '>=' | '<' | '<=' | '=' | '<>'
//
// Lines starting with '#' or '--' are comments, as is anything after them.
//
// A constraint whose top-level conjunction begins with oclIsInState(S) is a
// state invariant: the remaining conjuncts are evaluated only while the
// vehicle is in S (or one of its substates) and the constraint is skipped
// otherwise. All other constraints are general and always evaluated.

#ifndef UAST_CONSTRAINT_H_
#define UAST_CONSTRAINT_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "uast/behavior_model.h"
#include "uast/domain_model.h"

namespace uast {

enum class CmpOp { kGt, kGe, kLt, kLe, kEq, kNe };

std::string_view CmpOpText(CmpOp op);

struct Expr {
  enum class Kind { kBool, kCompare, kAnd, kOr, kNot, kInState };
  struct Operand {
    bool is_path = false;
    double number = 0;      // literal value (enum literals resolved to codes)
    std::string path;       // schema path when is_path
    std::size_t slot = 0;   // resolved slot when is_path
  };

  Kind kind = Kind::kBool;
  bool value = false;                              // kBool
  CmpOp op = CmpOp::kEq;                           // kCompare
  Operand lhs, rhs;                                // kCompare
  std::vector<std::shared_ptr<const Expr>> args;   // kAnd, kOr, kNot
  std::string state;                               // kInState
};

struct Constraint {
  std::string id;
  std::string context;
  std::optional<std::string> scope;  // nullopt for general constraints
  std::shared_ptr<const Expr> body;
  int line = 0;

  bool is_general() const { return !scope.has_value(); }
};

using ConstraintSet = std::vector<Constraint>;

// `machine` supplies the state names accepted by oclIsInState; both the
// hierarchical names and the flattened Parent.Sub forms are accepted.
ConstraintSet ParseConstraints(std::string_view text,
                               const DomainSchema& schema,
                               const FlightStateMachine& machine);

// Evaluates an expression against slot values in the given flight state.
bool EvaluateExpr(const Expr& e, const std::vector<double>& values,
                  std::string_view flight_state);

struct EvalResult {
  std::vector<std::string> evaluated;
  std::vector<std::string> failed;
  std::size_t m() const { return failed.size(); }
};

EvalResult Evaluate(const ConstraintSet& constraints, const Snapshot& snapshot);

// Per (flight state, constraint id) violation totals over a run.
class ViolationLedger {
 public:
  void Record(const std::string& state, const EvalResult& result);
  void Record(const std::string& state, const std::vector<std::string>& failed);

  std::int64_t Total(const std::string& state, const std::string& id) const;
  std::int64_t StateTotal(const std::string& state) const;
  std::size_t StateUnique(const std::string& state) const;
  std::int64_t GrandTotal() const;
  std::size_t GrandUnique() const;
  std::set<std::string> States() const;

  const std::map<std::pair<std::string, std::string>, std::int64_t>& counts()
      const {
    return counts_;
  }

 private:
  std::map<std::pair<std::string, std::string>, std::int64_t> counts_;
};

}  // namespace uast

#endif  // UAST_CONSTRAINT_H_
