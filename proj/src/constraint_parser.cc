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

#include <cctype>

#include "uast/constraint.h"
#include "uast/error.h"
#include "uast/text.h"

namespace uast {

namespace {

enum class Tok { kIdent, kNumber, kOp, kLParen, kRParen, kColon, kMinus, kEnd };

struct Lexeme {
  Tok kind;
  std::string_view text;
  int column;
};

bool IdentHead(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool IdentTail(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
}

std::vector<Lexeme> Lex(std::string_view line, int line_no) {
  std::vector<Lexeme> out;
  std::size_t i = 0;
  auto col = [&](std::size_t p) { return static_cast<int>(p) + 1; };
  while (i < line.size()) {
    char c = line[i];
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      continue;
    }
    std::size_t start = i;
    if (IdentHead(c)) {
      while (i < line.size() && IdentTail(line[i])) ++i;
      out.push_back({Tok::kIdent, line.substr(start, i - start), col(start)});
    } else if (std::isdigit(static_cast<unsigned char>(c)) ||
               (c == '.' && i + 1 < line.size() &&
                std::isdigit(static_cast<unsigned char>(line[i + 1])))) {
      while (i < line.size() &&
             (std::isdigit(static_cast<unsigned char>(line[i])) ||
              line[i] == '.')) {
        ++i;
      }
      if (i < line.size() && (line[i] == 'e' || line[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < line.size() && (line[j] == '+' || line[j] == '-')) ++j;
        if (j < line.size() && std::isdigit(static_cast<unsigned char>(line[j]))) {
          i = j;
          while (i < line.size() &&
                 std::isdigit(static_cast<unsigned char>(line[i]))) {
            ++i;
          }
        }
      }
      out.push_back({Tok::kNumber, line.substr(start, i - start), col(start)});
    } else if (c == '(') {
      out.push_back({Tok::kLParen, line.substr(i++, 1), col(start)});
    } else if (c == ')') {
      out.push_back({Tok::kRParen, line.substr(i++, 1), col(start)});
    } else if (c == ':') {
      out.push_back({Tok::kColon, line.substr(i++, 1), col(start)});
    } else if (c == '-') {
      out.push_back({Tok::kMinus, line.substr(i++, 1), col(start)});
    } else if (c == '>' || c == '<' || c == '=') {
      ++i;
      if (i < line.size() &&
          ((c != '=' && line[i] == '=') || (c == '<' && line[i] == '>'))) {
        ++i;
      }
      out.push_back({Tok::kOp, line.substr(start, i - start), col(start)});
    } else {
      throw ParseError(line_no, col(start),
                       "unexpected character '" + std::string(1, c) + "'");
    }
  }
  out.push_back({Tok::kEnd, {}, col(line.size())});
  return out;
}

std::string_view StripSelf(std::string_view name) {
  if (name.rfind("self.", 0) == 0) name.remove_prefix(5);
  return name;
}

class ExprParser {
 public:
  ExprParser(std::vector<Lexeme> lex, int line_no, const DomainSchema& schema,
             const std::set<std::string>& states)
      : lex_(std::move(lex)), line_(line_no), schema_(schema), states_(states) {}

  // <id> ':' 'context' <Class> 'inv' ':' <expr>
  Constraint ParseLine() {
    Constraint c;
    c.line = line_;
    const Lexeme& id = Expect(Tok::kIdent, "expected constraint id");
    c.id = std::string(id.text);
    Expect(Tok::kColon, "expected ':' after constraint id");
    ExpectWord("context");
    const Lexeme& ctx = Expect(Tok::kIdent, "expected context class");
    c.context = std::string(ctx.text);
    if (!schema_.IsContext(c.context)) {
      Fail(ctx.column, "unknown context '" + c.context + "'");
    }
    ExpectWord("inv");
    Expect(Tok::kColon, "expected ':' after 'inv'");
    auto e = ParseOr();
    if (Peek().kind != Tok::kEnd) Fail(Peek().column, "unexpected trailing input");

    std::vector<std::shared_ptr<const Expr>> conj;
    Conjuncts(e, conj);
    if (conj.front()->kind == Expr::Kind::kInState) {
      c.scope = conj.front()->state;
      conj.erase(conj.begin());
      if (conj.empty()) {
        auto t = std::make_shared<Expr>();
        t->kind = Expr::Kind::kBool;
        t->value = true;
        c.body = t;
      } else if (conj.size() == 1) {
        c.body = conj.front();
      } else {
        auto a = std::make_shared<Expr>();
        a->kind = Expr::Kind::kAnd;
        a->args = std::move(conj);
        c.body = a;
      }
    } else {
      c.body = e;
    }
    return c;
  }

 private:
  [[noreturn]] void Fail(int column, const std::string& msg) const {
    throw ParseError(line_, column, msg);
  }

  const Lexeme& Peek() const { return lex_[pos_]; }
  const Lexeme& Next() { return lex_[pos_ < lex_.size() - 1 ? pos_++ : pos_]; }

  const Lexeme& Expect(Tok kind, const char* msg) {
    if (Peek().kind != kind) Fail(Peek().column, msg);
    return Next();
  }

  void ExpectWord(std::string_view word) {
    if (Peek().kind != Tok::kIdent || Peek().text != word) {
      Fail(Peek().column, "expected '" + std::string(word) + "'");
    }
    Next();
  }

  bool AcceptWord(std::string_view word) {
    if (Peek().kind == Tok::kIdent && Peek().text == word) {
      Next();
      return true;
    }
    return false;
  }

  static void Conjuncts(const std::shared_ptr<const Expr>& e,
                        std::vector<std::shared_ptr<const Expr>>& out) {
    if (e->kind == Expr::Kind::kAnd) {
      for (const auto& a : e->args) Conjuncts(a, out);
    } else {
      out.push_back(e);
    }
  }

  std::shared_ptr<const Expr> ParseOr() {
    auto lhs = ParseAnd();
    while (AcceptWord("or")) {
      auto node = std::make_shared<Expr>();
      node->kind = Expr::Kind::kOr;
      node->args = {lhs, ParseAnd()};
      lhs = node;
    }
    return lhs;
  }

  std::shared_ptr<const Expr> ParseAnd() {
    auto lhs = ParseUnary();
    while (AcceptWord("and")) {
      auto node = std::make_shared<Expr>();
      node->kind = Expr::Kind::kAnd;
      node->args = {lhs, ParseUnary()};
      lhs = node;
    }
    return lhs;
  }

  std::shared_ptr<const Expr> ParseUnary() {
    if (AcceptWord("not")) {
      auto node = std::make_shared<Expr>();
      node->kind = Expr::Kind::kNot;
      node->args = {ParseUnary()};
      return node;
    }
    return ParsePrimary();
  }

  std::shared_ptr<const Expr> ParsePrimary() {
    const Lexeme& t = Peek();
    if (t.kind == Tok::kLParen) {
      Next();
      auto e = ParseOr();
      Expect(Tok::kRParen, "expected ')'");
      return e;
    }
    if (t.kind == Tok::kIdent && (t.text == "true" || t.text == "false")) {
      Next();
      auto node = std::make_shared<Expr>();
      node->kind = Expr::Kind::kBool;
      node->value = t.text == "true";
      return node;
    }
    if (t.kind == Tok::kIdent && StripSelf(t.text) == "oclIsInState") {
      Next();
      Expect(Tok::kLParen, "expected '(' after oclIsInState");
      const Lexeme& s = Expect(Tok::kIdent, "expected state name");
      if (!states_.count(std::string(s.text))) {
        Fail(s.column, "unknown state '" + std::string(s.text) + "'");
      }
      Expect(Tok::kRParen, "expected ')'");
      auto node = std::make_shared<Expr>();
      node->kind = Expr::Kind::kInState;
      node->state = std::string(s.text);
      return node;
    }
    auto node = std::make_shared<Expr>();
    node->kind = Expr::Kind::kCompare;
    node->lhs = ParseOperand();
    const Lexeme& op = Peek();
    if (op.kind != Tok::kOp) Fail(op.column, "expected comparison operator");
    Next();
    if (op.text == ">") node->op = CmpOp::kGt;
    else if (op.text == ">=") node->op = CmpOp::kGe;
    else if (op.text == "<") node->op = CmpOp::kLt;
    else if (op.text == "<=") node->op = CmpOp::kLe;
    else if (op.text == "=") node->op = CmpOp::kEq;
    else node->op = CmpOp::kNe;
    node->rhs = ParseOperand();
    return node;
  }

  Expr::Operand ParseOperand() {
    Expr::Operand o;
    const Lexeme& t = Peek();
    if (t.kind == Tok::kMinus || t.kind == Tok::kNumber) {
      bool negative = t.kind == Tok::kMinus;
      if (negative) Next();
      const Lexeme& n = Expect(Tok::kNumber, "expected number after '-'");
      auto v = ParseDouble(n.text);
      if (!v) Fail(n.column, "malformed number '" + std::string(n.text) + "'");
      o.number = negative ? -*v : *v;
      return o;
    }
    if (t.kind != Tok::kIdent) Fail(t.column, "expected number or field path");
    Next();
    std::string_view name = StripSelf(t.text);
    if (name != t.text || schema_.FindSlot(name)) {
      auto slot = schema_.FindSlot(name);
      if (!slot) Fail(t.column, "unknown field path '" + std::string(name) + "'");
      o.is_path = true;
      o.path = std::string(name);
      o.slot = *slot;
      return o;
    }
    if (auto code = schema_.EnumCode(name)) {
      o.number = *code;
      return o;
    }
    Fail(t.column, "unknown field path '" + std::string(name) + "'");
  }

  std::vector<Lexeme> lex_;
  std::size_t pos_ = 0;
  int line_;
  const DomainSchema& schema_;
  const std::set<std::string>& states_;
};

std::set<std::string> AcceptedStates(const FlightStateMachine& machine) {
  std::set<std::string> out;
  for (const auto& name : machine.AllStateNames()) {
    std::size_t dot = 0;
    while ((dot = name.find('.', dot)) != std::string::npos) {
      out.insert(name.substr(0, dot));
      ++dot;
    }
    out.insert(name);
  }
  return out;
}

std::string_view StripConstraintComment(std::string_view line) {
  std::size_t hash = line.find('#');
  std::size_t dash = line.find("--");
  return line.substr(0, std::min(hash, dash));
}

}  // namespace

std::string_view CmpOpText(CmpOp op) {
  switch (op) {
    case CmpOp::kGt: return ">";
    case CmpOp::kGe: return ">=";
    case CmpOp::kLt: return "<";
    case CmpOp::kLe: return "<=";
    case CmpOp::kEq: return "=";
    case CmpOp::kNe: return "<>";
  }
  return "?";
}

ConstraintSet ParseConstraints(std::string_view text,
                               const DomainSchema& schema,
                               const FlightStateMachine& machine) {
  const std::set<std::string> states = AcceptedStates(machine);
  ConstraintSet out;
  std::set<std::string> ids;
  int line_no = 0;
  for (std::string_view raw : SplitLines(text)) {
    ++line_no;
    std::string_view line = StripConstraintComment(raw);
    if (Trim(line).empty()) continue;
    ExprParser parser(Lex(line, line_no), line_no, schema, states);
    Constraint c = parser.ParseLine();
    if (!ids.insert(c.id).second) {
      throw ParseError(line_no, 1, "duplicate constraint id '" + c.id + "'");
    }
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace uast
