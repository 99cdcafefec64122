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

#include "uast/script.h"

#include "uast/error.h"
#include "uast/text.h"

namespace uast {

namespace {

std::string Expand(const std::string& line, std::size_t step,
                   const std::string& action, const std::string& source,
                   const std::string& state) {
  std::string out;
  for (std::size_t i = 0; i < line.size();) {
    if (line[i] == '{') {
      std::size_t close = line.find('}', i);
      if (close != std::string::npos) {
        std::string_view key(line.data() + i + 1, close - i - 1);
        const std::string* value = nullptr;
        std::string step_text;
        if (key == "step") {
          step_text = std::to_string(step);
          value = &step_text;
        } else if (key == "action") {
          value = &action;
        } else if (key == "source") {
          value = &source;
        } else if (key == "state") {
          value = &state;
        }
        if (value) {
          out += *value;
          i = close + 1;
          continue;
        }
      }
    }
    out += line[i++];
  }
  return out;
}

}  // namespace

CommandTemplate ParseTemplate(std::string_view text) {
  CommandTemplate t;
  std::vector<std::string>* body = nullptr;
  int open_line = 0;
  int line_no = 0;
  for (std::string_view raw : SplitLines(text)) {
    ++line_no;
    std::string_view trimmed = Trim(raw);
    if (body) {
      if (trimmed == "end") {
        body = nullptr;
      } else {
        body->emplace_back(raw);
      }
      continue;
    }
    if (trimmed.empty() || trimmed.front() == '#') continue;
    auto tokens = Tokenize(trimmed);
    std::string_view kw = tokens[0].text;
    if (kw == "comment") {
      if (tokens.size() != 2) throw ParseError(line_no, 0, "expected 'comment <prefix>'");
      t.comment = std::string(tokens[1].text);
      continue;
    }
    std::size_t arrow = trimmed.find("=>");
    if (arrow == std::string_view::npos) {
      throw ParseError(line_no, 0, "expected '=>' to open a block");
    }
    std::string_view head = Trim(trimmed.substr(0, arrow));
    std::string_view rest = Trim(trimmed.substr(arrow + 2));
    if (head == "prologue") {
      body = &t.prologue;
    } else if (head == "epilogue") {
      body = &t.epilogue;
    } else if (head.rfind("action", 0) == 0) {
      std::string name(Trim(head.substr(6)));
      if (!IsIdentifier(name)) {
        throw ParseError(line_no, 0, "expected 'action <Name> =>'");
      }
      if (t.actions.count(name)) {
        throw ParseError(line_no, 0, "duplicate template for action '" + name + "'");
      }
      body = &t.actions[name];
    } else {
      throw ParseError(line_no, 1, "unknown block '" + std::string(head) + "'");
    }
    open_line = line_no;
    if (!rest.empty()) body->emplace_back(rest);
  }
  if (body) throw ParseError(open_line, 0, "block is missing its 'end'");
  return t;
}

std::string ExportScript(const EpisodeTrace& trace, const CommandTemplate& tmpl,
                         std::uint64_t seed) {
  for (const auto& s : trace.steps) {
    if (s.correct && !tmpl.actions.count(s.action)) {
      throw Error(ErrorCode::kNotFound,
                  "template has no entry for action '" + s.action + "'");
    }
  }
  const std::string& c = tmpl.comment;
  std::string out;
  out += c + " Generated test script: episode " + std::to_string(trace.episode) +
         ", seed " + std::to_string(seed) + "\n";
  out += c + " " + std::to_string(trace.steps.size()) + " steps, terminal: " +
         std::string(TerminalKindName(trace.terminal)) + "\n";
  if (trace.steps.empty()) return out;
  for (const auto& line : tmpl.prologue) out += line + "\n";
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const StepRecord& s = trace.steps[i];
    const std::string& source = trace.StateBefore(i);
    if (!s.correct) {
      out += c + " step " + std::to_string(i + 1) + ": " + s.action +
             " rejected in " + source + "\n";
      continue;
    }
    for (const auto& line : tmpl.actions.at(s.action)) {
      out += Expand(line, i + 1, s.action, source, s.state) + "\n";
    }
  }
  for (const auto& line : tmpl.epilogue) out += line + "\n";
  return out;
}

std::vector<std::string> ReplayScript(std::string_view script, Environment& env,
                                      std::uint64_t seed) {
  env.Reset(seed);
  std::vector<std::string> states;
  int line_no = 0;
  for (std::string_view raw : SplitLines(script)) {
    ++line_no;
    auto tokens = Tokenize(StripComment(raw, "#"));
    if (tokens.empty()) continue;
    if (tokens.size() != 2 || tokens[0].text != "step") {
      throw ParseError(line_no, 1, "expected 'step <event>'");
    }
    if (env.Status() != TerminalKind::kRunning) {
      throw Error(ErrorCode::kState,
                  "script continues after the episode terminated (line " +
                      std::to_string(line_no) + ")");
    }
    StepOutcome out = env.Step(tokens[1].text);
    states.push_back(out.flight_state);
  }
  return states;
}

}  // namespace uast
