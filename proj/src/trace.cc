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

#include "uast/trace.h"

#include "uast/error.h"
#include "uast/text.h"

namespace uast {

namespace {

std::vector<std::string_view> SplitComma(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return out;
}

}  // namespace

std::string FormatTrace(const EpisodeTrace& trace) {
  std::string out;
  const std::string ep = std::to_string(trace.episode);
  for (const auto& s : trace.steps) {
    out += ep;
    out += ',';
    out += std::to_string(s.tick);
    out += ',';
    out += s.state;
    out += ',';
    out += s.action;
    out += s.correct ? ",1," : ",0,";
    for (std::size_t i = 0; i < s.failed.size(); ++i) {
      if (i) out += ';';
      out += s.failed[i];
    }
    out += ',';
    out += FormatDouble(s.reward);
    out += '\n';
  }
  out += ep;
  out += ',';
  out += TerminalKindName(trace.terminal);
  out += ',';
  out += FormatDouble(trace.cumulative_reward);
  out += '\n';
  return out;
}

std::vector<EpisodeTrace> ParseTraces(std::string_view text,
                                      const std::string& initial_state) {
  std::vector<EpisodeTrace> out;
  EpisodeTrace current;
  bool open = false;
  int line_no = 0;
  for (std::string_view raw : SplitLines(text)) {
    ++line_no;
    if (Trim(raw).empty()) continue;
    auto f = SplitComma(raw);
    auto episode = ParseInt(f[0]);
    if (!episode) throw ParseError(line_no, 1, "expected episode number");
    if (open && current.episode != *episode) {
      throw ParseError(line_no, 1, "episode " + std::to_string(current.episode) +
                                       " has no footer");
    }
    if (!open) {
      current = EpisodeTrace{};
      current.episode = *episode;
      current.initial_state = initial_state;
      open = true;
    }
    if (f.size() == 7) {
      StepRecord s;
      auto tick = ParseInt(f[1]);
      auto reward = ParseDouble(f[6]);
      if (!tick || !reward || (f[4] != "0" && f[4] != "1")) {
        throw ParseError(line_no, 0, "malformed step record");
      }
      s.tick = *tick;
      s.state = std::string(f[2]);
      s.action = std::string(f[3]);
      s.correct = f[4] == "1";
      if (!f[5].empty()) {
        std::size_t start = 0;
        while (true) {
          std::size_t semi = f[5].find(';', start);
          s.failed.emplace_back(f[5].substr(
              start, semi == std::string_view::npos ? semi : semi - start));
          if (semi == std::string_view::npos) break;
          start = semi + 1;
        }
      }
      s.reward = *reward;
      current.steps.push_back(std::move(s));
    } else if (f.size() == 3) {
      auto r = ParseDouble(f[2]);
      if (!r) throw ParseError(line_no, 0, "malformed cumulative reward");
      try {
        current.terminal = ParseTerminalKind(f[1]);
      } catch (const Error& e) {
        throw ParseError(line_no, 0, e.what());
      }
      current.cumulative_reward = *r;
      out.push_back(std::move(current));
      open = false;
    } else {
      throw ParseError(line_no, 0, "expected 7 (step) or 3 (footer) fields");
    }
  }
  if (open) {
    throw ParseError(line_no, 0, "episode " + std::to_string(current.episode) +
                                     " has no footer");
  }
  return out;
}

}  // namespace uast
