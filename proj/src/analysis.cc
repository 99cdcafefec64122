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

#include "uast/analysis.h"

#include <algorithm>
#include <cstdio>

#include "uast/error.h"
#include "uast/text.h"

namespace uast {

namespace {

std::string Fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

std::string Sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string Pad(std::string s, std::size_t width, bool left = false) {
  if (s.size() >= width) return s;
  std::string fill(width - s.size(), ' ');
  return left ? s + fill : fill + s;
}

std::vector<TransitionSet> SetsOf(const std::vector<EpisodeTrace>& traces) {
  std::vector<TransitionSet> out;
  out.reserve(traces.size());
  for (const auto& t : traces) out.push_back(Transitions(t));
  return out;
}

}  // namespace

ViolationLedger LedgerOf(const std::vector<EpisodeTrace>& traces) {
  ViolationLedger ledger;
  for (const auto& t : traces) {
    for (const auto& s : t.steps) {
      ledger.Record(std::string(TopLevelState(s.state)), s.failed);
    }
  }
  return ledger;
}

ComparisonReport CompileReport(const std::vector<EpisodeTrace>& ait,
                               const std::vector<EpisodeTrace>& base,
                               const ConstraintSet& constraints,
                               const FlightStateMachine& flat_machine) {
  std::set<std::string> ids;
  ComparisonReport r;
  for (const auto& c : constraints) {
    ids.insert(c.id);
    if (c.is_general()) r.general_ids.insert(c.id);
  }
  for (const auto* run : {&ait, &base}) {
    for (const auto& t : *run) {
      for (const auto& s : t.steps) {
        for (const auto& id : s.failed) {
          if (!ids.count(id)) {
            throw Error(ErrorCode::kInvalidArgument,
                        "trace episode " + std::to_string(t.episode) +
                            " reports constraint '" + id +
                            "' which the constraint set does not define");
          }
        }
      }
    }
  }
  r.ait_ledger = LedgerOf(ait);
  r.base_ledger = LedgerOf(base);

  std::vector<std::string> states;
  for (const auto& s : flat_machine.states) {
    std::string top(TopLevelState(s.name));
    if (std::find(states.begin(), states.end(), top) == states.end()) {
      states.push_back(top);
    }
  }
  // States seen in traces but unknown to the machine still get a row.
  for (const auto* ledger : {&r.ait_ledger, &r.base_ledger}) {
    for (const auto& s : ledger->States()) {
      if (std::find(states.begin(), states.end(), s) == states.end()) {
        states.push_back(s);
      }
    }
  }
  r.totals.state = "Total";
  for (const auto& s : states) {
    ReportRow row;
    row.state = s;
    row.ait_total = r.ait_ledger.StateTotal(s);
    row.ait_unique = r.ait_ledger.StateUnique(s);
    row.base_total = r.base_ledger.StateTotal(s);
    row.base_unique = r.base_ledger.StateUnique(s);
    r.totals.ait_total += row.ait_total;
    r.totals.ait_unique += row.ait_unique;
    r.totals.base_total += row.base_total;
    r.totals.base_unique += row.base_unique;
    r.rows.push_back(row);
  }

  if (ait.size() >= 2) {
    auto sets = SetsOf(ait);
    r.ait_diversity = PathDiversity(sets);
    r.ait_contributions = DiversityContributions(sets);
  }
  if (base.size() >= 2) {
    auto sets = SetsOf(base);
    r.base_diversity = PathDiversity(sets);
    r.base_contributions = DiversityContributions(sets);
  }
  if (!r.ait_contributions.empty() && !r.base_contributions.empty()) {
    r.cliffs_delta = CliffsDelta(r.ait_contributions, r.base_contributions);
    if (r.ait_contributions.size() == r.base_contributions.size()) {
      try {
        r.wilcoxon = WilcoxonSignedRank(r.ait_contributions, r.base_contributions);
        if (r.wilcoxon->n == 0) r.wilcoxon.reset();  // samples identical
      } catch (const Error&) {
        r.wilcoxon.reset();  // too few non-zero differences
      }
    }
  }
  return r;
}

std::string FormatReport(const ComparisonReport& r) {
  std::size_t w = 12;
  for (const auto& row : r.rows) w = std::max(w, row.state.size() + 2);
  std::string out;
  out += Pad("Flight state", w, true) + Pad("AITester", 20) + Pad("Random", 20) + "\n";
  out += Pad("", w, true) + Pad("Total", 10) + Pad("Unique", 10) + Pad("Total", 10) +
         Pad("Unique", 10) + "\n";
  auto line = [&](const ReportRow& row) {
    out += Pad(row.state, w, true) + Pad(std::to_string(row.ait_total), 10) +
           Pad(std::to_string(row.ait_unique), 10) +
           Pad(std::to_string(row.base_total), 10) +
           Pad(std::to_string(row.base_unique), 10) + "\n";
  };
  for (const auto& row : r.rows) line(row);
  out += std::string(w + 40, '-') + "\n";
  line(r.totals);

  out += "\nViolations by constraint (G = general constraint):\n";
  std::set<std::pair<std::string, std::string>> keys;
  for (const auto& [k, v] : r.ait_ledger.counts()) keys.insert(k);
  for (const auto& [k, v] : r.base_ledger.counts()) keys.insert(k);
  if (keys.empty()) out += "  none\n";
  for (const auto& [state, id] : keys) {
    out += "  " + Pad(state, w, true) + Pad(id, 8, true) +
           (r.general_ids.count(id) ? "G " : "  ") +
           Pad(std::to_string(r.ait_ledger.Total(state, id)), 10) +
           Pad(std::to_string(r.base_ledger.Total(state, id)), 10) + "\n";
  }

  auto opt = [](const std::optional<double>& v) {
    return v ? Fixed(*v, 6) : std::string("n/a");
  };
  out += "\nPath diversity (mean pairwise Jaccard distance):\n";
  out += "  AITester " + opt(r.ait_diversity) + "\n";
  out += "  Random   " + opt(r.base_diversity) + "\n";
  out += "Per-episode diversity contributions, AITester vs Random:\n";
  out += "  Wilcoxon signed-rank p = " +
         (r.wilcoxon ? Sci(r.wilcoxon->p) + (r.wilcoxon->exact ? " (exact" : " (normal") +
                           ", n=" + std::to_string(r.wilcoxon->n) + ")"
                     : std::string("n/a")) +
         "\n";
  out += "  Cliff's delta          = " + opt(r.cliffs_delta) + "\n";
  return out;
}

std::string FormatReportCsv(const ComparisonReport& r) {
  std::string out;
  auto row = [&](const char* kind, const ReportRow& x) {
    out += std::string(kind) + "," + x.state + "," + std::to_string(x.ait_total) +
           "," + std::to_string(x.ait_unique) + "," + std::to_string(x.base_total) +
           "," + std::to_string(x.base_unique) + "\n";
  };
  for (const auto& x : r.rows) row("state", x);
  row("total", r.totals);
  for (const auto* p : {&r.ait_ledger, &r.base_ledger}) {
    const char* run = p == &r.ait_ledger ? "ait" : "random";
    for (const auto& [key, count] : p->counts()) {
      out += std::string("violation,") + run + "," + key.first + "," + key.second +
             "," + std::to_string(count) + "," +
             (r.general_ids.count(key.second) ? "1" : "0") + "\n";
    }
  }
  auto opt = [](const std::optional<double>& v) {
    return v ? FormatDouble(*v) : std::string("n/a");
  };
  out += "diversity," + opt(r.ait_diversity) + "," + opt(r.base_diversity) + "\n";
  out += "wilcoxon," +
         (r.wilcoxon ? FormatDouble(r.wilcoxon->p) + "," + std::to_string(r.wilcoxon->n)
                     : std::string("n/a,0")) +
         "\n";
  out += "cliffs_delta," + opt(r.cliffs_delta) + "\n";
  return out;
}

std::size_t DefaultMarWindow(std::size_t episodes) {
  if (episodes < 2) return 1;
  return std::min<std::size_t>(350, episodes - 1);
}

std::string FormatMarData(const std::vector<double>& ait_rewards,
                          const std::vector<double>& base_rewards,
                          std::size_t window) {
  std::string out = "# episode ait_mar random_mar\n";
  const std::size_t n = std::min(ait_rewards.size(), base_rewards.size());
  if (n == 0 || window == 0 || window > n) return out;
  std::vector<double> a(ait_rewards.begin(), ait_rewards.begin() + n);
  std::vector<double> b(base_rewards.begin(), base_rewards.begin() + n);
  MarSeries ma = Mar(a, window);
  MarSeries mb = Mar(b, window);
  for (std::size_t k = 0; k < ma.values.size(); ++k) {
    out += std::to_string(k + window - 1) + " " + FormatDouble(ma.values[k]) + " " +
           FormatDouble(mb.values[k]) + "\n";
  }
  return out;
}

}  // namespace uast
