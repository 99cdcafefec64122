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

// Side-by-side violation report for an agent run and a baseline run.

#ifndef UAST_ANALYSIS_H_
#define UAST_ANALYSIS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "uast/behavior_model.h"
#include "uast/constraint.h"
#include "uast/stats.h"
#include "uast/trace.h"

namespace uast {

struct ReportRow {
  std::string state;  // top-level flight state
  std::int64_t ait_total = 0;
  std::size_t ait_unique = 0;
  std::int64_t base_total = 0;
  std::size_t base_unique = 0;
};

struct ComparisonReport {
  std::vector<ReportRow> rows;  // machine order
  ReportRow totals;             // state = "Total"
  ViolationLedger ait_ledger;
  ViolationLedger base_ledger;
  std::set<std::string> general_ids;

  std::optional<double> ait_diversity;
  std::optional<double> base_diversity;
  std::vector<double> ait_contributions;
  std::vector<double> base_contributions;
  std::optional<WilcoxonResult> wilcoxon;  // paired by episode index
  std::optional<double> cliffs_delta;      // ait vs base contributions
};

// Ledger of one run, keyed by top-level flight state.
ViolationLedger LedgerOf(const std::vector<EpisodeTrace>& traces);

// Throws kInvalidArgument when a trace names a constraint id outside
// `constraints`.
ComparisonReport CompileReport(const std::vector<EpisodeTrace>& ait,
                               const std::vector<EpisodeTrace>& base,
                               const ConstraintSet& constraints,
                               const FlightStateMachine& flat_machine);

// Aligned plain-text table.
std::string FormatReport(const ComparisonReport& report);
// Machine-readable records, one per line.
std::string FormatReportCsv(const ComparisonReport& report);

// "<episode> <ait mar> <base mar>" lines for episodes where both exist.
std::string FormatMarData(const std::vector<double>& ait_rewards,
                          const std::vector<double>& base_rewards,
                          std::size_t window);

std::size_t DefaultMarWindow(std::size_t episodes);

}  // namespace uast

#endif  // UAST_ANALYSIS_H_
