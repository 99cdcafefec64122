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

// Run metrics: moving average reward, path diversity, and the two-sample
// statistics used to compare runs.

#ifndef UAST_STATS_H_
#define UAST_STATS_H_

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "uast/trace.h"

namespace uast {

struct MarSeries {
  std::size_t window = 0;
  // values[k] is the mean reward of episodes k .. k + window - 1, i.e. the
  // MAR at episode index k + window - 1.
  std::vector<double> values;
};

// Trailing-window mean, updated incrementally (new reward in, oldest out).
// Throws kInvalidArgument unless 1 <= n <= rewards.size().
MarSeries Mar(const std::vector<double>& rewards, std::size_t n);

// (source state, action, target state) for every correct step.
using TransitionSet = std::set<std::tuple<std::string, std::string, std::string>>;

TransitionSet Transitions(const EpisodeTrace& trace);

// 1 - |a n b| / |a u b|; two empty sets count as identical.
double JaccardDistance(const TransitionSet& a, const TransitionSet& b);

// Mean pairwise Jaccard distance. Throws kInvalidArgument for < 2 sets.
double PathDiversity(const std::vector<TransitionSet>& sets);

// For each set, its mean Jaccard distance to every other set.
std::vector<double> DiversityContributions(const std::vector<TransitionSet>& sets);

struct WilcoxonResult {
  double p = 1.0;
  double w_plus = 0;   // sum of ranks of positive differences
  double w_minus = 0;
  std::size_t n = 0;   // non-zero differences
  bool exact = false;
};

// Two-sided Wilcoxon signed-rank test of a - b. Zero differences are
// dropped and tied magnitudes get mid-ranks. Exact null distribution for
// n <= 25, normal approximation with continuity and tie correction above.
// All-zero differences give p = 1. Throws kInvalidArgument when the sizes
// differ or 1 <= n < 5.
WilcoxonResult WilcoxonSignedRank(const std::vector<double>& a,
                                  const std::vector<double>& b);

// (#{a_i > b_j} - #{a_i < b_j}) / (|a| |b|). Throws for empty input.
double CliffsDelta(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace uast

#endif  // UAST_STATS_H_
