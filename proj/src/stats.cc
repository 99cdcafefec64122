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

#include "uast/stats.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "uast/error.h"

namespace uast {

namespace {

constexpr std::size_t kExactLimit = 25;

}  // namespace

MarSeries Mar(const std::vector<double>& rewards, std::size_t n) {
  if (n == 0 || n > rewards.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "MAR window " + std::to_string(n) + " does not fit " +
                    std::to_string(rewards.size()) + " episodes");
  }
  MarSeries s;
  s.window = n;
  double sum = 0;
  for (std::size_t i = 0; i < n; ++i) sum += rewards[i];
  const double inv = 1.0 / static_cast<double>(n);
  s.values.push_back(sum * inv);
  for (std::size_t i = n; i < rewards.size(); ++i) {
    sum += rewards[i] - rewards[i - n];
    s.values.push_back(sum * inv);
  }
  return s;
}

TransitionSet Transitions(const EpisodeTrace& trace) {
  TransitionSet out;
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const StepRecord& s = trace.steps[i];
    if (s.correct) out.emplace(trace.StateBefore(i), s.action, s.state);
  }
  return out;
}

double JaccardDistance(const TransitionSet& a, const TransitionSet& b) {
  if (a.empty() && b.empty()) return 0.0;
  std::size_t common = 0;
  for (const auto& t : a) common += b.count(t);
  const std::size_t uni = a.size() + b.size() - common;
  return 1.0 - static_cast<double>(common) / static_cast<double>(uni);
}

double PathDiversity(const std::vector<TransitionSet>& sets) {
  if (sets.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument,
                "path diversity needs at least two traces");
  }
  double sum = 0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    for (std::size_t j = i + 1; j < sets.size(); ++j) {
      sum += JaccardDistance(sets[i], sets[j]);
      ++pairs;
    }
  }
  return sum / static_cast<double>(pairs);
}

std::vector<double> DiversityContributions(
    const std::vector<TransitionSet>& sets) {
  if (sets.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument,
                "path diversity needs at least two traces");
  }
  const std::size_t n = sets.size();
  std::vector<double> sum(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double d = JaccardDistance(sets[i], sets[j]);
      sum[i] += d;
      sum[j] += d;
    }
  }
  for (double& s : sum) s /= static_cast<double>(n - 1);
  return sum;
}

WilcoxonResult WilcoxonSignedRank(const std::vector<double>& a,
                                  const std::vector<double>& b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "Wilcoxon signed-rank needs paired samples of equal size");
  }
  std::vector<double> d;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) d.push_back(a[i] - b[i]);
  }
  WilcoxonResult r;
  r.n = d.size();
  if (r.n == 0) return r;
  if (r.n < 5) {
    throw Error(ErrorCode::kInvalidArgument,
                "Wilcoxon signed-rank needs at least 5 non-zero differences");
  }

  // Mid-ranks of |d|, kept doubled so they stay integral.
  std::vector<std::size_t> order(r.n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return std::abs(d[x]) < std::abs(d[y]);
  });
  std::vector<long> rank2(r.n);
  double tie_term = 0;
  for (std::size_t i = 0; i < r.n;) {
    std::size_t j = i;
    while (j + 1 < r.n && std::abs(d[order[j + 1]]) == std::abs(d[order[i]])) ++j;
    const long doubled = static_cast<long>(i + 1 + j + 1);  // 2 * mean rank
    for (std::size_t k = i; k <= j; ++k) rank2[order[k]] = doubled;
    const double t = static_cast<double>(j - i + 1);
    tie_term += t * t * t - t;
    i = j + 1;
  }
  long w2_plus = 0, total2 = 0;
  for (std::size_t i = 0; i < r.n; ++i) {
    total2 += rank2[i];
    if (d[i] > 0) w2_plus += rank2[i];
  }
  r.w_plus = w2_plus / 2.0;
  r.w_minus = (total2 - w2_plus) / 2.0;

  const double n = static_cast<double>(r.n);
  if (r.n <= kExactLimit) {
    // Null distribution of the doubled W+: each rank enters with
    // probability 1/2.
    std::vector<double> count(static_cast<std::size_t>(total2) + 1, 0.0);
    count[0] = 1.0;
    long reach = 0;
    for (long rk : rank2) {
      for (long s = reach; s >= 0; --s) {
        if (count[s] != 0.0) count[s + rk] += count[s];
      }
      reach += rk;
    }
    const double all = std::ldexp(1.0, static_cast<int>(r.n));
    double lower = 0, upper = 0;
    for (long s = 0; s <= total2; ++s) {
      if (s <= w2_plus) lower += count[s];
      if (s >= w2_plus) upper += count[s];
    }
    r.p = std::min(1.0, 2.0 * std::min(lower, upper) / all);
    r.exact = true;
  } else {
    const double mean = n * (n + 1) / 4.0;
    const double var = n * (n + 1) * (2 * n + 1) / 24.0 - tie_term / 48.0;
    double z = (std::abs(r.w_plus - mean) - 0.5) / std::sqrt(var);
    if (z < 0) z = 0;
    r.p = std::min(1.0, std::erfc(z / std::sqrt(2.0)));
  }
  return r;
}

double CliffsDelta(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() || b.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "Cliff's delta needs two non-empty samples");
  }
  long long more = 0, less = 0;
  for (double x : a) {
    for (double y : b) {
      if (x > y) ++more;
      else if (x < y) ++less;
    }
  }
  return static_cast<double>(more - less) /
         (static_cast<double>(a.size()) * static_cast<double>(b.size()));
}

}  // namespace uast
