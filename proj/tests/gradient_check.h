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

// Finite-difference check of the analytic loss gradient.

#ifndef UAST_TESTS_GRADIENT_CHECK_H_
#define UAST_TESTS_GRADIENT_CHECK_H_

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "uast/neural.h"

namespace uast::testing {

inline std::vector<double> RandomSequence(std::mt19937_64& gen, std::size_t len,
                                          std::size_t input) {
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<double> seq(len * input);
  for (auto& v : seq) v = u(gen);
  return seq;
}

// Central finite differences of the scalar loss, step 1e-5.
inline double MaxRelativeError(const LstmNetwork& net, const std::vector<double>& seq,
                               std::size_t action, double target) {
  const std::size_t A = net.shape().actions;
  auto loss = [&](const LstmNetwork& n) {
    auto q = n.Forward(seq);
    return Huber(q[q.size() - A + action] - target);
  };
  auto analytic = LossGradient(net, seq, action, target);
  LstmNetwork probe = net;
  double worst = 0;
  const double h = 1e-5;
  for (std::size_t i = 0; i < net.params().size(); ++i) {
    const double saved = probe.params()[i];
    probe.params()[i] = saved + h;
    const double up = loss(probe);
    probe.params()[i] = saved - h;
    const double down = loss(probe);
    probe.params()[i] = saved;
    const double numeric = (up - down) / (2 * h);
    const double scale = std::max({std::abs(numeric), std::abs(analytic[i]), 1e-6});
    worst = std::max(worst, std::abs(numeric - analytic[i]) / scale);
  }
  return worst;
}

// Target chosen so the Huber argument stays away from the kink at |d| = 1.
inline double SafeTarget(const LstmNetwork& net, const std::vector<double>& seq,
                         std::size_t action, std::mt19937_64& gen) {
  auto q = net.Forward(seq);
  const double current = q[q.size() - net.shape().actions + action];
  std::uniform_real_distribution<double> u(-3, 3);
  double d;
  do {
    d = u(gen);
  } while (std::abs(std::abs(d) - 1.0) < 0.05);
  return current - d;
}

}  // namespace uast::testing

#endif  // UAST_TESTS_GRADIENT_CHECK_H_
