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

#ifndef UAST_RNG_H_
#define UAST_RNG_H_

#include <cstdint>
#include <random>
#include <string>

namespace uast {

// Derives an independent 64-bit seed from a base seed and a stream tag
// (splitmix64 finalizer over the combined words).
std::uint64_t DeriveSeed(std::uint64_t base, std::uint64_t stream,
                         std::uint64_t index = 0);

// mt19937_64 with distribution code written out here so that sequences do
// not depend on the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  std::uint64_t NextU64() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double Uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }

  // Uniform integer in [0, n). Rejection sampling, no modulo bias.
  std::uint64_t Below(std::uint64_t n);

  // Standard normal via Box-Muller (one value per call, no caching so the
  // engine state fully describes the generator).
  double Normal();

  std::string SaveState() const;
  void LoadState(const std::string& state);

  bool operator==(const Rng& other) const { return engine_ == other.engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace uast

#endif  // UAST_RNG_H_
