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

// Stacked LSTM Q-network with a linear head, backpropagation through time,
// Huber loss and Adam. Everything is double precision.
//
// Parameter layout, for each layer l (input width n_l = input for l = 0 and
// hidden otherwise), gate rows ordered input, forget, cell, output:
//
//   W_l  4h x n_l   U_l  4h x h   b_l  4h
//
// followed by the head Wq (|A| x h) and bq (|A|).

#ifndef UAST_NEURAL_H_
#define UAST_NEURAL_H_

#include <cstddef>
#include <cstdint>
#include <vector>

namespace uast {

struct LstmShape {
  std::size_t input = 10;
  std::size_t hidden = 10;
  std::size_t layers = 3;
  std::size_t actions = 0;

  std::size_t LayerInput(std::size_t l) const { return l == 0 ? input : hidden; }
  std::size_t ParamCount() const;
  bool operator==(const LstmShape& other) const = default;
};

class LstmNetwork {
 public:
  // Intermediate values of one forward pass, needed by Backward.
  struct Cache {
    std::size_t length = 0;
    // Indexed [layer][t * hidden + k].
    std::vector<std::vector<double>> gi, gf, gg, go, c, tanh_c, h;
    std::vector<double> input;  // length x input
    std::vector<double> q;      // length x actions
  };

  LstmNetwork() = default;
  explicit LstmNetwork(LstmShape shape);  // all parameters zero

  // Weights uniform in [-1/sqrt(hidden), 1/sqrt(hidden)], forget-gate bias
  // shifted by +1. Throws kInvalidArgument for zero dimensions.
  static LstmNetwork Init(std::uint64_t seed, LstmShape shape);

  const LstmShape& shape() const { return shape_; }
  std::vector<double>& params() { return params_; }
  const std::vector<double>& params() const { return params_; }

  std::size_t W(std::size_t l) const { return offsets_[l]; }
  std::size_t U(std::size_t l) const {
    return offsets_[l] + 4 * shape_.hidden * shape_.LayerInput(l);
  }
  std::size_t B(std::size_t l) const {
    return U(l) + 4 * shape_.hidden * shape_.hidden;
  }
  std::size_t HeadW() const { return offsets_[shape_.layers]; }
  std::size_t HeadB() const { return HeadW() + shape_.actions * shape_.hidden; }

  // Runs a length-L sequence (L x input values, row-major) from zero hidden
  // and cell state. Returns L x actions Q-values.
  std::vector<double> Forward(const std::vector<double>& sequence,
                              Cache* cache = nullptr) const;
  void Forward(const double* sequence, std::size_t length, Cache& cache) const;

  // Q-values at the last step of the sequence only.
  std::vector<double> LastQ(const double* sequence, std::size_t length,
                            Cache& scratch) const;

  // Accumulates into `grad` the gradient of a loss whose derivative with
  // respect to Q[last step][action] is `dq` (all other Q entries having zero
  // derivative). `cache` must come from Forward on the same parameters.
  void Backward(const Cache& cache, std::size_t action, double dq,
                std::vector<double>& grad) const;

  bool operator==(const LstmNetwork& other) const {
    return shape_ == other.shape_ && params_ == other.params_;
  }

 private:
  void ComputeOffsets();

  LstmShape shape_;
  std::vector<double> params_;
  std::vector<std::size_t> offsets_;
};

// Smooth L1: 0.5 d^2 for |d| < 1, |d| - 0.5 otherwise.
double Huber(double d);
double HuberDerivative(double d);

struct HuberResult {
  double loss = 0;
  std::vector<double> grad;  // d loss / d pred
};
// Mean over elements.
HuberResult HuberLoss(const std::vector<double>& pred,
                      const std::vector<double>& target);

// Gradient of Huber(Q[last][action] - target) for a single sequence.
std::vector<double> LossGradient(const LstmNetwork& net,
                                 const std::vector<double>& sequence,
                                 std::size_t action, double target);

struct AdamState {
  std::vector<double> m, v;
  std::int64_t step = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  explicit AdamState(std::size_t n = 0) : m(n, 0.0), v(n, 0.0) {}
  bool operator==(const AdamState& other) const = default;
};

void AdamStep(std::vector<double>& params, const std::vector<double>& grads,
              AdamState& adam, double lr);

}  // namespace uast

#endif  // UAST_NEURAL_H_
