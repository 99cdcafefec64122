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

#include "uast/neural.h"

#include <cmath>

#include "uast/error.h"
#include "uast/rng.h"

namespace uast {

namespace {

double Sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

void Resize(std::vector<std::vector<double>>& v, std::size_t layers,
            std::size_t n) {
  v.resize(layers);
  for (auto& row : v) row.assign(n, 0.0);
}

}  // namespace

std::size_t LstmShape::ParamCount() const {
  std::size_t n = 0;
  for (std::size_t l = 0; l < layers; ++l) {
    n += 4 * hidden * (LayerInput(l) + hidden + 1);
  }
  return n + actions * (hidden + 1);
}

LstmNetwork::LstmNetwork(LstmShape shape) : shape_(shape) {
  if (shape_.input == 0 || shape_.hidden == 0 || shape_.layers == 0 ||
      shape_.actions == 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "network dimensions must all be positive");
  }
  params_.assign(shape_.ParamCount(), 0.0);
  ComputeOffsets();
}

void LstmNetwork::ComputeOffsets() {
  offsets_.clear();
  std::size_t off = 0;
  for (std::size_t l = 0; l < shape_.layers; ++l) {
    offsets_.push_back(off);
    off += 4 * shape_.hidden * (shape_.LayerInput(l) + shape_.hidden + 1);
  }
  offsets_.push_back(off);
}

LstmNetwork LstmNetwork::Init(std::uint64_t seed, LstmShape shape) {
  LstmNetwork net(shape);
  Rng rng(seed);
  const double bound = 1.0 / std::sqrt(static_cast<double>(shape.hidden));
  for (double& p : net.params_) p = rng.Uniform(-bound, bound);
  const std::size_t h = shape.hidden;
  for (std::size_t l = 0; l < shape.layers; ++l) {
    for (std::size_t k = 0; k < h; ++k) net.params_[net.B(l) + h + k] += 1.0;
  }
  return net;
}

void LstmNetwork::Forward(const double* sequence, std::size_t length,
                          Cache& cache) const {
  const std::size_t h = shape_.hidden;
  const std::size_t layers = shape_.layers;
  const std::size_t n = length * h;
  cache.length = length;
  Resize(cache.gi, layers, n);
  Resize(cache.gf, layers, n);
  Resize(cache.gg, layers, n);
  Resize(cache.go, layers, n);
  Resize(cache.c, layers, n);
  Resize(cache.tanh_c, layers, n);
  Resize(cache.h, layers, n);
  cache.input.assign(sequence, sequence + length * shape_.input);
  cache.q.assign(length * shape_.actions, 0.0);

  std::vector<double> z(4 * h);
  const double* p = params_.data();
  for (std::size_t l = 0; l < layers; ++l) {
    const std::size_t in = shape_.LayerInput(l);
    const double* W = p + this->W(l);
    const double* Uw = p + U(l);
    const double* b = p + B(l);
    for (std::size_t t = 0; t < length; ++t) {
      const double* x =
          l == 0 ? cache.input.data() + t * in : cache.h[l - 1].data() + t * h;
      const double* hp = t == 0 ? nullptr : cache.h[l].data() + (t - 1) * h;
      const double* cp = t == 0 ? nullptr : cache.c[l].data() + (t - 1) * h;
      for (std::size_t r = 0; r < 4 * h; ++r) {
        double s = b[r];
        const double* wr = W + r * in;
        for (std::size_t j = 0; j < in; ++j) s += wr[j] * x[j];
        if (hp) {
          const double* ur = Uw + r * h;
          for (std::size_t j = 0; j < h; ++j) s += ur[j] * hp[j];
        }
        z[r] = s;
      }
      for (std::size_t k = 0; k < h; ++k) {
        const std::size_t idx = t * h + k;
        double i = Sigmoid(z[k]);
        double f = Sigmoid(z[h + k]);
        double g = std::tanh(z[2 * h + k]);
        double o = Sigmoid(z[3 * h + k]);
        double c = i * g + (cp ? f * cp[k] : 0.0);
        double tc = std::tanh(c);
        cache.gi[l][idx] = i;
        cache.gf[l][idx] = f;
        cache.gg[l][idx] = g;
        cache.go[l][idx] = o;
        cache.c[l][idx] = c;
        cache.tanh_c[l][idx] = tc;
        cache.h[l][idx] = o * tc;
      }
    }
  }
  const double* Wq = p + HeadW();
  const double* bq = p + HeadB();
  for (std::size_t t = 0; t < length; ++t) {
    const double* top = cache.h[layers - 1].data() + t * h;
    for (std::size_t a = 0; a < shape_.actions; ++a) {
      double s = bq[a];
      for (std::size_t j = 0; j < h; ++j) s += Wq[a * h + j] * top[j];
      cache.q[t * shape_.actions + a] = s;
    }
  }
}

std::vector<double> LstmNetwork::Forward(const std::vector<double>& sequence,
                                         Cache* cache) const {
  if (sequence.size() % shape_.input != 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "sequence width does not match the network input");
  }
  Cache local;
  Cache& c = cache ? *cache : local;
  Forward(sequence.data(), sequence.size() / shape_.input, c);
  return c.q;
}

std::vector<double> LstmNetwork::LastQ(const double* sequence,
                                       std::size_t length,
                                       Cache& scratch) const {
  Forward(sequence, length, scratch);
  return std::vector<double>(scratch.q.end() - shape_.actions, scratch.q.end());
}

void LstmNetwork::Backward(const Cache& cache, std::size_t action, double dq,
                           std::vector<double>& grad) const {
  const std::size_t h = shape_.hidden;
  const std::size_t layers = shape_.layers;
  const std::size_t T = cache.length;
  if (grad.size() != params_.size()) grad.assign(params_.size(), 0.0);
  const double* p = params_.data();
  double* g = grad.data();

  // Head: only row `action` at the last step has a nonzero derivative.
  const double* top_last = cache.h[layers - 1].data() + (T - 1) * h;
  std::vector<double> dh_above(T * h, 0.0);
  for (std::size_t j = 0; j < h; ++j) {
    g[HeadW() + action * h + j] += dq * top_last[j];
    dh_above[(T - 1) * h + j] = dq * p[HeadW() + action * h + j];
  }
  g[HeadB() + action] += dq;

  std::vector<double> dz(4 * h), dh_rec(h), dc_rec(h), dh_below;
  for (std::size_t l = layers; l-- > 0;) {
    const std::size_t in = shape_.LayerInput(l);
    const double* W = p + this->W(l);
    const double* Uw = p + U(l);
    double* gW = g + this->W(l);
    double* gU = g + U(l);
    double* gb = g + B(l);
    dh_below.assign(T * in, 0.0);
    std::fill(dh_rec.begin(), dh_rec.end(), 0.0);
    std::fill(dc_rec.begin(), dc_rec.end(), 0.0);
    for (std::size_t t = T; t-- > 0;) {
      const double* x =
          l == 0 ? cache.input.data() + t * in : cache.h[l - 1].data() + t * h;
      const double* hp = t == 0 ? nullptr : cache.h[l].data() + (t - 1) * h;
      const double* cp = t == 0 ? nullptr : cache.c[l].data() + (t - 1) * h;
      for (std::size_t k = 0; k < h; ++k) {
        const std::size_t idx = t * h + k;
        const double i = cache.gi[l][idx], f = cache.gf[l][idx];
        const double gg = cache.gg[l][idx], o = cache.go[l][idx];
        const double tc = cache.tanh_c[l][idx];
        const double dh = dh_above[idx] + dh_rec[k];
        const double dc = dc_rec[k] + dh * o * (1.0 - tc * tc);
        const double cprev = cp ? cp[k] : 0.0;
        dz[k] = dc * gg * i * (1.0 - i);
        dz[h + k] = dc * cprev * f * (1.0 - f);
        dz[2 * h + k] = dc * i * (1.0 - gg * gg);
        dz[3 * h + k] = dh * tc * o * (1.0 - o);
        dc_rec[k] = dc * f;
      }
      std::fill(dh_rec.begin(), dh_rec.end(), 0.0);
      double* dx = dh_below.data() + t * in;
      for (std::size_t r = 0; r < 4 * h; ++r) {
        const double d = dz[r];
        if (d == 0.0) continue;
        gb[r] += d;
        const double* wr = W + r * in;
        double* gwr = gW + r * in;
        for (std::size_t j = 0; j < in; ++j) {
          gwr[j] += d * x[j];
          dx[j] += d * wr[j];
        }
        if (hp) {
          const double* ur = Uw + r * h;
          double* gur = gU + r * h;
          for (std::size_t j = 0; j < h; ++j) {
            gur[j] += d * hp[j];
            dh_rec[j] += d * ur[j];
          }
        }
      }
    }
    if (l > 0) dh_above.swap(dh_below);
  }
}

double Huber(double d) {
  double a = std::abs(d);
  return a < 1.0 ? 0.5 * d * d : a - 0.5;
}

double HuberDerivative(double d) {
  if (d >= 1.0) return 1.0;
  if (d <= -1.0) return -1.0;
  return d;
}

HuberResult HuberLoss(const std::vector<double>& pred,
                      const std::vector<double>& target) {
  if (pred.size() != target.size()) {
    throw Error(ErrorCode::kInvalidArgument, "Huber loss size mismatch");
  }
  HuberResult r;
  r.grad.resize(pred.size());
  if (pred.empty()) return r;
  const double n = static_cast<double>(pred.size());
  for (std::size_t i = 0; i < pred.size(); ++i) {
    double d = pred[i] - target[i];
    r.loss += Huber(d);
    r.grad[i] = HuberDerivative(d) / n;
  }
  r.loss /= n;
  return r;
}

std::vector<double> LossGradient(const LstmNetwork& net,
                                 const std::vector<double>& sequence,
                                 std::size_t action, double target) {
  LstmNetwork::Cache cache;
  auto q = net.Forward(sequence, &cache);
  double d = q[q.size() - net.shape().actions + action] - target;
  std::vector<double> grad(net.params().size(), 0.0);
  net.Backward(cache, action, HuberDerivative(d), grad);
  return grad;
}

void AdamStep(std::vector<double>& params, const std::vector<double>& grads,
              AdamState& adam, double lr) {
  if (grads.size() != params.size() || adam.m.size() != params.size() ||
      adam.v.size() != params.size()) {
    throw Error(ErrorCode::kInvalidArgument, "Adam shape mismatch");
  }
  ++adam.step;
  const double t = static_cast<double>(adam.step);
  const double c1 = 1.0 - std::pow(adam.beta1, t);
  const double c2 = 1.0 - std::pow(adam.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    adam.m[i] = adam.beta1 * adam.m[i] + (1.0 - adam.beta1) * g;
    adam.v[i] = adam.beta2 * adam.v[i] + (1.0 - adam.beta2) * g * g;
    const double mhat = adam.m[i] / c1;
    const double vhat = adam.v[i] / c2;
    params[i] -= lr * mhat / (std::sqrt(vhat) + adam.epsilon);
  }
}

}  // namespace uast
