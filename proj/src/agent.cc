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

#include "uast/agent.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "uast/checkpoint.h"
#include "uast/error.h"

namespace uast {

namespace {

constexpr std::string_view kTrainingMagic = "UASTTRST";
constexpr std::uint32_t kTrainingVersion = 1;

// Fallback scale for tuple quantities when the schema declares no range.
constexpr double kFallbackLo[9] = {0, 0, 0, -180, -180, -180, 0, 0, 0};
constexpr double kFallbackSpan[9] = {300, 100, 100, 360, 360, 360, 360, 100, 5000};

template <typename Choose, typename Observe>
EpisodeTrace RunEpisode(Environment& env, std::uint64_t env_seed,
                        std::int64_t episode, const Encoder& encoder,
                        const ConstraintSet& constraints, std::size_t history,
                        double gamma, ViolationLedger& ledger, Choose choose,
                        Observe observe) {
  EpisodeTrace trace;
  trace.episode = episode;
  StepOutcome start = env.Reset(env_seed);
  trace.initial_state = start.flight_state;
  HistoryWindow window(history);
  double row[kInputDim];
  encoder.Encode(start.snapshot, row);
  window.Push(row);
  std::vector<double> rewards;
  const auto& actions = env.model().actions();
  while (env.Status() == TerminalKind::kRunning) {
    const std::vector<double> before = window.data();
    std::size_t action = choose(before);
    StepOutcome out;
    try {
      out = env.Step(action);
    } catch (const std::exception&) {
      trace.terminal = TerminalKind::kAborted;
      break;
    }
    StepRecord rec;
    rec.tick = out.snapshot.tick;
    rec.state = out.flight_state;
    rec.action = actions[action];
    rec.correct = out.action_correct;
    if (out.action_correct) rec.failed = Evaluate(constraints, out.snapshot).failed;
    rec.reward = ComputeReward(rec.correct, rec.failed.size());
    rec.tuple = ToStateTuple(out.snapshot);
    ledger.Record(std::string(TopLevelState(rec.state)), rec.failed);
    encoder.Encode(out.snapshot, row);
    window.Push(row);
    const bool done = out.status != TerminalKind::kRunning;
    observe(before, action, rec.reward, window.data(), done);
    rewards.push_back(rec.reward);
    trace.steps.push_back(std::move(rec));
    if (done) trace.terminal = out.status;
  }
  trace.cumulative_reward = CumulativeReward(rewards, gamma);
  return trace;
}

void WriteExperience(BinaryWriter& w, const Experience& e) {
  w.F64s(e.state);
  w.U32(e.action);
  w.F64(e.reward);
  w.F64s(e.next_state);
  w.U32(e.done ? 1 : 0);
}

Experience ReadExperience(BinaryReader& r) {
  Experience e;
  e.state = r.F64s();
  e.action = r.U32();
  e.reward = r.F64();
  e.next_state = r.F64s();
  e.done = r.U32() != 0;
  return e;
}

LstmShape ShapeFor(const TrainConfig& cfg, const BehaviorModel& model) {
  LstmShape s;
  s.input = kInputDim;
  s.hidden = cfg.hidden;
  s.layers = cfg.layers;
  s.actions = model.action_count();
  return s;
}

}  // namespace

TrainConfig TrainConfig::FromKeyValues(const KeyValues& kv) {
  TrainConfig c;
  for (const auto& [key, value] : kv.entries()) {
    auto size = [&](std::size_t& field) {
      auto v = kv.GetInt(key, 0);
      if (v < 0) {
        throw Error(ErrorCode::kInvalidArgument, key + " must be non-negative");
      }
      field = static_cast<std::size_t>(v);
    };
    if (key == "learning_rate") c.learning_rate = kv.GetDouble(key, 0);
    else if (key == "batch_size") size(c.batch_size);
    else if (key == "replay_capacity") size(c.replay_capacity);
    else if (key == "target_update") size(c.target_update);
    else if (key == "gamma") c.gamma = kv.GetDouble(key, 0);
    else if (key == "eps_start") c.eps_start = kv.GetDouble(key, 0);
    else if (key == "eps_end") c.eps_end = kv.GetDouble(key, 0);
    else if (key == "eps_decay") c.eps_decay = kv.GetDouble(key, 0);
    else if (key == "training_episodes") size(c.training_episodes);
    else if (key == "evaluation_episodes") size(c.evaluation_episodes);
    else if (key == "history_len") size(c.history_len);
    else if (key == "hidden") size(c.hidden);
    else if (key == "layers") size(c.layers);
    else if (key == "checkpoint_every") size(c.checkpoint_every);
    else if (key == "seed") c.seed = static_cast<std::uint64_t>(kv.GetInt(key, 0));
    else {
      throw Error(ErrorCode::kInvalidArgument,
                  "unknown training key '" + key + "'");
    }
  }
  c.Validate();
  return c;
}

void TrainConfig::Validate() const {
  auto bad = [](const std::string& msg) {
    throw Error(ErrorCode::kInvalidArgument, msg);
  };
  if (!(gamma >= 0 && gamma <= 1)) bad("gamma must be in [0,1]");
  if (!(eps_end >= 0 && eps_end <= eps_start && eps_start <= 1)) {
    bad("need 0 <= eps_end <= eps_start <= 1");
  }
  if (!(eps_decay > 0)) bad("eps_decay must be positive");
  if (!(learning_rate > 0)) bad("learning_rate must be positive");
  if (batch_size == 0 || replay_capacity == 0 || target_update == 0 ||
      training_episodes == 0 || evaluation_episodes == 0 || history_len == 0 ||
      hidden == 0 || layers == 0) {
    bad("sizes and episode counts must be positive");
  }
  if (batch_size > replay_capacity) bad("batch_size exceeds replay_capacity");
}

double ComputeReward(bool action_correct, std::size_t m) {
  return action_correct ? 1.0 + static_cast<double>(m) : -1.0;
}

double CumulativeReward(const std::vector<double>& rewards, double gamma) {
  double total = 0;
  double discount = 1;
  for (double r : rewards) {
    total += discount * r;
    discount *= gamma;
  }
  return total;
}

double Epsilon(std::int64_t step, const TrainConfig& cfg) {
  if (step < 0) throw Error(ErrorCode::kInvalidArgument, "negative step");
  return cfg.eps_end + (cfg.eps_start - cfg.eps_end) *
                           std::exp(-static_cast<double>(step) / cfg.eps_decay);
}

Encoder::Encoder(const BehaviorModel& model, const DomainSchema& schema)
    : model_(model) {
  for (int k = 1; k <= 9; ++k) {
    auto slot = schema.TupleSlot(k);
    if (!slot) {
      throw Error(ErrorCode::kInvalidArgument,
                  "schema has no field annotated tuple=s" + std::to_string(k));
    }
    slots_[k - 1] = *slot;
    const auto& range = schema.field(*slot).range;
    lo_[k - 1] = range ? range->first : kFallbackLo[k - 1];
    span_[k - 1] = range ? range->second - range->first : kFallbackSpan[k - 1];
  }
}

void Encoder::Encode(const Snapshot& snapshot, double* out) const {
  out[0] = static_cast<double>(model_.StateIndex(snapshot.flight_state)) /
           static_cast<double>(model_.state_count());
  for (std::size_t k = 0; k < 9; ++k) {
    out[k + 1] = (snapshot.values[slots_[k]] - lo_[k]) / span_[k];
  }
}

void HistoryWindow::Push(const double* row) {
  std::copy(data_.begin() + kInputDim, data_.end(), data_.begin());
  std::copy(row, row + kInputDim, data_.end() - kInputDim);
}

ReplayMemory::ReplayMemory(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) {
    throw Error(ErrorCode::kInvalidArgument, "replay capacity must be positive");
  }
}

void ReplayMemory::Push(Experience e) {
  if (items_.size() < capacity_) {
    items_.push_back(std::move(e));
  } else {
    items_[head_] = std::move(e);
    head_ = (head_ + 1) % capacity_;
  }
}

const Experience& ReplayMemory::at(std::size_t i) const {
  if (i >= items_.size()) {
    throw Error(ErrorCode::kInvalidArgument, "replay index out of range");
  }
  return items_[(head_ + i) % items_.size()];
}

std::vector<std::size_t> ReplayMemory::Sample(std::size_t n, Rng& rng) const {
  if (n > items_.size()) {
    throw Error(ErrorCode::kInvalidArgument, "sample larger than memory");
  }
  std::vector<std::size_t> idx(items_.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t j = i + static_cast<std::size_t>(rng.Below(idx.size() - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(n);
  return idx;
}

bool ReplayMemory::operator==(const ReplayMemory& other) const {
  if (capacity_ != other.capacity_ || size() != other.size()) return false;
  for (std::size_t i = 0; i < size(); ++i) {
    if (!(at(i) == other.at(i))) return false;
  }
  return true;
}

std::size_t ArgMax(const std::vector<double>& q) {
  return static_cast<std::size_t>(std::max_element(q.begin(), q.end()) -
                                  q.begin());
}

std::size_t SelectAction(const LstmNetwork& policy,
                         const std::vector<double>& window, double eps,
                         Rng& rng, LstmNetwork::Cache& scratch) {
  const std::size_t actions = policy.shape().actions;
  if (eps > 0 && rng.Uniform() < eps) {
    return static_cast<std::size_t>(rng.Below(actions));
  }
  return ArgMax(
      policy.LastQ(window.data(), window.size() / kInputDim, scratch));
}

Agent::Agent(TrainConfig cfg, AgentContext ctx)
    : cfg_(cfg),
      ctx_(std::move(ctx)),
      encoder_(*ctx_.model, *ctx_.schema),
      policy_(LstmNetwork::Init(DeriveSeed(cfg_.seed, kNetworkStream),
                                ShapeFor(cfg_, *ctx_.model))),
      target_(policy_),
      adam_(policy_.params().size()),
      memory_(cfg_.replay_capacity),
      rng_(DeriveSeed(cfg_.seed, kAgentStream)) {
  cfg_.Validate();
  env_ = ctx_.make_env();
}

void Agent::Update() {
  const std::size_t H = cfg_.history_len;
  auto batch = memory_.Sample(cfg_.batch_size, rng_);
  grad_.assign(policy_.params().size(), 0.0);
  const double scale = 1.0 / static_cast<double>(batch.size());
  for (std::size_t i : batch) {
    const Experience& e = memory_.at(i);
    double y = e.reward;
    if (!e.done) {
      auto next_q = target_.LastQ(e.next_state.data(), H, cache_);
      y += cfg_.gamma * *std::max_element(next_q.begin(), next_q.end());
    }
    policy_.Forward(e.state.data(), H, cache_);
    double q = cache_.q[(H - 1) * policy_.shape().actions + e.action];
    policy_.Backward(cache_, e.action, HuberDerivative(q - y) * scale, grad_);
  }
  AdamStep(policy_.params(), grad_, adam_, cfg_.learning_rate);
}

RunResult Agent::Train(std::size_t episodes) {
  RunResult result;
  const std::size_t H = cfg_.history_len;
  LstmNetwork::Cache act_cache;
  for (std::size_t n = 0; n < episodes; ++n) {
    const std::int64_t ep = episodes_done_;
    auto choose = [&](const std::vector<double>& window) {
      double eps = Epsilon(steps_done_, cfg_);
      ++steps_done_;
      return SelectAction(policy_, window, eps, rng_, act_cache);
    };
    auto observe = [&](const std::vector<double>& before, std::size_t action,
                       double reward, const std::vector<double>& after,
                       bool done) {
      memory_.Push({before, static_cast<std::uint32_t>(action), reward, after,
                    done});
      if (memory_.size() >= cfg_.batch_size) Update();
    };
    EpisodeTrace trace = RunEpisode(
        *env_, DeriveSeed(cfg_.seed, kTrainEnvStream, static_cast<std::uint64_t>(ep)),
        ep, encoder_, *ctx_.constraints, H, cfg_.gamma, result.ledger, choose,
        observe);
    episode_rewards_.push_back(trace.cumulative_reward);
    result.traces.push_back(std::move(trace));
    ++episodes_done_;
    if (episodes_done_ % static_cast<std::int64_t>(cfg_.target_update) == 0) {
      target_ = policy_;
    }
  }
  result.episode_rewards = episode_rewards_;
  return result;
}

std::string Agent::SaveCheckpoint() const {
  BinaryWriter w;
  w.Bytes(SerializeNetwork(policy_, ctx_.model->actions()));
  w.Bytes(kTrainingMagic);
  w.U32(kTrainingVersion);
  w.U64(cfg_.history_len);
  w.F64s(target_.params());
  w.I64(adam_.step);
  w.F64s(adam_.m);
  w.F64s(adam_.v);
  w.I64(steps_done_);
  w.I64(episodes_done_);
  w.String(rng_.SaveState());
  w.F64s(episode_rewards_);
  w.U64(memory_.capacity());
  w.U64(memory_.size());
  for (std::size_t i = 0; i < memory_.size(); ++i) WriteExperience(w, memory_.at(i));
  return w.data();
}

void Agent::Resume(std::string_view checkpoint) {
  LstmNetwork loaded = LoadPolicy(checkpoint, *ctx_.model, cfg_.history_len);
  if (!(loaded.shape() == policy_.shape())) {
    throw Error(ErrorCode::kIncompatible, "checkpoint network shape differs");
  }
  policy_ = std::move(loaded);
  NetworkCheckpoint ck = ParseCheckpoint(checkpoint);
  BinaryReader r(ck.training_state);
  if (!r.StartsWith(kTrainingMagic)) {
    throw Error(ErrorCode::kState,
                "checkpoint carries no training state and cannot be resumed");
  }
  r.Bytes(kTrainingMagic.size());
  if (r.U32() != kTrainingVersion) {
    throw Error(ErrorCode::kIncompatible, "unsupported training state version");
  }
  if (r.U64() != cfg_.history_len) {
    throw Error(ErrorCode::kIncompatible, "checkpoint history length differs");
  }
  target_ = policy_;
  target_.params() = r.F64s();
  adam_ = AdamState(0);
  adam_.step = r.I64();
  adam_.m = r.F64s();
  adam_.v = r.F64s();
  const std::size_t n = policy_.params().size();
  if (target_.params().size() != n || adam_.m.size() != n || adam_.v.size() != n) {
    throw Error(ErrorCode::kParse, "training state does not match the network");
  }
  steps_done_ = r.I64();
  episodes_done_ = r.I64();
  rng_.LoadState(r.String());
  episode_rewards_ = r.F64s();
  std::uint64_t capacity = r.U64();
  if (capacity != cfg_.replay_capacity) {
    throw Error(ErrorCode::kIncompatible, "checkpoint replay capacity differs");
  }
  std::uint64_t count = r.U64();
  memory_ = ReplayMemory(capacity);
  for (std::uint64_t i = 0; i < count; ++i) memory_.Push(ReadExperience(r));
  if (!r.AtEnd()) throw Error(ErrorCode::kParse, "trailing checkpoint data");
}

LstmNetwork LoadPolicy(std::string_view checkpoint, const BehaviorModel& model,
                       std::size_t /*history_len*/) {
  NetworkCheckpoint ck = ParseCheckpoint(checkpoint);
  if (ck.actions != model.actions()) {
    throw Error(ErrorCode::kIncompatible,
                "checkpoint has " + std::to_string(ck.actions.size()) +
                    " actions but the machine declares " +
                    std::to_string(model.action_count()) +
                    " (or their names differ)");
  }
  if (ck.network.shape().input != kInputDim) {
    throw Error(ErrorCode::kIncompatible, "checkpoint input width differs");
  }
  return ck.network;
}

RunResult Evaluate(const LstmNetwork& policy, const TrainConfig& cfg,
                   const AgentContext& ctx, std::size_t episodes) {
  if (policy.shape().actions != ctx.model->action_count()) {
    throw Error(ErrorCode::kIncompatible,
                "policy output width does not match the machine");
  }
  RunResult result;
  Encoder encoder(*ctx.model, *ctx.schema);
  auto env = ctx.make_env();
  LstmNetwork::Cache cache;
  Rng unused(0);
  for (std::size_t ep = 0; ep < episodes; ++ep) {
    auto choose = [&](const std::vector<double>& window) {
      return SelectAction(policy, window, 0.0, unused, cache);
    };
    auto observe = [](const std::vector<double>&, std::size_t, double,
                      const std::vector<double>&, bool) {};
    EpisodeTrace trace = RunEpisode(
        *env, DeriveSeed(cfg.seed, kEvalEnvStream, ep),
        static_cast<std::int64_t>(ep), encoder, *ctx.constraints,
        cfg.history_len, cfg.gamma, result.ledger, choose, observe);
    result.episode_rewards.push_back(trace.cumulative_reward);
    result.traces.push_back(std::move(trace));
  }
  return result;
}

RunResult RandomBaseline(const TrainConfig& cfg, const AgentContext& ctx,
                         std::size_t episodes) {
  RunResult result;
  Encoder encoder(*ctx.model, *ctx.schema);
  auto env = ctx.make_env();
  Rng rng(DeriveSeed(cfg.seed, kBaselineStream));
  const std::size_t actions = ctx.model->action_count();
  for (std::size_t ep = 0; ep < episodes; ++ep) {
    auto choose = [&](const std::vector<double>&) {
      return static_cast<std::size_t>(rng.Below(actions));
    };
    auto observe = [](const std::vector<double>&, std::size_t, double,
                      const std::vector<double>&, bool) {};
    EpisodeTrace trace = RunEpisode(
        *env, DeriveSeed(cfg.seed, kEvalEnvStream, ep),
        static_cast<std::int64_t>(ep), encoder, *ctx.constraints,
        cfg.history_len, cfg.gamma, result.ledger, choose, observe);
    result.episode_rewards.push_back(trace.cumulative_reward);
    result.traces.push_back(std::move(trace));
  }
  return result;
}

}  // namespace uast
