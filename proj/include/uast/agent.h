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

// DQN test agent: reward, exploration schedule, replay memory, and the
// training / evaluation / random-baseline loops over an Environment.

#ifndef UAST_AGENT_H_
#define UAST_AGENT_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "uast/behavior_model.h"
#include "uast/constraint.h"
#include "uast/domain_model.h"
#include "uast/neural.h"
#include "uast/rng.h"
#include "uast/sim.h"
#include "uast/text.h"
#include "uast/trace.h"

namespace uast {

struct TrainConfig {
  double learning_rate = 0.001;
  std::size_t batch_size = 128;
  std::size_t replay_capacity = 1024;
  std::size_t target_update = 10;  // episodes
  double gamma = 0.999;
  double eps_start = 1.0;
  double eps_end = 0.01;
  double eps_decay = 100;  // action steps
  std::size_t training_episodes = 1000;
  std::size_t evaluation_episodes = 100;
  std::size_t history_len = 4;
  std::size_t hidden = 10;
  std::size_t layers = 3;
  std::size_t checkpoint_every = 0;  // episodes, 0 = only at the end
  std::uint64_t seed = 0;

  // Keys as the field names above.
  static TrainConfig FromKeyValues(const KeyValues& kv);
  void Validate() const;
};

double ComputeReward(bool action_correct, std::size_t m);

// Sum over t of gamma^t * r_t, with gamma^t formed by repeated
// multiplication in step order.
double CumulativeReward(const std::vector<double>& rewards, double gamma);

double Epsilon(std::int64_t step, const TrainConfig& cfg);

constexpr std::size_t kInputDim = 10;

// Maps a snapshot to the 10 network inputs: the flight-state index scaled to
// [0,1) and the nine tuple quantities min-max scaled by their schema ranges.
class Encoder {
 public:
  Encoder(const BehaviorModel& model, const DomainSchema& schema);
  void Encode(const Snapshot& snapshot, double* out) const;

 private:
  const BehaviorModel& model_;
  std::array<std::size_t, 9> slots_{};
  std::array<double, 9> lo_{}, span_{};
};

// Fixed-length history of encodings, oldest first, zero-padded at the
// start of an episode.
class HistoryWindow {
 public:
  explicit HistoryWindow(std::size_t length) : length_(length) { Reset(); }
  void Reset() { data_.assign(length_ * kInputDim, 0.0); }
  void Push(const double* row);
  const std::vector<double>& data() const { return data_; }

 private:
  std::size_t length_;
  std::vector<double> data_;
};

struct Experience {
  std::vector<double> state;  // history_len x kInputDim
  std::uint32_t action = 0;
  double reward = 0;
  std::vector<double> next_state;
  bool done = false;

  bool operator==(const Experience& other) const = default;
};

class ReplayMemory {
 public:
  explicit ReplayMemory(std::size_t capacity);

  void Push(Experience e);
  std::size_t size() const { return items_.size(); }
  std::size_t capacity() const { return capacity_; }
  // i = 0 is the oldest stored experience.
  const Experience& at(std::size_t i) const;
  // Distinct indices, uniformly without replacement.
  std::vector<std::size_t> Sample(std::size_t n, Rng& rng) const;

  bool operator==(const ReplayMemory& other) const;

 private:
  friend class Agent;
  std::size_t capacity_;
  std::vector<Experience> items_;
  std::size_t head_ = 0;  // next slot to overwrite once full
};

// Greedy when rng draws above eps, otherwise uniform over every action.
std::size_t SelectAction(const LstmNetwork& policy,
                         const std::vector<double>& window, double eps,
                         Rng& rng, LstmNetwork::Cache& scratch);

std::size_t ArgMax(const std::vector<double>& q);

// Everything one run needs besides its configuration.
struct AgentContext {
  std::shared_ptr<const BehaviorModel> model;
  std::shared_ptr<const DomainSchema> schema;
  std::shared_ptr<const ConstraintSet> constraints;
  std::function<std::unique_ptr<Environment>()> make_env;
};

struct RunResult {
  std::vector<EpisodeTrace> traces;
  ViolationLedger ledger;
  std::vector<double> episode_rewards;  // cumulative reward per episode
};

// Seed streams derived from the run seed.
enum SeedStream : std::uint64_t {
  kNetworkStream = 1,
  kAgentStream = 2,
  kTrainEnvStream = 3,
  kEvalEnvStream = 4,
  kBaselineStream = 5,
};

class Agent {
 public:
  Agent(TrainConfig cfg, AgentContext ctx);

  // Trains for `episodes` more episodes. Traces of these episodes only are
  // returned; episode_rewards covers the whole run including resumed ones.
  RunResult Train(std::size_t episodes);

  // Full checkpoint including training state.
  std::string SaveCheckpoint() const;
  // Restores a checkpoint written by SaveCheckpoint. Throws kIncompatible on
  // dimension or action mismatch and kState if the training block is absent.
  void Resume(std::string_view checkpoint);

  const LstmNetwork& policy() const { return policy_; }
  std::int64_t steps_done() const { return steps_done_; }
  std::int64_t episodes_done() const { return episodes_done_; }
  const ReplayMemory& memory() const { return memory_; }
  const LstmNetwork& target() const { return target_; }

 private:
  void Update();

  TrainConfig cfg_;
  AgentContext ctx_;
  Encoder encoder_;
  LstmNetwork policy_;
  LstmNetwork target_;
  AdamState adam_;
  ReplayMemory memory_;
  Rng rng_;
  std::int64_t steps_done_ = 0;
  std::int64_t episodes_done_ = 0;
  std::vector<double> episode_rewards_;
  std::unique_ptr<Environment> env_;
  LstmNetwork::Cache cache_;
  std::vector<double> grad_;
};

// Loads a checkpoint and checks it against the model's action list.
LstmNetwork LoadPolicy(std::string_view checkpoint, const BehaviorModel& model,
                       std::size_t history_len);

// Greedy rollouts with no learning. Episode i uses environment seed
// DeriveSeed(seed, kEvalEnvStream, i).
RunResult Evaluate(const LstmNetwork& policy, const TrainConfig& cfg,
                   const AgentContext& ctx, std::size_t episodes);

// Uniform random actions under the same environment seeds as Evaluate.
RunResult RandomBaseline(const TrainConfig& cfg, const AgentContext& ctx,
                         std::size_t episodes);

}  // namespace uast

#endif  // UAST_AGENT_H_
