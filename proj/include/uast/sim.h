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

// Goal-based flight environments: the internal quadcopter simulator and a
// telemetry replay backend, both behind the Environment interface.

#ifndef UAST_SIM_H_
#define UAST_SIM_H_

#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "uast/behavior_model.h"
#include "uast/domain_model.h"
#include "uast/rng.h"
#include "uast/text.h"

namespace uast {

enum class TerminalKind { kRunning, kCrashed, kGoal, kStepLimit, kAborted };

std::string_view TerminalKindName(TerminalKind kind);
TerminalKind ParseTerminalKind(std::string_view name);

// Perturbation of one emitted telemetry path while the vehicle is in
// `state` (or a substate of it): emitted = true * gain + bias.
struct FaultSpec {
  std::string name;
  std::string path;
  std::string state;
  double bias = 0.0;
  double gain = 1.0;
  double probability = 1.0;  // chance the fault is active in an episode
  // The fault fires only at or above this true altitude (m).
  double min_altitude = -std::numeric_limits<double>::infinity();
  // Number of firing ticks per episode; 0 means unlimited. Models defects
  // that show up shortly after a mode is engaged and then settle.
  int window = 0;
  // The fault fires only after this many consecutive accepted actions.
  int min_streak = 0;
};

struct SimConfig {
  int tick_ms = 500;
  double climb_rate = 2.0;       // m/s
  double descent_rate = 2.0;     // m/s, added per decreaseAlt in Descent
  double cruise_airspeed = 15.0; // knots
  double battery_drain_per_tick = 0.05;
  double takeoff_altitude = 20.0;
  double safe_landing_vz = 5.0;  // ground contact faster than this crashes
  std::map<std::string, double> noise;  // quantity -> std-dev
  std::vector<FaultSpec> faults;
  int max_steps = 100;
  std::uint64_t seed = 0;

  double dt() const { return tick_ms / 1000.0; }

  // Reads keys tick_ms, climb_rate, ..., noise.<quantity>,
  // fault.<name>.{path,state,bias,gain,probability,min_altitude,window,
  // min_streak},
  // max_steps, seed.
  static SimConfig FromKeyValues(const KeyValues& kv);
  void Validate() const;
  // Checks fault paths and trigger states against the models.
  void Validate(const DomainSchema& schema,
                const FlightStateMachine& machine) const;
};

struct StepOutcome {
  Snapshot snapshot;
  std::string flight_state;
  bool action_correct = true;
  bool crashed = false;
  bool goal_reached = false;
  TerminalKind status = TerminalKind::kRunning;
};

class Environment {
 public:
  virtual ~Environment() = default;

  virtual const BehaviorModel& model() const = 0;
  virtual StepOutcome Reset(std::uint64_t seed) = 0;
  // Throws kState when the episode has already terminated.
  virtual StepOutcome Step(std::size_t action) = 0;
  virtual Snapshot Observe() const = 0;
  virtual TerminalKind Status() const = 0;

  StepOutcome Step(std::string_view action) {
    return Step(model().ActionIndex(action));
  }
};

// Simulated quantities the schema may bind to via tuple slots or source=.
const std::vector<std::string>& SimQuantities();

class InternalSimulator : public Environment {
 public:
  InternalSimulator(SimConfig config, std::shared_ptr<const BehaviorModel> model,
                    std::shared_ptr<const DomainSchema> schema);

  const BehaviorModel& model() const override { return *model_; }
  StepOutcome Reset(std::uint64_t seed) override;
  StepOutcome Step(std::size_t action) override;
  using Environment::Step;
  Snapshot Observe() const override { return snapshot_; }
  TerminalKind Status() const override { return status_; }

  const SimConfig& config() const { return config_; }
  // True (unperturbed) altitude, for tests.
  double true_altitude() const { return body_.alt; }

 private:
  struct Body {
    double alt = 0, sink = 0, sink_cmd = 0;
    double airspeed = 0, groundspeed = 0, gs_offset = 0;
    double roll = 0, pitch = 0, yaw = 0, heading = 0;
    double prev_roll = 0, prev_pitch = 0;
    double yaw_rate = 0, thrust = 0, battery = 100;
    double north = 0, east = 0;
  };

  void Integrate(std::size_t prev_state, std::size_t action);
  void Emit(bool resample);
  double Quantity(std::string_view q) const;

  SimConfig config_;
  std::shared_ptr<const BehaviorModel> model_;
  std::shared_ptr<const DomainSchema> schema_;
  std::vector<std::string> slot_quantity_;  // per schema slot, may be empty
  Rng rng_;
  Body body_;
  std::size_t state_ = 0;
  std::vector<bool> fault_active_;
  std::vector<int> fault_ticks_;  // firing ticks used per fault this episode
  int accepted_streak_ = 0;       // consecutive accepted actions
  Snapshot snapshot_;
  TerminalKind status_ = TerminalKind::kRunning;
  bool reset_ = false;
};

// Replays recorded telemetry: one record per line, `<tick> path=value ...`.
// The behavior model still judges action legality; telemetry for tick t is
// taken from the latest record with tick <= t.
class ReplayBackend : public Environment {
 public:
  ReplayBackend(std::string_view records,
                std::shared_ptr<const BehaviorModel> model,
                std::shared_ptr<const DomainSchema> schema, int max_steps);

  const BehaviorModel& model() const override { return *model_; }
  StepOutcome Reset(std::uint64_t seed) override;
  StepOutcome Step(std::size_t action) override;
  using Environment::Step;
  Snapshot Observe() const override { return snapshot_; }
  TerminalKind Status() const override { return status_; }

 private:
  void Apply(std::int64_t tick);

  std::shared_ptr<const BehaviorModel> model_;
  std::shared_ptr<const DomainSchema> schema_;
  std::vector<std::pair<std::int64_t, std::map<std::string, double>>> records_;
  int max_steps_;
  std::size_t state_ = 0;
  std::size_t next_record_ = 0;
  Snapshot snapshot_;
  TerminalKind status_ = TerminalKind::kRunning;
  bool reset_ = false;
};

}  // namespace uast

#endif  // UAST_SIM_H_
