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

#include "uast/sim.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "uast/error.h"

namespace uast {

namespace {

constexpr double kGravity = 9.81;
constexpr double kKnotsToMps = 0.514444;
constexpr double kHomeLat = -35.363261;
constexpr double kHomeLon = 149.165230;
constexpr double kHomeElevation = 584.0;
constexpr double kMetersPerDegree = 111320.0;
constexpr double kTurnBank = 15.0;
constexpr double kTurnRate = 20.0;
constexpr double kYawStep = 15.0;
constexpr double kSpeedStep = 3.0;

double WrapHeading(double h) {
  h = std::fmod(h, 360.0);
  if (h < 0) h += 360.0;
  if (h >= 360.0) h = 0.0;
  return h;
}

double WrapYaw(double y) {
  y = std::fmod(y + 180.0, 360.0);
  if (y < 0) y += 360.0;
  return y - 180.0;
}

bool KnownQuantity(std::string_view q) {
  const auto& all = SimQuantities();
  return std::find(all.begin(), all.end(), q) != all.end();
}

}  // namespace

std::string_view TerminalKindName(TerminalKind kind) {
  switch (kind) {
    case TerminalKind::kRunning: return "running";
    case TerminalKind::kCrashed: return "crashed";
    case TerminalKind::kGoal: return "goal";
    case TerminalKind::kStepLimit: return "step-limit";
    case TerminalKind::kAborted: return "aborted";
  }
  return "unknown";
}

TerminalKind ParseTerminalKind(std::string_view name) {
  for (auto k : {TerminalKind::kRunning, TerminalKind::kCrashed,
                 TerminalKind::kGoal, TerminalKind::kStepLimit,
                 TerminalKind::kAborted}) {
    if (TerminalKindName(k) == name) return k;
  }
  throw Error(ErrorCode::kParse,
              "unknown terminal kind '" + std::string(name) + "'");
}

const std::vector<std::string>& SimQuantities() {
  static const std::vector<std::string> kAll = {
      "altitude",    "airspeed",   "groundspeed", "roll",     "pitch",
      "yaw",         "heading",    "battery",     "distance", "thrust",
      "yaw_rate",    "roll_speed", "pitch_speed", "yaw_speed", "vx",
      "vy",          "vz",         "latitude",    "longitude", "altitude_msl",
      "voltage",     "current",
  };
  return kAll;
}

SimConfig SimConfig::FromKeyValues(const KeyValues& kv) {
  SimConfig c;
  std::map<std::string, FaultSpec> faults;
  for (const auto& [key, value] : kv.entries()) {
    if (key == "tick_ms") {
      c.tick_ms = static_cast<int>(kv.GetInt(key, c.tick_ms));
    } else if (key == "climb_rate") {
      c.climb_rate = kv.GetDouble(key, 0);
    } else if (key == "descent_rate") {
      c.descent_rate = kv.GetDouble(key, 0);
    } else if (key == "cruise_airspeed") {
      c.cruise_airspeed = kv.GetDouble(key, 0);
    } else if (key == "battery_drain_per_tick") {
      c.battery_drain_per_tick = kv.GetDouble(key, 0);
    } else if (key == "takeoff_altitude") {
      c.takeoff_altitude = kv.GetDouble(key, 0);
    } else if (key == "safe_landing_vz") {
      c.safe_landing_vz = kv.GetDouble(key, 0);
    } else if (key == "max_steps") {
      c.max_steps = static_cast<int>(kv.GetInt(key, 0));
    } else if (key == "seed") {
      c.seed = static_cast<std::uint64_t>(kv.GetInt(key, 0));
    } else if (key.rfind("noise.", 0) == 0) {
      std::string q = key.substr(6);
      if (!KnownQuantity(q)) {
        throw Error(ErrorCode::kInvalidArgument,
                    "noise for unknown quantity '" + q + "'");
      }
      c.noise[q] = kv.GetDouble(key, 0);
    } else if (key.rfind("fault.", 0) == 0) {
      std::size_t dot = key.rfind('.');
      if (dot <= 6) {
        throw Error(ErrorCode::kInvalidArgument,
                    "expected fault.<name>.<field>, got '" + key + "'");
      }
      std::string name = key.substr(6, dot - 6);
      std::string field = key.substr(dot + 1);
      FaultSpec& f = faults[name];
      f.name = name;
      if (field == "path") {
        f.path = value;
      } else if (field == "state") {
        f.state = value;
      } else if (field == "bias") {
        f.bias = kv.GetDouble(key, 0);
      } else if (field == "gain") {
        f.gain = kv.GetDouble(key, 1);
      } else if (field == "probability") {
        f.probability = kv.GetDouble(key, 1);
      } else if (field == "min_altitude") {
        f.min_altitude = kv.GetDouble(key, 0);
      } else if (field == "min_streak") {
        f.min_streak = static_cast<int>(kv.GetInt(key, 0));
      } else if (field == "window") {
        f.window = static_cast<int>(kv.GetInt(key, 0));
      } else {
        throw Error(ErrorCode::kInvalidArgument,
                    "unknown fault field '" + field + "'");
      }
    } else {
      throw Error(ErrorCode::kInvalidArgument,
                  "unknown simulator key '" + key + "'");
    }
  }
  for (auto& [name, f] : faults) c.faults.push_back(std::move(f));
  c.Validate();
  return c;
}

void SimConfig::Validate() const {
  auto bad = [](const std::string& msg) {
    throw Error(ErrorCode::kInvalidArgument, msg);
  };
  if (tick_ms <= 0) bad("tick_ms must be positive");
  if (!(climb_rate > 0)) bad("climb_rate must be positive");
  if (!(descent_rate > 0)) bad("descent_rate must be positive");
  if (!(cruise_airspeed > 0)) bad("cruise_airspeed must be positive");
  if (!(battery_drain_per_tick >= 0)) bad("battery_drain_per_tick must be >= 0");
  if (!(takeoff_altitude > 0)) bad("takeoff_altitude must be positive");
  if (!(safe_landing_vz > 0)) bad("safe_landing_vz must be positive");
  if (max_steps <= 0) bad("max_steps must be positive");
  for (const auto& [q, sd] : noise) {
    if (!(sd >= 0)) bad("noise." + q + " must be >= 0");
  }
  for (const auto& f : faults) {
    if (f.path.empty()) bad("fault '" + f.name + "' has no path");
    if (f.state.empty()) bad("fault '" + f.name + "' has no trigger state");
    if (!(f.probability >= 0 && f.probability <= 1)) {
      bad("fault '" + f.name + "' probability must be in [0,1]");
    }
    if (f.window < 0) bad("fault '" + f.name + "' window must be >= 0");
    if (f.min_streak < 0) bad("fault '" + f.name + "' min_streak must be >= 0");
  }
}

void SimConfig::Validate(const DomainSchema& schema,
                         const FlightStateMachine& machine) const {
  Validate();
  for (const auto& f : faults) {
    if (!schema.FindSlot(f.path)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "fault '" + f.name + "' targets unknown path '" + f.path + "'");
    }
    bool found = std::any_of(
        machine.states.begin(), machine.states.end(),
        [&](const StateDef& s) { return InState(s.name, f.state); });
    if (!found) {
      throw Error(ErrorCode::kInvalidArgument,
                  "fault '" + f.name + "' triggers on unknown state '" +
                      f.state + "'");
    }
  }
}

InternalSimulator::InternalSimulator(SimConfig config,
                                     std::shared_ptr<const BehaviorModel> model,
                                     std::shared_ptr<const DomainSchema> schema)
    : config_(std::move(config)),
      model_(std::move(model)),
      schema_(std::move(schema)) {
  config_.Validate(*schema_, model_->machine());
  for (const auto& f : schema_->fields()) {
    std::string q = f.source;
    if (q.empty() && f.tuple_slot != 0) q = std::string(TupleQuantity(f.tuple_slot));
    if (!q.empty() && !KnownQuantity(q)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "field '" + f.path + "' has unknown source '" + q + "'");
    }
    slot_quantity_.push_back(q);
  }
}

StepOutcome InternalSimulator::Reset(std::uint64_t seed) {
  rng_ = Rng(seed);
  body_ = Body{};
  body_.heading = std::floor(rng_.Uniform(0.0, 360.0));
  state_ = model_->initial_state();
  fault_active_.clear();
  for (const auto& f : config_.faults) {
    fault_active_.push_back(f.probability >= 1.0 || rng_.Uniform() < f.probability);
  }
  fault_ticks_.assign(config_.faults.size(), 0);
  accepted_streak_ = 0;
  snapshot_ = MakeSnapshot(schema_, model_->state_name(state_));
  status_ = TerminalKind::kRunning;
  reset_ = true;
  Emit(/*resample=*/false);
  StepOutcome out;
  out.snapshot = snapshot_;
  out.flight_state = snapshot_.flight_state;
  return out;
}

StepOutcome InternalSimulator::Step(std::size_t action) {
  if (!reset_) throw Error(ErrorCode::kState, "environment was not reset");
  if (status_ != TerminalKind::kRunning) {
    throw Error(ErrorCode::kState, "episode already terminated");
  }
  if (action >= model_->action_count()) {
    throw Error(ErrorCode::kInvalidArgument, "action index out of range");
  }
  StepOutcome out;
  ++snapshot_.tick;
  body_.battery = std::max(0.0, body_.battery - config_.battery_drain_per_tick);
  int next = model_->Next(state_, action);
  if (next < 0) {
    out.action_correct = false;
    accepted_streak_ = 0;
    Emit(/*resample=*/false);
  } else {
    std::size_t prev = state_;
    state_ = static_cast<std::size_t>(next);
    ++accepted_streak_;
    Integrate(prev, action);
    snapshot_.flight_state = model_->state_name(state_);
    Emit(/*resample=*/true);
  }
  if (status_ == TerminalKind::kRunning) {
    if (model_->IsGoal(state_) && body_.alt == 0.0) {
      status_ = TerminalKind::kGoal;
    } else if (snapshot_.tick >= config_.max_steps) {
      status_ = TerminalKind::kStepLimit;
    }
  }
  out.snapshot = snapshot_;
  out.flight_state = snapshot_.flight_state;
  out.crashed = status_ == TerminalKind::kCrashed;
  out.goal_reached = status_ == TerminalKind::kGoal;
  out.status = status_;
  return out;
}

// One tick of flight dynamics in the newly entered state. The vertical and
// speed regime follows the state's flight phase (the enclosing composite's
// phase for substates); turning substates add bank and yaw rate. A few
// events carry an extra command on top of the phase change.
void InternalSimulator::Integrate(std::size_t prev_state, std::size_t action) {
  const double dt = config_.dt();
  const StateDef& def = model_->state(state_);
  const std::string& phase =
      def.context_stereotype.empty() ? def.stereotype : def.context_stereotype;
  const std::string& event = model_->actions()[action];
  const bool same_top = TopLevelState(model_->state_name(prev_state)) ==
                        TopLevelState(model_->state_name(state_));
  Body& b = body_;
  b.prev_roll = b.roll;
  b.prev_pitch = b.pitch;
  b.roll = 0;
  b.pitch = 0;
  b.yaw_rate = 0;

  if (phase == "Disarmed") {
    b.thrust = 0;
    b.airspeed = b.groundspeed = 0;
    if (b.alt > 0) b.sink += kGravity * dt;
  } else if (phase == "Armed") {
    b.thrust = 0.15;
    b.airspeed = b.groundspeed = 0;
    b.sink = 0;
  } else if (phase == "Takeoff") {
    b.thrust = 0.6;
    b.airspeed = b.groundspeed = 0.2;
    if (b.alt < config_.takeoff_altitude) {
      b.sink = -config_.climb_rate;
    } else {
      b.sink = 0;
    }
  } else if (phase == "Climb") {
    b.thrust = 0.7;
    b.airspeed = 12;
    b.groundspeed = 8;
    b.pitch = 5;
    b.sink = -config_.climb_rate;
  } else if (phase == "Descent") {
    if (!same_top || b.sink_cmd <= 0) {
      b.sink_cmd = config_.descent_rate;
    } else if (event == "decreaseAlt") {
      b.sink_cmd += config_.descent_rate;
    }
    b.thrust = 0.3;
    b.airspeed = 8;
    b.groundspeed = 6;
    b.sink = b.alt > 0 ? b.sink_cmd : 0;
  } else if (phase == "AltitudeHold") {
    if (!same_top) b.gs_offset = 0;
    // The speed trim saturates after one step either way.
    if (event == "moveForward") b.gs_offset = std::min(b.gs_offset + kSpeedStep, kSpeedStep);
    if (event == "moveBackward") b.gs_offset = std::max(b.gs_offset - kSpeedStep, -kSpeedStep);
    b.thrust = 0.5;
    b.groundspeed = std::max(0.0, config_.cruise_airspeed + b.gs_offset);
    b.airspeed = b.groundspeed;
    b.pitch = b.gs_offset;
    b.sink = 0;
  } else if (phase == "PositionHold") {
    b.thrust = 0.5;
    b.airspeed = b.groundspeed = 0;
    b.sink = 0;
    if (event == "yawLeft") b.yaw_rate = -kYawStep / dt;
    if (event == "yawRight") b.yaw_rate = kYawStep / dt;
  } else if (phase == "Loiter") {
    b.thrust = 0.5;
    b.airspeed = b.groundspeed = 5;
    b.sink = 0;
  } else if (phase == "Circle") {
    b.thrust = 0.5;
    b.airspeed = b.groundspeed = 8;
    b.roll = 15;
    b.yaw_rate = 10;
    b.sink = 0;
  } else if (phase == "Approach") {
    b.thrust = 0.4;
    b.airspeed = 5;
    b.groundspeed = 3;
    b.sink = b.alt > 0 ? 1.0 : 0.0;
  } else if (phase == "Landing") {
    b.thrust = 0.3;
    b.airspeed = 2;
    b.groundspeed = 1;
    b.sink = b.alt > 0 ? 1.0 : 0.0;
  }

  if (!def.context_stereotype.empty()) {
    if (def.stereotype == "TurningLeft") {
      b.roll = -kTurnBank;
      b.yaw_rate = -kTurnRate;
    } else if (def.stereotype == "TurningRight") {
      b.roll = kTurnBank;
      b.yaw_rate = kTurnRate;
    }
  }

  b.yaw = WrapYaw(b.yaw + b.yaw_rate * dt);
  b.heading = WrapHeading(b.heading + b.yaw_rate * dt);
  const double ground_mps = b.groundspeed * kKnotsToMps;
  const double rad = b.heading * std::numbers::pi / 180.0;
  b.north += ground_mps * std::cos(rad) * dt;
  b.east += ground_mps * std::sin(rad) * dt;

  if (phase == "Takeoff" && b.sink < 0) {
    b.alt = std::min(b.alt - b.sink * dt, config_.takeoff_altitude);
  } else {
    b.alt -= b.sink * dt;
  }
  if (b.alt <= 0) {
    b.alt = 0;
    if (b.sink > config_.safe_landing_vz) {
      status_ = TerminalKind::kCrashed;
    } else {
      b.sink = 0;
    }
  }
  if (b.alt < 1.0 && std::abs(b.roll) > 90.0) status_ = TerminalKind::kCrashed;
}

double InternalSimulator::Quantity(std::string_view q) const {
  const Body& b = body_;
  const double dt = config_.dt();
  if (q == "altitude" || q == "distance") return b.alt;
  if (q == "airspeed") return b.airspeed;
  if (q == "groundspeed") return b.groundspeed;
  if (q == "roll") return b.roll;
  if (q == "pitch") return b.pitch;
  if (q == "yaw") return b.yaw;
  if (q == "heading") return b.heading;
  if (q == "battery") return b.battery;
  if (q == "thrust") return b.thrust;
  if (q == "yaw_rate" || q == "yaw_speed") return b.yaw_rate;
  if (q == "roll_speed") return (b.roll - b.prev_roll) / dt;
  if (q == "pitch_speed") return (b.pitch - b.prev_pitch) / dt;
  const double rad = b.heading * std::numbers::pi / 180.0;
  if (q == "vx") return b.groundspeed * kKnotsToMps * std::cos(rad);
  if (q == "vy") return b.groundspeed * kKnotsToMps * std::sin(rad);
  if (q == "vz") return b.sink;
  if (q == "latitude") return kHomeLat + b.north / kMetersPerDegree;
  if (q == "longitude") {
    return kHomeLon + b.east / (kMetersPerDegree *
                                std::cos(kHomeLat * std::numbers::pi / 180.0));
  }
  if (q == "altitude_msl") return kHomeElevation + b.alt;
  if (q == "voltage") return 10.5 + 2.1 * b.battery / 100.0;
  if (q == "current") return 1.0 + 40.0 * b.thrust;
  return 0.0;
}

// Writes telemetry into the snapshot. Without `resample` only the battery
// slots are refreshed, so an omitted action leaves every other reading as
// it was.
void InternalSimulator::Emit(bool resample) {
  const std::string& state_name = model_->state_name(state_);
  const bool full = resample || snapshot_.tick == 0;
  std::vector<bool> firing(config_.faults.size(), false);
  for (std::size_t i = 0; i < config_.faults.size(); ++i) {
    const FaultSpec& f = config_.faults[i];
    firing[i] = fault_active_[i] && InState(state_name, f.state) &&
                body_.alt >= f.min_altitude && accepted_streak_ >= f.min_streak &&
                (f.window == 0 || fault_ticks_[i] < f.window);
    if (firing[i] && full) ++fault_ticks_[i];
  }
  for (std::size_t slot = 0; slot < slot_quantity_.size(); ++slot) {
    const std::string& q = slot_quantity_[slot];
    if (q.empty()) continue;
    if (!resample && q != "battery" && snapshot_.tick > 0) continue;
    double v = Quantity(q);
    if (resample) {
      auto it = config_.noise.find(q);
      if (it != config_.noise.end() && it->second > 0) {
        v += it->second * rng_.Normal();
      }
    }
    const std::string& path = schema_->field(slot).path;
    for (std::size_t i = 0; i < config_.faults.size(); ++i) {
      const FaultSpec& f = config_.faults[i];
      if (firing[i] && f.path == path) {
        v = v * f.gain + f.bias;
      }
    }
    if (q == "altitude" || q == "distance" || q == "airspeed" ||
        q == "groundspeed" || q == "altitude_msl") {
      v = std::max(0.0, v);
    } else if (q == "heading") {
      v = WrapHeading(v);
    } else if (q == "battery") {
      v = std::clamp(v, 0.0, 100.0);
    }
    snapshot_.values[slot] = v;
  }
}

}  // namespace uast
