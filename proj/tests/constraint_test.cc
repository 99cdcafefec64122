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

#include "uast/constraint.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "constraint_oracle.h"
#include "test_util.h"
#include "uast/error.h"

namespace uast {
namespace {

using testing::ArduMachine;
using testing::ArduSchema;

class ConstraintTest : public ::testing::Test {
 protected:
  void SetUp() override {
    schema_ = ArduSchema();
    machine_ = ArduMachine();
  }
  ConstraintSet Parse(std::string_view text) {
    return ParseConstraints(text, *schema_, machine_);
  }
  Snapshot At(std::string state, std::map<std::string, double> telemetry) {
    return Populate(MakeSnapshot(schema_, "Idle"), telemetry, std::move(state), 1);
  }

  std::shared_ptr<const DomainSchema> schema_;
  FlightStateMachine machine_;
};

TEST_F(ConstraintTest, ReferenceInvariantFile) {
  ConstraintSet cs = Parse(ReadFile(testing::TestDataPath("uav_invariants.ocl")));
  ASSERT_EQ(cs.size(), 10u);
  std::map<std::string, int> scoped;
  int general = 0;
  for (const auto& c : cs) {
    if (c.is_general()) {
      ++general;
    } else {
      ++scoped[*c.scope];
    }
    EXPECT_EQ(c.context, "UAV");
  }
  EXPECT_EQ(general, 2);
  EXPECT_EQ(scoped, (std::map<std::string, int>{
                        {"Ascend", 2}, {"Descent", 2}, {"Landing", 2}, {"Takeoff", 2}}));
}

TEST_F(ConstraintTest, ReferenceInvariantOutcomes) {
  ConstraintSet cs = Parse(ReadFile(testing::TestDataPath("uav_invariants.ocl")));
  auto has = [](const std::vector<std::string>& v, const char* id) {
    return std::find(v.begin(), v.end(), id) != v.end();
  };
  // C1 passes at 150 m.
  EvalResult r = Evaluate(cs, At("Ascend.Straight", {{"location.altitude_AGL", 150},
                                                     {"rangefinder.distance", 150}}));
  EXPECT_TRUE(has(r.evaluated, "C1"));
  EXPECT_FALSE(has(r.failed, "C1"));
  // C4 fails in Takeoff at 60 m.
  r = Evaluate(cs, At("Takeoff", {{"location.altitude_AGL", 60}, {"thrust", 0.5},
                                  {"rangefinder.distance", 60}}));
  EXPECT_TRUE(has(r.failed, "C4"));
  EXPECT_FALSE(has(r.failed, "C3"));
  EXPECT_EQ(r.m(), 1u);
  // Outside Takeoff C4 is not evaluated at all.
  r = Evaluate(cs, At("Cruise", {{"location.altitude_AGL", 60}}));
  EXPECT_FALSE(has(r.evaluated, "C4"));
  EXPECT_FALSE(has(r.failed, "C4"));
  // Substates are inside their composite's scope.
  r = Evaluate(cs, At("Ascend.TurningLeft", {{"location.altitude_AGL", 30},
                                             {"rangefinder.distance", 30},
                                             {"airspeed", 5},
                                             {"groundspeed", 5}}));
  EXPECT_TRUE(has(r.failed, "C7"));
  EXPECT_TRUE(has(r.evaluated, "C8"));
  EXPECT_FALSE(has(r.failed, "C8"));
  EXPECT_EQ(r.m(), 1u);
}

TEST_F(ConstraintTest, LiteralAndErrors) {
  ConstraintSet cs = Parse("C1: context UAV inv: true\n");
  ASSERT_EQ(cs.size(), 1u);
  EXPECT_TRUE(cs[0].is_general());
  EXPECT_EQ(cs[0].body->kind, Expr::Kind::kBool);
  EXPECT_TRUE(cs[0].body->value);

  auto fails = [&](std::string_view text, int line) {
    try {
      Parse(text);
      ADD_FAILURE() << text;
    } catch (const ParseError& e) {
      EXPECT_EQ(e.line(), line) << text;
    }
  };
  fails("Cx: context UAV inv: self.foo > 1\n", 1);
  fails("# c\nC1: context UAV inv: self.oclIsInState(Hover) and self.thrust > 0\n", 2);
  fails("C1: context UAV inv: true\nC1: context UAV inv: false\n", 2);
  fails("C1: context Rocket inv: true\n", 1);
  fails("C1: context UAV inv: self.thrust > \n", 1);
  fails("C1: context UAV inv: (self.thrust > 1\n", 1);
  fails("C1 context UAV inv: true\n", 1);
}

TEST_F(ConstraintTest, EnumLiteralsCompareByCode) {
  ConstraintSet cs = Parse("C1: context ArduCopter inv: self.type = MultiCopter\n");
  EXPECT_EQ(Evaluate(cs, At("Idle", {{"type", 0}})).m(), 0u);
  EXPECT_EQ(Evaluate(cs, At("Idle", {{"type", 2}})).m(), 1u);
}

TEST(ViolationLedger, CountsTotalsAndUniques) {
  ViolationLedger ledger;
  for (int i = 0; i < 10; ++i) ledger.Record("Climb", std::vector<std::string>{"C7"});
  EXPECT_EQ(ledger.Total("Climb", "C7"), 10);
  EXPECT_EQ(ledger.StateUnique("Climb"), 1u);
  ledger.Record("Landing", EvalResult{});
  EXPECT_EQ(ledger.GrandTotal(), 10);
  ledger.Record("Landing", std::vector<std::string>{"C5"});
  ledger.Record("Landing", std::vector<std::string>{"C6"});
  EXPECT_EQ(ledger.StateUnique("Landing"), 2u);
  EXPECT_EQ(ledger.StateTotal("Landing"), 2);
  EXPECT_EQ(ledger.GrandUnique(), 3u);
}

TEST(ViolationLedger, MonotoneUniquesAndTotalAtLeastUnique) {
  std::mt19937_64 gen(5);
  ViolationLedger ledger;
  std::size_t prev_unique = 0;
  const char* states[] = {"Takeoff", "Landing", "Loiter"};
  for (int i = 0; i < 2000; ++i) {
    std::vector<std::string> failed;
    for (int k = 0; k < 5; ++k) {
      if (gen() % 3 == 0) failed.push_back("C" + std::to_string(k));
    }
    ledger.Record(states[gen() % 3], failed);
    EXPECT_GE(ledger.GrandUnique(), prev_unique);
    prev_unique = ledger.GrandUnique();
  }
  for (const char* s : states) {
    EXPECT_GE(static_cast<std::size_t>(ledger.StateTotal(s)), ledger.StateUnique(s));
  }
}

// Property: the evaluator agrees with the reference on random constraints
// and snapshots, and m does not depend on constraint order.
TEST_F(ConstraintTest, AgreesWithReferenceInterpreter) {
  testing::RefUniverse u = testing::UniverseOf(*schema_, machine_);
  FlightStateMachine flat = Flatten(machine_);
  std::mt19937_64 gen(424242);
  for (int round = 0; round < 200; ++round) {
    std::vector<std::shared_ptr<testing::RefNode>> refs;
    std::string text;
    for (int i = 0; i < 5; ++i) {
      refs.push_back(testing::RefRandomConstraint(u, gen));
      text += "R" + std::to_string(i) + ": context UAV inv: " + testing::RefRender(*refs.back(), gen) +
              "\n";
    }
    ConstraintSet cs = Parse(text);
    ConstraintSet reversed(cs.rbegin(), cs.rend());
    for (int k = 0; k < 5; ++k) {
      Snapshot s = MakeSnapshot(schema_, "");
      std::map<std::string, double> values;
      for (const auto& p : u.paths) {
        values[p] = testing::RefValue(gen);
        s.Set(p, values[p]);
      }
      s.flight_state = flat.states[gen() % flat.states.size()].name;
      EvalResult r = Evaluate(cs, s);
      for (int i = 0; i < 5; ++i) {
        const std::string id = "R" + std::to_string(i);
        testing::RefOutcome want = testing::RefCheck(*refs[static_cast<std::size_t>(i)], values,
                                                     s.flight_state);
        auto in = [&](const std::vector<std::string>& v) {
          return std::find(v.begin(), v.end(), id) != v.end();
        };
        ASSERT_EQ(in(r.evaluated), want.evaluated) << text << s.flight_state;
        ASSERT_EQ(in(r.failed), want.failed) << text << s.flight_state;
      }
      EXPECT_EQ(Evaluate(reversed, s).m(), r.m());
    }
  }
}

TEST_F(ConstraintTest, ProjectConstraintFileParses) {
  ConstraintSet cs = Parse(ReadFile(testing::DataPath("arducopter.ocl")));
  EXPECT_EQ(cs.size(), 28u);
  std::size_t general = std::count_if(cs.begin(), cs.end(),
                                      [](const Constraint& c) { return c.is_general(); });
  EXPECT_EQ(general, 2u);
}

TEST_F(ConstraintTest, SchemaMismatchIsAnError) {
  ConstraintSet cs = Parse("C1: context UAV inv: self.battery.level > 0\n");
  auto other = std::make_shared<const DomainSchema>(
      ParseDomainSchema("class A stereotype=UAV\n  field x kind=num units=m\n"));
  EXPECT_THROW(Evaluate(cs, MakeSnapshot(other)), Error);
}

}  // namespace
}  // namespace uast
