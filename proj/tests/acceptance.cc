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

// End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
// exits nonzero if any selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "constraint_oracle.h"
#include "gradient_check.h"
#include "test_util.h"
#include "uast/agent.h"
#include "uast/analysis.h"
#include "uast/constraint.h"
#include "uast/error.h"
#include "uast/neural.h"
#include "uast/project.h"
#include "uast/rng.h"
#include "uast/script.h"
#include "uast/stats.h"
#include "uast/text.h"
#include "uast/trace.h"

namespace uast {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string Fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), format, v);
  return buf;
}

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

// ---------------------------------------------------------------------------
// 1. Gradients

Outcome GradientCheck() {
  std::mt19937_64 gen(20260101);
  double worst = 0;
  for (int trial = 0; trial < 100; ++trial) {
    LstmShape s{1 + gen() % 6, 1 + gen() % 6, 1 + gen() % 3, 1 + gen() % 5};
    LstmNetwork net = LstmNetwork::Init(gen(), s);
    auto seq = testing::RandomSequence(gen, 1 + gen() % 5, s.input);
    const std::size_t action = gen() % s.actions;
    const double target = testing::SafeTarget(net, seq, action, gen);
    worst = std::max(worst, testing::MaxRelativeError(net, seq, action, target));
  }
  return {worst < 1e-4, "100 networks, max relative error " + Fmt("%.3g", worst)};
}

// ---------------------------------------------------------------------------
// 2. Constraint evaluation

Outcome ConstraintOracle() {
  auto schema = testing::ArduSchema();
  FlightStateMachine machine = testing::ArduMachine();
  FlightStateMachine flat = Flatten(machine);
  testing::RefUniverse u = testing::UniverseOf(*schema, machine);
  std::mt19937_64 gen(777);
  int cases = 0, agree = 0;
  while (cases < 1000) {
    auto ref = testing::RefRandomConstraint(u, gen);
    ConstraintSet cs = ParseConstraints(
        "R: context UAV inv: " + testing::RefRender(*ref, gen) + "\n", *schema, machine);
    Snapshot s = MakeSnapshot(schema, "");
    std::map<std::string, double> values;
    for (const auto& p : u.paths) {
      values[p] = testing::RefValue(gen);
      s.Set(p, values[p]);
    }
    s.flight_state = flat.states[gen() % flat.states.size()].name;
    EvalResult r = Evaluate(cs, s);
    testing::RefOutcome want = testing::RefCheck(*ref, values, s.flight_state);
    ++cases;
    if (want.evaluated == !r.evaluated.empty() && want.failed == !r.failed.empty()) ++agree;
  }

  ConstraintSet cs = ParseConstraints(ReadFile(testing::TestDataPath("uav_invariants.ocl")),
                                      *schema, machine);
  auto at = [&](std::string state, std::map<std::string, double> telemetry) {
    return Evaluate(cs, Populate(MakeSnapshot(schema, "Idle"), telemetry, std::move(state), 1));
  };
  auto has = [](const std::vector<std::string>& v, const char* id) {
    return std::find(v.begin(), v.end(), id) != v.end();
  };
  int forced = 0, forced_ok = 0;
  auto expect = [&](bool ok) {
    ++forced;
    if (ok) ++forced_ok;
  };
  EvalResult r = at("Ascend.Straight", {{"location.altitude_AGL", 150},
                                        {"rangefinder.distance", 150}});
  expect(has(r.evaluated, "C1") && !has(r.failed, "C1"));
  r = at("Takeoff", {{"location.altitude_AGL", 60}, {"thrust", 0.5}, {"rangefinder.distance", 60}});
  expect(has(r.failed, "C4") && !has(r.failed, "C3") && r.m() == 1);
  r = at("Cruise", {{"location.altitude_AGL", 60}});
  expect(!has(r.evaluated, "C4"));
  r = at("Ascend.TurningLeft", {{"location.altitude_AGL", 30}, {"rangefinder.distance", 30},
                                {"airspeed", 5}, {"groundspeed", 5}});
  expect(has(r.failed, "C7") && has(r.evaluated, "C8") && !has(r.failed, "C8") && r.m() == 1);

  return {agree == cases && forced_ok == forced,
          std::to_string(agree) + "/" + std::to_string(cases) + " random cases agree, " +
              std::to_string(forced_ok) + "/" + std::to_string(forced) + " forced outcomes"};
}

// ---------------------------------------------------------------------------
// 3, 4, 9. Trained run against the random baseline

struct TrainedRun {
  std::vector<double> train_rewards;
  RunResult eval;
  RunResult base;
  double train_seconds = 0;
  double eval_seconds = 0;
  std::string dir;
};

TrainedRun RunTrainedPipeline(const Project& project, const std::string& work) {
  TrainedRun run;
  run.dir = work;
  auto t0 = Clock::now();
  TrainOptions opts;
  opts.episodes = 500;
  run.train_rewards = RunTrain(project, work + "/train", opts);
  run.train_seconds = Seconds(t0);
  t0 = Clock::now();
  run.eval = RunEvaluate(project, work + "/train/checkpoint.bin", work + "/eval", 100);
  run.eval_seconds = Seconds(t0);
  run.base = RunBaseline(project, work + "/base", 100);
  return run;
}

Outcome ViolationSuperiority(const Project& project, const TrainedRun& run, double seconds) {
  ComparisonReport report =
      RunReport(project, run.dir + "/eval", run.dir + "/base", run.dir + "/report");
  std::size_t ait = 0, base = 0;
  std::vector<std::string> ahead;
  for (const auto& row : report.rows) {
    ait += row.ait_unique;
    base += row.base_unique;
    if (row.ait_unique > row.base_unique) ahead.push_back(row.state);
  }
  const bool never_behind = ait >= base;
  std::string detail = "unique " + std::to_string(ait) + " vs " + std::to_string(base);
  if (!ahead.empty()) {
    detail += "; ahead in";
    for (const auto& s : ahead) detail += " " + s;
  }
  detail += "; train " + Fmt("%.0f s", run.train_seconds);
  return {never_behind && !ahead.empty() && seconds <= 15 * 60, detail};
}

Outcome MarSuperiority(const Project& project, const TrainedRun& run) {
  const std::size_t episodes = run.train_rewards.size();
  RunResult random = RandomBaseline(project.train, project.Context(), episodes);
  const std::size_t n = DefaultMarWindow(episodes);
  MarSeries a = Mar(run.train_rewards, n);
  MarSeries b = Mar(random.episode_rewards, n);
  std::size_t wins = 0;
  for (std::size_t k = 0; k < a.values.size(); ++k) {
    if (a.values[k] > b.values[k]) ++wins;
  }
  const double share = static_cast<double>(wins) / static_cast<double>(a.values.size());
  return {share > 0.5, "window " + std::to_string(n) + ", AIT ahead at " +
                           std::to_string(wins) + "/" + std::to_string(a.values.size()) +
                           " indices, final MAR " + Fmt("%.2f", a.values.back()) + " vs " +
                           Fmt("%.2f", b.values.back())};
}

Outcome Throughput(const TrainedRun& run) {
  return {run.eval.traces.size() == 100 && run.eval_seconds < 300,
          "100 evaluation episodes in " + Fmt("%.2f s", run.eval_seconds)};
}

// ---------------------------------------------------------------------------
// 5. Diversity

std::vector<double> Contributions(const std::vector<EpisodeTrace>& traces) {
  std::vector<TransitionSet> sets;
  for (const auto& t : traces) sets.push_back(Transitions(t));
  return DiversityContributions(sets);
}

// References: the n = 10 table example (W = 8, exact two-sided p = 50/1024),
// plus an exact n = 12 case and a tied normal-approximation case computed
// with an independent statistics package.
bool WilcoxonOracles(std::string& detail) {
  struct Case {
    std::vector<double> d;
    double p;
  };
  const std::vector<Case> cases = {
      {{-1, -2, -5, 3, 4, 6, 7, 8, 9, 10}, 50.0 / 1024},
      {{1.5, -2.25, 3.5, 4.75, -0.5, 6.25, 7.5, 8.75, -9.5, 10.25, 11.5, 12.75}, 0.04248046875},
      {{2.4, -2.2, 0.8, -0.2, -0.1, 0.2, -1.6, 0.2, -0.5, 3.7, 0.6, 0.1, -0.3,
        -0.7, 0.9, 0.2, 1.4, 0.2, 0.4, 1.9, 0.9, -0.1, 0.2, 0.9, 2.3, 0.1,
        0.2, 1.4, -0.5, 0.1, 1.3, 1.0, 0.5, 1.1, -2.4, 1.4, -0.6, -1.3},
       0.03992432107303385},
  };
  double worst = 0;
  for (const auto& c : cases) {
    std::vector<double> zeros(c.d.size(), 0.0);
    worst = std::max(worst, std::abs(WilcoxonSignedRank(c.d, zeros).p - c.p));
  }
  detail = "Wilcoxon oracle max error " + Fmt("%.2g", worst);
  return worst < 1e-3;
}

Outcome DiversityDirection(const Project& project, const TrainedRun& run) {
  LstmNetwork policy = LoadPolicy(ReadFile(run.dir + "/train/checkpoint.bin"),
                                  *project.model, project.train.history_len);
  int nonnegative = 0;
  std::string deltas;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    TrainConfig cfg = project.train;
    cfg.seed = seed;
    RunResult ait = Evaluate(policy, cfg, project.Context(), 100);
    RunResult base = RandomBaseline(cfg, project.Context(), 100);
    const double delta = CliffsDelta(Contributions(ait.traces), Contributions(base.traces));
    if (delta >= 0) ++nonnegative;
    deltas += (deltas.empty() ? "" : " ") + Fmt("%.2f", delta);
  }
  std::string oracle;
  const bool oracle_ok = WilcoxonOracles(oracle);
  return {nonnegative >= 8 && oracle_ok, "delta >= 0 in " + std::to_string(nonnegative) +
                                             "/10 seeds [" + deltas + "]; " + oracle};
}

// ---------------------------------------------------------------------------
// 6. Trace arithmetic

void CheckTraces(const std::vector<EpisodeTrace>& traces, double gamma, std::size_t& steps,
                 std::size_t& bad) {
  for (const auto& t : traces) {
    std::vector<double> rewards;
    for (const auto& s : t.steps) {
      ++steps;
      if (s.reward != ComputeReward(s.correct, s.failed.size())) ++bad;
      if (!s.correct && !s.failed.empty()) ++bad;
      rewards.push_back(s.reward);
    }
    if (t.cumulative_reward != CumulativeReward(rewards, gamma)) ++bad;
  }
}

Outcome TraceArithmetic(const Project& project, const std::vector<std::string>& files,
                        const std::vector<const RunResult*>& runs) {
  std::size_t traces = 0, steps = 0, bad = 0;
  for (const auto* r : runs) {
    CheckTraces(r->traces, project.train.gamma, steps, bad);
    traces += r->traces.size();
  }
  for (const auto& f : files) {
    auto parsed = ReadTraceFile(project, f);
    CheckTraces(parsed, project.train.gamma, steps, bad);
    traces += parsed.size();
  }
  return {bad == 0 && traces > 0, std::to_string(traces) + " traces, " + std::to_string(steps) +
                                      " steps, " + std::to_string(bad) + " mismatches"};
}

// ---------------------------------------------------------------------------
// 7. Determinism

Outcome Determinism(const Project& project, const std::string& work) {
  fs::remove_all(work);
  auto train = [&](const std::string& dir, std::size_t episodes, const std::string& resume) {
    TrainOptions opts;
    opts.episodes = episodes;
    opts.resume = resume;
    RunTrain(project, dir, opts);
  };
  train(work + "/a", 20, "");
  train(work + "/b", 20, "");
  train(work + "/c", 12, "");
  train(work + "/c", 8, work + "/c/checkpoint.bin");
  std::vector<std::string> mismatched;
  for (const char* file : {"checkpoint.bin", "trace.csv", "mar.dat"}) {
    const std::string a = ReadFile(work + "/a/" + file);
    if (a != ReadFile(work + "/b/" + file)) mismatched.push_back(std::string("repeat ") + file);
    if (a != ReadFile(work + "/c/" + file)) mismatched.push_back(std::string("resume ") + file);
  }
  std::string detail = mismatched.empty() ? "repeat and 12+8 resume byte-identical to 20"
                                          : "differs:";
  for (const auto& m : mismatched) detail += " " + m;
  return {mismatched.empty(), detail};
}

// ---------------------------------------------------------------------------
// 8. Script round trip

std::optional<std::uint64_t> HeaderSeed(const std::string& script) {
  static const std::regex kSeed("seed ([0-9]+)");
  std::smatch m;
  if (!std::regex_search(script, m, kSeed)) return std::nullopt;
  return std::stoull(m[1]);
}

bool AllCorrect(const EpisodeTrace& t) {
  return !t.steps.empty() &&
         std::all_of(t.steps.begin(), t.steps.end(), [](const StepRecord& s) { return s.correct; });
}

// Legal random walks, recorded straight from the simulator.
std::vector<EpisodeTrace> LegalWalks(const Project& project, std::size_t count) {
  std::vector<EpisodeTrace> out;
  std::mt19937_64 gen(99);
  const BehaviorModel& model = *project.model;
  for (std::size_t e = 0; e < count; ++e) {
    auto env = project.Context().make_env();
    const std::uint64_t seed = DeriveSeed(project.train.seed, kEvalEnvStream, e);
    StepOutcome o = env->Reset(seed);
    EpisodeTrace t;
    t.episode = static_cast<std::int64_t>(e);
    t.initial_state = o.flight_state;
    while (!o.crashed && !o.goal_reached && t.steps.size() < 60) {
      std::vector<std::size_t> legal;
      const std::size_t s = model.StateIndex(o.flight_state);
      for (std::size_t a = 0; a < model.action_count(); ++a) {
        if (model.IsLegal(s, a)) legal.push_back(a);
      }
      if (legal.empty()) break;
      const std::size_t a = legal[gen() % legal.size()];
      o = env->Step(a);
      StepRecord r;
      r.tick = o.snapshot.tick;
      r.state = o.flight_state;
      r.action = model.actions()[a];
      r.correct = o.action_correct;
      t.steps.push_back(r);
      if (o.status != TerminalKind::kRunning) break;
    }
    out.push_back(t);
  }
  return out;
}

Outcome ScriptRoundTrip(const Project& project, const TrainedRun* run, const std::string& work) {
  fs::remove_all(work);
  fs::create_directories(work);
  std::vector<EpisodeTrace> ait;
  if (run) {
    for (const auto& t : run->eval.traces) {
      if (AllCorrect(t)) ait.push_back(t);
    }
  }
  std::string text;
  for (const auto& t : ait) text += FormatTrace(t);
  WriteFile(work + "/ait.csv", text);

  ExportOptions opts;
  opts.trace_path = work + "/ait.csv";
  opts.template_path = testing::DataPath("internal_sim.tmpl");
  std::vector<std::string> scripts;
  std::vector<EpisodeTrace> originals;
  if (!ait.empty()) {
    scripts = RunExportScript(project, work + "/ait", opts);
    originals = ait;
  }
  const std::size_t ait_count = scripts.size();

  CommandTemplate tmpl = ParseTemplate(ReadFile(opts.template_path));
  for (const auto& t : LegalWalks(project, 50)) {
    if (!AllCorrect(t)) continue;
    const std::uint64_t seed =
        DeriveSeed(project.train.seed, kEvalEnvStream, static_cast<std::uint64_t>(t.episode));
    const std::string path = work + "/walk_" + std::to_string(t.episode) + ".script";
    WriteFile(path, ExportScript(t, tmpl, seed));
    scripts.push_back(path);
    originals.push_back(t);
  }

  std::size_t matched = 0;
  for (std::size_t i = 0; i < scripts.size(); ++i) {
    const std::string script = ReadFile(scripts[i]);
    auto seed = HeaderSeed(script);
    if (!seed) continue;
    auto env = project.Context().make_env();
    std::vector<std::string> replayed = ReplayScript(script, *env, *seed);
    std::vector<std::string> expected;
    for (const auto& s : originals[i].steps) expected.push_back(s.state);
    if (replayed == expected) ++matched;
  }
  return {!scripts.empty() && matched == scripts.size(),
          std::to_string(matched) + "/" + std::to_string(scripts.size()) +
              " scripts reproduce their state sequence (" + std::to_string(ait_count) +
              " from correct-only evaluation traces)"};
}

}  // namespace
}  // namespace uast

int main(int argc, char** argv) {
  using namespace uast;
  CLI::App app{"Runs the acceptance criteria"};
  std::string work = (fs::temp_directory_path() / "uast_acceptance").string();
  std::string config = testing::DataPath("arducopter.cfg");
  std::vector<int> only;
  app.add_option("--work", work, "Scratch directory");
  app.add_option("--config", config, "Project configuration");
  app.add_option("--only", only, "Run only these criteria")->check(CLI::Range(1, 9));
  CLI11_PARSE(app, argc, argv);

  std::set<int> selected(only.begin(), only.end());
  if (selected.empty()) selected = {1, 2, 3, 4, 5, 6, 7, 8, 9};
  auto wanted = [&](int c) { return selected.count(c) > 0; };

  bool all_pass = true;
  auto report = [&](int id, const std::function<Outcome()>& fn) {
    if (!wanted(id)) return;
    auto t0 = Clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    std::printf("CRITERION %d %s: %s (%.1f s)\n", id, o.pass ? "PASS" : "FAIL",
                o.detail.c_str(), Seconds(t0));
    std::fflush(stdout);
    all_pass = all_pass && o.pass;
  };

  try {
    fs::create_directories(work);
    Project project = LoadProject(config);

    report(1, GradientCheck);
    report(2, ConstraintOracle);

    std::optional<TrainedRun> run;
    double pipeline_seconds = 0;
    if (wanted(3) || wanted(4) || wanted(5) || wanted(6) || wanted(8) || wanted(9)) {
      fs::remove_all(work + "/run");
      auto t0 = Clock::now();
      run = RunTrainedPipeline(project, work + "/run");
      pipeline_seconds = Seconds(t0);
    }
    report(3, [&] { return ViolationSuperiority(project, *run, pipeline_seconds); });
    report(4, [&] { return MarSuperiority(project, *run); });
    report(5, [&] { return DiversityDirection(project, *run); });

    report(7, [&] { return Determinism(project, work + "/determinism"); });
    report(6, [&] {
      std::vector<std::string> files = {work + "/run/train/trace.csv",
                                        work + "/run/eval/trace.csv",
                                        work + "/run/base/trace.csv"};
      if (wanted(7)) files.push_back(work + "/determinism/c/trace.csv");
      return TraceArithmetic(project, files, {&run->eval, &run->base});
    });
    report(8, [&] { return ScriptRoundTrip(project, run ? &*run : nullptr, work + "/scripts"); });
    report(9, [&] { return Throughput(*run); });
  } catch (const std::exception& e) {
    std::fprintf(stderr, "acceptance: %s\n", e.what());
    return 2;
  }
  return all_pass ? 0 : 1;
}
