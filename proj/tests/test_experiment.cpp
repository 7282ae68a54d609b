#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ecrl/experiment/runner.hpp"

namespace ecrl::experiment {
namespace {

namespace fs = std::filesystem;

fs::path task_path(const std::string& name) { return fs::path(ECRL_TASKS_DIR) / (name + ".json"); }

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("ecrl_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

TaskFile short_red_green(std::size_t steps = 3000) {
  auto t = load_task(task_path("gridworld_red_green"));
  t.train.total_steps = steps;
  return t;
}

RunSpec spec(learn::Strategy s, std::uint64_t seed) {
  RunSpec r;
  r.strategy = s;
  r.seed = seed;
  return r;
}

std::string csv(const learn::MetricsLog& log) {
  std::ostringstream os;
  log.write_csv(os);
  return os.str();
}

TEST(Tasks, EveryTaskFileLoadsAndCompiles) {
  for (const auto& entry : fs::directory_iterator(ECRL_TASKS_DIR)) {
    if (entry.path().extension() != ".json") continue;
    auto t = load_task(entry.path());
    auto c = compile_task(t);
    ASSERT_TRUE(c.dfa) << entry.path();
    ASSERT_FALSE(c.dfa->accepting_states().empty()) << entry.path();
  }
}

TEST(Tasks, AutomatonSizes) {
  EXPECT_EQ(compile_task(load_task(task_path("waterworld_task1"))).dfa->num_states(), 5u);
  EXPECT_EQ(compile_task(load_task(task_path("waterworld_task3"))).dfa->num_states(), 17u);
  EXPECT_EQ(compile_task(load_task(task_path("cartpole_task4"))).dfa->num_states(), 4u);
}

TEST(Tasks, InvalidSettingsRejected) {
  auto j = nlohmann::json::parse(std::ifstream(task_path("gridworld_red_green")));
  auto bad = j;
  bad["gamma"] = 1.5;
  EXPECT_THROW(task_from_json(bad), ConfigError);
  bad = j;
  bad["env"]["kind"] = "atari";
  EXPECT_THROW(task_from_json(bad), ConfigError);
  bad = j;
  bad["N"] = 2;
  EXPECT_THROW(compile_task(task_from_json(bad)), ConfigError);
  bad = j;
  bad.erase("formula");
  EXPECT_THROW(task_from_json(bad), ConfigError);
}

TEST(Tasks, LargeCategoryCountIsClamped) {
  auto j = nlohmann::json::parse(std::ifstream(task_path("gridworld_red_green")));
  j["N"] = 40;
  EXPECT_EQ(compile_task(task_from_json(j)).ranks->N, 4u);
}

TEST(Runner, SeededRunsAreReproducible) {
  auto t = short_red_green();
  auto c = compile_task(t);
  for (auto s : {learn::Strategy::Base, learn::Strategy::EC}) {
    auto a = run_one(t, c, spec(s, 3));
    auto b = run_one(t, c, spec(s, 3));
    EXPECT_EQ(csv(a.log), csv(b.log));
    EXPECT_EQ(a.greedy_policy, b.greedy_policy);
  }
}

TEST(Runner, BaseNeverShapes) {
  auto t = short_red_green();
  auto r = run_one(t, compile_task(t), spec(learn::Strategy::Base, 1));
  ASSERT_FALSE(r.log.episodes.empty());
  EXPECT_FALSE(r.log.shaping);
  EXPECT_FALSE(r.log.classified);
  for (const auto& e : r.log.episodes) ASSERT_EQ(e.shaped_return, e.raw_return);
}

TEST(Runner, StrategyFlags) {
  auto t = short_red_green(500);
  auto c = compile_task(t);
  auto rs = run_one(t, c, spec(learn::Strategy::RS, 0));
  auto ec = run_one(t, c, spec(learn::Strategy::EC, 0));
  EXPECT_TRUE(rs.log.shaping);
  EXPECT_FALSE(rs.log.classified);
  EXPECT_TRUE(ec.log.shaping);
  EXPECT_TRUE(ec.log.classified);
  ASSERT_FALSE(ec.log.episodes.empty());
  EXPECT_EQ(ec.log.episodes.back().buffer_sizes.size(), 4u);
}

TEST(Runner, MatrixOrderIndependentOfJobs) {
  auto t = short_red_green(1000);
  auto c = compile_task(t);
  std::vector<RunSpec> specs{spec(learn::Strategy::Base, 0), spec(learn::Strategy::EC, 1), spec(learn::Strategy::RS, 2)};
  auto serial = run_matrix(t, c, specs, 1);
  auto parallel = run_matrix(t, c, specs, 3);
  for (std::size_t i = 0; i < specs.size(); ++i) EXPECT_EQ(csv(serial[i].log), csv(parallel[i].log));
}

TEST(Runner, TrainWritesOneCsvPerRun) {
  auto t = short_red_green(800);
  auto out = scratch("train");
  TrainOptions options;
  options.strategies = std::vector<learn::Strategy>{learn::Strategy::Base, learn::Strategy::EC};
  auto runs = cmd_train(t, out, options);
  EXPECT_EQ(runs.size(), 20u);
  std::size_t csvs = 0;
  for (const auto& e : fs::directory_iterator(out / t.name / "runs")) csvs += e.path().extension() == ".csv";
  EXPECT_EQ(csvs, 20u);
  EXPECT_TRUE(fs::exists(out / t.name / "summary.csv"));
  EXPECT_TRUE(fs::exists(out / t.name / "curves.csv"));
}

TEST(Runner, AlphaSweepGroupsByExponent) {
  auto t = short_red_green(500);
  t.seeds = {0, 1};
  TrainOptions options;
  options.alphas = std::vector<double>{0.0, 0.25, 0.5, 0.75};
  auto runs = cmd_train(t, scratch("sweep"), options);
  auto rows = summarize(runs);
  ASSERT_EQ(rows.size(), 4u);
  for (const auto& r : rows) EXPECT_EQ(r.runs, 2u);
  EXPECT_NE(rows[0].label, rows[3].label);
}

TEST(Summary, MedianWithMissing) {
  EXPECT_EQ(median_with_missing({1.0, std::nullopt, 3.0}), 3.0);
  EXPECT_FALSE(median_with_missing({1.0, std::nullopt, std::nullopt}).has_value());
  EXPECT_DOUBLE_EQ(median({4.0, 1.0, 3.0, 2.0}), 2.5);
}

TEST(Cli, CompileWritesArtifacts) {
  auto out = scratch("cli");
  auto cmd = "ECRL_OUT=" + out.string() + " " + ECRL_CLI + " compile " + task_path("gridworld_red_green").string() +
             " > /dev/null";
  ASSERT_EQ(std::system(cmd.c_str()), 0);
  for (auto f : {"dfa.json", "dfa.dot", "dfa.rddl", "ranks.json"})
    EXPECT_TRUE(fs::exists(out / "gridworld_red_green" / f)) << f;
}

TEST(Cli, BadTaskExitsWithConfigError) {
  auto dir = scratch("cli_bad");
  auto bad = dir / "bad.json";
  std::ofstream(bad) << R"({"name": "x", "formula": "r U", "env": {"kind": "gridworld"}})";
  auto cmd = std::string(ECRL_CLI) + " compile " + bad.string() + " 2> /dev/null";
  int status = std::system(cmd.c_str());
  ASSERT_TRUE(WIFEXITED(status));
  EXPECT_EQ(WEXITSTATUS(status), 1);
}

}  // namespace
}  // namespace ecrl::experiment
