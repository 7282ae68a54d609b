#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ecrl/experiment/task_file.hpp"

namespace ecrl::experiment {

struct RunSpec {
  learn::Strategy strategy = learn::Strategy::Base;
  std::uint64_t seed = 0;
  std::optional<double> alpha;  // overrides the task's alpha
  bool delayed_automaton_step = false;
};

struct RunResult {
  RunSpec spec;
  std::string label;  // strategy, plus the alpha for sweeps
  learn::MetricsLog log;
  nlohmann::json policy;
  // Greedy policy over product states for tabular runs.
  std::vector<std::size_t> greedy_policy;
  double wall_seconds = 0.0;
};

std::unique_ptr<product::ProductEnv> make_product_env(const TaskFile& task,
                                                      const CompiledTask& compiled,
                                                      const RunSpec& spec);

// Auto picks tabular for finite environments, else DQN or TD3 by action space.
LearnerKind resolve_learner(const TaskFile& task, const product::ProductEnv& env);

// One seeded training run, self-contained.
RunResult run_one(const TaskFile& task, const CompiledTask& compiled, const RunSpec& spec);

// Runs every spec with at most `jobs` concurrent workers; results keep the
// order of `specs`.
std::vector<RunResult> run_matrix(const TaskFile& task, const CompiledTask& compiled,
                                  const std::vector<RunSpec>& specs, std::size_t jobs);

struct CompileReport {
  std::filesystem::path directory;
  std::string summary;
};

// Writes dfa.json, dfa.dot, dfa.rddl and ranks.json under out/<task name>/.
CompileReport cmd_compile(const TaskFile& task, const std::filesystem::path& out_root);

struct TrainOptions {
  std::size_t jobs = 1;
  std::optional<std::vector<learn::Strategy>> strategies;
  std::optional<std::vector<std::uint64_t>> seeds;
  std::optional<std::vector<double>> alphas;  // EC exponent sweep
  bool delayed_automaton_step = false;
};

struct StrategySummary {
  std::string label;
  std::size_t runs = 0;
  double mean_reward_per_step = 0.0;
  double median_auc = 0.0;
  std::optional<double> median_first_success;  // nullopt when most runs never succeed
  std::optional<double> median_threshold_step;
  double success_fraction = 0.0;  // runs with any success
  double mean_wall_seconds = 0.0;
};

// Median with unreached (nullopt) entries ordered after every number.
std::optional<double> median_with_missing(std::vector<std::optional<double>> values);
double median(std::vector<double> values);

std::vector<StrategySummary> summarize(const std::vector<RunResult>& runs);

// Per-run CSVs under out/<task>/runs/, plus summary.csv and curves.csv.
std::vector<RunResult> cmd_train(const TaskFile& task, const std::filesystem::path& out_root,
                                 const TrainOptions& options);

void write_summary_csv(std::ostream& os, const std::vector<StrategySummary>& rows);
// Mean raw episode return and cumulative reward per step at evenly spaced
// step checkpoints, per label.
void write_curves_csv(std::ostream& os, const std::vector<RunResult>& runs, std::size_t points = 50);

}  // namespace ecrl::experiment
