// ecrl: compile LTL_f tasks, train strategy matrices, run the acceptance suite.

#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "ecrl/experiment/runner.hpp"
#include "ecrl/verify/acceptance.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kVerifyFailed = 2;

std::filesystem::path output_root() {
  const char* env = std::getenv("ECRL_OUT");
  return env && *env ? std::filesystem::path(env) : std::filesystem::path("out");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LTL_f task compilation and experience-classified training"};
  app.require_subcommand(1);

  std::string task_path;
  auto* compile = app.add_subcommand("compile", "Write DFA JSON, DOT, RDDL and ranks for a task");
  compile->add_option("task", task_path, "Task JSON file")->required()->check(CLI::ExistingFile);

  auto* train = app.add_subcommand("train", "Run the seeded strategy matrix of a task");
  train->add_option("task", task_path, "Task JSON file")->required()->check(CLI::ExistingFile);
  std::size_t jobs = 1;
  std::vector<std::string> strategies;
  std::vector<std::uint64_t> seeds;
  std::vector<double> alphas;
  bool delayed = false;
  train->add_option("--jobs", jobs, "Concurrent runs")->check(CLI::PositiveNumber);
  train->add_option("--strategies", strategies, "Subset of BASE RS PER EC");
  train->add_option("--seeds", seeds, "Seeds to run");
  train->add_option("--alphas", alphas, "EC exponent sweep (replaces --strategies)");
  train->add_flag("--delayed-automaton-step", delayed,
                  "Read the label of the pre-action state, as RDDL cpfs do");

  auto* verify = app.add_subcommand("verify", "Run the acceptance criteria");
  std::vector<int> only;
  verify->add_option("--only", only, "Criterion numbers to run")->delimiter(',');

  CLI11_PARSE(app, argc, argv);

  try {
    if (*compile) {
      auto task = ecrl::experiment::load_task(task_path);
      auto report = ecrl::experiment::cmd_compile(task, output_root());
      std::cout << report.summary << "artifacts: " << report.directory.string() << "\n";
      return kOk;
    }
    if (*train) {
      auto task = ecrl::experiment::load_task(task_path);
      ecrl::experiment::TrainOptions options;
      options.jobs = jobs;
      options.delayed_automaton_step = delayed;
      if (!strategies.empty()) {
        std::vector<ecrl::learn::Strategy> parsed;
        for (const auto& s : strategies) parsed.push_back(ecrl::learn::strategy_from_string(s));
        options.strategies = parsed;
      }
      if (!seeds.empty()) options.seeds = seeds;
      if (!alphas.empty()) options.alphas = alphas;
      auto runs = ecrl::experiment::cmd_train(task, output_root(), options);
      ecrl::experiment::write_summary_csv(std::cout, ecrl::experiment::summarize(runs));
      return kOk;
    }
    if (*verify) {
      ecrl::verify::AcceptanceOptions options;
      options.tasks_dir = ECRL_TASKS_DIR;
      if (const char* dir = std::getenv("ECRL_TASKS")) options.tasks_dir = dir;
      options.only = only;
      auto results = ecrl::verify::run_acceptance(options, std::cout);
      return ecrl::verify::all_passed(results) ? kOk : kVerifyFailed;
    }
  } catch (const ecrl::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const ecrl::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  }
  return kOk;
}
