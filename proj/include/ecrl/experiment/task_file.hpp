#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ecrl/dfa/dfa.hpp"
#include "ecrl/env/environment.hpp"
#include "ecrl/learn/dqn.hpp"
#include "ecrl/learn/tabular.hpp"
#include "ecrl/learn/td3.hpp"
#include "ecrl/learn/train.hpp"
#include "ecrl/product/product_env.hpp"
#include "ecrl/rank/asp.hpp"

namespace ecrl::experiment {

enum class EnvKind { Gridworld, Waterworld, Cartpole };
enum class LearnerKind { Auto, Tabular, Dqn, Td3 };

struct LearnerSettings {
  LearnerKind kind = LearnerKind::Auto;
  learn::TabularConfig tabular;
  learn::DqnConfig dqn;
  learn::Td3Config td3;
};

// Experiment description. Environment configs stay as JSON and are decoded
// per run so Waterworld maps can be generated from the run seed.
struct TaskFile {
  std::string name;
  std::string formula;
  std::vector<std::string> atoms;  // empty: the environment's propositions
  EnvKind env = EnvKind::Gridworld;
  nlohmann::json env_config = nlohmann::json::object();
  double reward = 100.0;
  std::optional<std::size_t> N;
  double C = 1.0;
  double alpha = 0.75;
  std::size_t K = 10;
  double gamma = 0.99;
  std::vector<learn::Strategy> strategies{learn::Strategy::Base, learn::Strategy::RS,
                                          learn::Strategy::PER, learn::Strategy::EC};
  std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  product::Encoding encoding = product::Encoding::Enumerated;
  std::size_t horizon = 0;  // 0: environment default
  learn::TrainConfig train;
  LearnerSettings learner;
};

TaskFile task_from_json(const nlohmann::json& j);
TaskFile load_task(const std::filesystem::path& path);

struct CompiledTask {
  std::shared_ptr<const dfa::Dfa> dfa;
  std::optional<rank::RankTable> ranks;  // absent when |Q| < 3
  ltlf::AtomSet atoms;
};

CompiledTask compile_task(const TaskFile& task);

// Base environment for one run. Waterworld maps with a "generate" block are
// drawn from `seed`.
std::unique_ptr<env::Environment> make_environment(const TaskFile& task, std::uint64_t seed);

}  // namespace ecrl::experiment
