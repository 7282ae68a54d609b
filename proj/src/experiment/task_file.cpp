#include "ecrl/experiment/task_file.hpp"

#include <algorithm>
#include <fstream>

#include "ecrl/dfa/compile.hpp"
#include "ecrl/env/cartpole.hpp"
#include "ecrl/env/gridworld.hpp"
#include "ecrl/env/waterworld.hpp"
#include "ecrl/ltlf/parser.hpp"

namespace ecrl::experiment {

namespace {

EnvKind env_kind(const std::string& s) {
  if (s == "gridworld") return EnvKind::Gridworld;
  if (s == "waterworld") return EnvKind::Waterworld;
  if (s == "cartpole") return EnvKind::Cartpole;
  throw ConfigError("unknown environment kind '" + s + "'");
}

LearnerKind learner_kind(const std::string& s) {
  if (s == "auto") return LearnerKind::Auto;
  if (s == "tabular") return LearnerKind::Tabular;
  if (s == "dqn") return LearnerKind::Dqn;
  if (s == "td3") return LearnerKind::Td3;
  throw ConfigError("unknown learner kind '" + s + "'");
}

learn::EpsilonSchedule epsilon_from(const nlohmann::json& j, learn::EpsilonSchedule e) {
  e.start = j.value("epsilon_start", e.start);
  e.end = j.value("epsilon_end", e.end);
  e.fraction = j.value("epsilon_fraction", e.fraction);
  return e;
}

LearnerSettings learner_from(const nlohmann::json& j, double gamma) {
  LearnerSettings s;
  s.kind = learner_kind(j.value("kind", std::string("auto")));
  s.tabular.gamma = s.dqn.gamma = s.td3.gamma = gamma;

  s.tabular.learning_rate = j.value("tabular_learning_rate", s.tabular.learning_rate);
  s.tabular.epsilon = epsilon_from(j, s.tabular.epsilon);

  auto hidden = j.value("hidden", s.dqn.hidden);
  auto lr = j.value("learning_rate", s.dqn.learning_rate);
  auto opt = learn::optimizer_from_string(j.value("optimizer", std::string("sgd")));
  s.dqn.hidden = s.td3.hidden = hidden;
  s.dqn.learning_rate = s.td3.learning_rate = lr;
  s.dqn.optimizer = s.td3.optimizer = opt;
  s.dqn.target_update_interval = j.value("target_update_interval", s.dqn.target_update_interval);
  s.dqn.max_grad_norm = j.value("max_grad_norm", s.dqn.max_grad_norm);
  s.dqn.huber_delta = j.value("huber_delta", s.dqn.huber_delta);
  s.dqn.double_q = j.value("double_q", s.dqn.double_q);
  s.dqn.epsilon = epsilon_from(j, s.dqn.epsilon);
  s.td3.tau = j.value("tau", s.td3.tau);
  s.td3.exploration_noise = j.value("exploration_noise", s.td3.exploration_noise);
  s.td3.target_noise = j.value("target_noise", s.td3.target_noise);
  s.td3.target_noise_clip = j.value("target_noise_clip", s.td3.target_noise_clip);
  s.td3.policy_delay = j.value("policy_delay", s.td3.policy_delay);
  if (s.dqn.target_update_interval == 0 || s.td3.policy_delay == 0)
    throw ConfigError("update intervals must be positive");
  return s;
}

}  // namespace

TaskFile task_from_json(const nlohmann::json& j) {
  try {
    TaskFile t;
    t.name = j.at("name").get<std::string>();
    t.formula = j.at("formula").get<std::string>();
    t.atoms = j.value("atoms", t.atoms);
    const auto& e = j.at("env");
    t.env = env_kind(e.at("kind").get<std::string>());
    t.env_config = e;
    t.reward = j.value("reward", t.reward);
    if (j.contains("N") && !j.at("N").is_null()) t.N = j.at("N").get<std::size_t>();
    t.C = j.value("C", t.C);
    t.alpha = j.value("alpha", t.alpha);
    t.K = j.value("K", t.K);
    t.gamma = j.value("gamma", t.gamma);
    if (j.contains("strategies")) {
      t.strategies.clear();
      for (const auto& s : j.at("strategies")) t.strategies.push_back(learn::strategy_from_string(s));
    }
    t.seeds = j.value("seeds", t.seeds);
    auto enc = j.value("encoding", std::string("enumerated"));
    if (enc == "enumerated")
      t.encoding = product::Encoding::Enumerated;
    else if (enc == "onehot")
      t.encoding = product::Encoding::OneHot;
    else
      throw ConfigError("unknown encoding '" + enc + "'");
    t.horizon = j.value("horizon", t.horizon);

    auto& c = t.train;
    c.gamma = t.gamma;
    c.alpha = t.alpha;
    c.K = t.K;
    c.total_steps = j.value("total_steps", c.total_steps);
    c.max_episodes = j.value("max_episodes", c.max_episodes);
    c.batch_size = j.value("batch_size", c.batch_size);
    c.learning_starts = j.value("learning_starts", c.learning_starts);
    c.train_frequency = j.value("train_frequency", c.train_frequency);
    c.buffer_capacity = j.value("buffer_capacity", c.buffer_capacity);
    c.per_alpha = j.value("per_alpha", c.per_alpha);
    c.per_beta0 = j.value("per_beta0", c.per_beta0);
    t.learner = learner_from(j.value("learner", nlohmann::json::object()), t.gamma);

    if (!(t.gamma > 0.0 && t.gamma <= 1.0)) throw ConfigError("gamma must lie in (0, 1]");
    if (!(t.C > 0.0)) throw ConfigError("C must be positive");
    if (t.alpha < 0.0) throw ConfigError("alpha must be non-negative");
    if (t.K == 0) throw ConfigError("K must be positive");
    if (t.seeds.empty() || t.strategies.empty()) throw ConfigError("need at least one seed and strategy");
    return t;
  } catch (const nlohmann::json::exception& ex) {
    throw ConfigError(std::string("task file: ") + ex.what());
  }
}

TaskFile load_task(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open task file " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& ex) {
    throw ConfigError("task file " + path.string() + ": " + ex.what());
  }
  return task_from_json(j);
}

std::unique_ptr<env::Environment> make_environment(const TaskFile& t, std::uint64_t seed) {
  const auto& j = t.env_config;
  try {
    switch (t.env) {
      case EnvKind::Gridworld:
        return std::make_unique<env::Gridworld>(env::gridworld_config_from_json(j), seed);
      case EnvKind::Cartpole:
        return std::make_unique<env::Cartpole>(env::cartpole_config_from_json(j));
      case EnvKind::Waterworld: {
        auto config = env::waterworld_config_from_json(j);
        if (j.contains("generate")) {
          const auto& g = j.at("generate");
          std::vector<env::BallCount> counts;
          for (const auto& [color, n] : g.at("balls").items())
            counts.push_back({color, n.get<std::size_t>()});
          config = env::generate_waterworld_map(g.value("side", config.side), counts,
                                                g.value("map_seed_offset", std::uint64_t{0}) + seed,
                                                config);
        }
        return std::make_unique<env::Waterworld>(config, seed ^ 0x5851f42d4c957f2dULL);
      }
    }
  } catch (const nlohmann::json::exception& ex) {
    throw ConfigError(std::string("environment config: ") + ex.what());
  }
  throw ConfigError("unsupported environment");
}

CompiledTask compile_task(const TaskFile& t) {
  CompiledTask out;
  if (t.atoms.empty()) {
    out.atoms = make_environment(t, t.seeds.front())->propositions();
  } else {
    out.atoms = ltlf::AtomSet(t.atoms);
  }
  auto f = ltlf::expand_derived(ltlf::parse(t.formula, out.atoms));
  out.dfa = std::make_shared<const dfa::Dfa>(dfa::compile(f, out.atoms));
  if (t.N && *t.N < 3) throw ConfigError("N must be at least 3");
  // Too-small automata train without classification; a large N is clamped.
  auto n = rank::default_category_count(*out.dfa);
  if (n && t.N) n = std::min(*t.N, out.dfa->num_states());
  if (n) out.ranks = rank::rank_states(*out.dfa, *n, t.C);
  return out;
}

}  // namespace ecrl::experiment
