#include "ecrl/learn/train.hpp"

#include <algorithm>
#include <deque>

namespace ecrl::learn {

std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::Base: return "BASE";
    case Strategy::RS: return "RS";
    case Strategy::PER: return "PER";
    case Strategy::EC: return "EC";
  }
  return "?";
}

Strategy strategy_from_string(const std::string& name) {
  std::string up = name;
  std::transform(up.begin(), up.end(), up.begin(), [](unsigned char c) { return std::toupper(c); });
  if (up == "BASE") return Strategy::Base;
  if (up == "RS") return Strategy::RS;
  if (up == "PER") return Strategy::PER;
  if (up == "EC") return Strategy::EC;
  throw ConfigError("unknown strategy '" + name + "'");
}

bool uses_shaping(Strategy s) { return s == Strategy::RS || s == Strategy::EC; }

std::unique_ptr<replay::ReplayBuffer> make_buffer(const TrainConfig& c,
                                                  const std::optional<rank::RankTable>& ranks) {
  switch (c.strategy) {
    case Strategy::EC:
      if (!ranks) throw ConfigError("EC needs a rank table");
      return std::make_unique<replay::ClassifiedBuffer>(ranks->priority, c.alpha, c.K,
                                                        c.buffer_capacity);
    case Strategy::PER:
      return std::make_unique<replay::PrioritizedBuffer>(c.buffer_capacity, c.per_alpha,
                                                         c.per_beta0);
    default:
      return std::make_unique<replay::UniformBuffer>(c.buffer_capacity);
  }
}

MetricsLog train(product::ProductEnv& env, Learner& learner, replay::ReplayBuffer& buffer,
                 const TrainConfig& c) {
  auto* classified = dynamic_cast<replay::ClassifiedBuffer*>(&buffer);
  if (uses_shaping(c.strategy) != env.options().shaping)
    throw ConfigError("strategy " + to_string(c.strategy) + " and environment shaping disagree");
  if ((c.strategy == Strategy::EC) != (classified != nullptr))
    throw ConfigError("EC and only EC uses the classified buffer");
  if (c.strategy == Strategy::EC && !env.ranks()) throw ConfigError("EC needs a rank table");
  if (c.batch_size == 0 || c.train_frequency == 0) throw ConfigError("batch size and train frequency must be positive");
  if (c.total_steps == 0 && c.max_episodes == 0) throw ConfigError("training needs a step or episode budget");

  replay::Rng rng(c.seed);
  MetricsLog log;
  log.strategy = to_string(c.strategy);
  log.shaping = env.options().shaping;
  log.classified = classified != nullptr;

  const auto& ranks = env.ranks();
  const std::size_t budget = c.total_steps ? c.total_steps : SIZE_MAX;
  std::size_t step = 0;
  bool learning = false;
  std::size_t empty_episodes = 0;
  auto progress = [&] {
    if (c.total_steps) return static_cast<double>(step) / static_cast<double>(c.total_steps);
    return 0.0;
  };

  for (std::size_t episode = 0; step < budget && (c.max_episodes == 0 || episode < c.max_episodes);
       ++episode) {
    buffer.on_episode(episode);
    EpisodeRecord rec;
    rec.episode = episode;
    auto obs = env.reset();
    rec.success = env.dfa().is_accepting(env.automaton_state());
    while (!env.done() && step < budget) {
      const double frac = c.max_episodes
                              ? static_cast<double>(episode) / static_cast<double>(c.max_episodes)
                              : progress();
      learner.set_progress(frac);
      buffer.set_progress(frac);
      auto state = env.tabular_state();
      auto action = learner.act(obs, state, true, rng);
      auto out = env.step(action);
      ++step;
      rec.raw_return += out.raw_reward;
      rec.shaped_return += out.shaped_reward;
      rec.success = rec.success || out.accepted;
      rec.truncated = out.truncated;
      ++rec.length;

      replay::Experience e;
      e.s = std::move(obs);
      e.a = action;
      e.r = out.shaped_reward;
      e.s2 = out.observation;
      e.terminated = out.terminated;
      e.category = ranks ? ranks->rank[out.q_next] : 0;
      e.state = state;
      e.next_state = env.tabular_state();
      obs = out.observation;
      buffer.push(std::move(e));

      if (step >= c.learning_starts && step % c.train_frequency == 0) {
        if (!learning) {
          buffer.on_learning_start();
          learning = true;
        }
        auto batch = buffer.sample(c.batch_size, rng);
        auto td = learner.update(batch, rng);
        buffer.update_priorities(batch, td);
      }
    }
    rec.steps = step;
    // Guard against tasks decided by s_0 on every reset.
    empty_episodes = rec.length == 0 ? empty_episodes + 1 : 0;
    if (empty_episodes > 10'000) throw ConfigError("every episode ends at reset");
    if (classified) {
      rec.buffer_sizes = classified->sizes();
      rec.probs = classified->probs();
    } else {
      rec.buffer_sizes = {buffer.size()};
    }
    log.episodes.push_back(std::move(rec));
  }
  log.total_steps = step;
  return log;
}

void MetricsLog::write_csv(std::ostream& os) const {
  os << "episode,steps,rawReturn,shapedReturn,success,epLength,truncated,shaping,classified,"
        "bufferSizes,P\n";
  auto join = [](const auto& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) s += ';';
      s += std::to_string(v[i]);
    }
    return s;
  };
  for (const auto& r : episodes) {
    os << r.episode << ',' << r.steps << ',' << r.raw_return << ',' << r.shaped_return << ','
       << (r.success ? 1 : 0) << ',' << r.length << ',' << (r.truncated ? 1 : 0) << ','
       << (shaping ? 1 : 0) << ',' << (classified ? 1 : 0) << ',' << join(r.buffer_sizes) << ','
       << join(r.probs) << '\n';
  }
}

std::optional<std::size_t> steps_to_first_success(const MetricsLog& log) {
  for (const auto& r : log.episodes)
    if (r.success) return r.steps;
  return std::nullopt;
}

double area_under_curve(const MetricsLog& log) {
  if (log.total_steps == 0) return 0.0;
  double area = 0.0;
  for (const auto& r : log.episodes) area += r.raw_return * static_cast<double>(r.length);
  return area / static_cast<double>(log.total_steps);
}

double reward_per_step(const MetricsLog& log) {
  if (log.total_steps == 0) return 0.0;
  double total = 0.0;
  for (const auto& r : log.episodes) total += r.raw_return;
  return total / static_cast<double>(log.total_steps);
}

std::optional<std::size_t> steps_to_success_rate(const MetricsLog& log, double threshold,
                                                 std::size_t window) {
  std::deque<bool> last;
  std::size_t hits = 0;
  for (const auto& r : log.episodes) {
    last.push_back(r.success);
    hits += r.success;
    if (last.size() > window) {
      hits -= last.front();
      last.pop_front();
    }
    if (last.size() == window &&
        static_cast<double>(hits) >= threshold * static_cast<double>(window))
      return r.steps;
  }
  return std::nullopt;
}

}  // namespace ecrl::learn
