#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "ecrl/learn/learner.hpp"
#include "ecrl/product/product_env.hpp"
#include "ecrl/rank/asp.hpp"
#include "ecrl/replay/buffers.hpp"

namespace ecrl::learn {

enum class Strategy { Base, RS, PER, EC };

std::string to_string(Strategy s);
Strategy strategy_from_string(const std::string& name);
bool uses_shaping(Strategy s);

struct TrainConfig {
  Strategy strategy = Strategy::Base;
  double gamma = 0.99;
  std::size_t batch_size = 64;
  std::size_t learning_starts = 1000;
  std::size_t train_frequency = 1;  // env steps per update
  double alpha = 0.75;
  std::size_t K = 10;
  std::size_t buffer_capacity = 100'000;
  std::uint64_t seed = 0;
  std::size_t total_steps = 100'000;
  std::size_t max_episodes = 0;  // 0: unbounded
  // PER baseline.
  double per_alpha = 0.6;
  double per_beta0 = 0.4;
};

// Replay buffer for the strategy: classified for EC (needs ranks),
// prioritized for PER, uniform otherwise.
std::unique_ptr<replay::ReplayBuffer> make_buffer(const TrainConfig& config,
                                                  const std::optional<rank::RankTable>& ranks);

struct EpisodeRecord {
  std::size_t episode = 0;
  std::size_t steps = 0;  // cumulative environment steps at episode end
  double raw_return = 0.0;
  double shaped_return = 0.0;
  bool success = false;
  bool truncated = false;
  std::size_t length = 0;
  std::vector<std::size_t> buffer_sizes;
  std::vector<double> probs;
};

struct MetricsLog {
  std::string strategy;
  bool shaping = false;
  bool classified = false;
  std::vector<EpisodeRecord> episodes;
  std::size_t total_steps = 0;

  void write_csv(std::ostream& os) const;
};

// Training loop: per episode refresh the category probabilities on the K
// boundary, act with exploration, store the (possibly shaped) transition in
// the buffer of the successor's rank, and update from sampled batches once
// learning has started.
MetricsLog train(product::ProductEnv& env, Learner& learner, replay::ReplayBuffer& buffer,
                 const TrainConfig& config);

// Summary metrics over one run.
std::optional<std::size_t> steps_to_first_success(const MetricsLog& log);
// Area under the episode-return curve against environment steps, divided by
// the number of steps: each episode's raw return is held for its length.
double area_under_curve(const MetricsLog& log);
// Total raw reward divided by total steps.
double reward_per_step(const MetricsLog& log);
// First cumulative step where the success rate of the last `window`
// episodes reaches `threshold`.
std::optional<std::size_t> steps_to_success_rate(const MetricsLog& log, double threshold,
                                                 std::size_t window = 20);

}  // namespace ecrl::learn
