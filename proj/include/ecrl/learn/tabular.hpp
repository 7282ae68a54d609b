#pragma once

#include <cstddef>
#include <vector>

#include "ecrl/learn/learner.hpp"

namespace ecrl::learn {

class QTable {
 public:
  QTable(std::size_t states, std::size_t actions, double init = 0.0)
      : states_(states), actions_(actions), q_(states * actions, init) {}

  double& at(std::size_t s, std::size_t a) { return q_[s * actions_ + a]; }
  double at(std::size_t s, std::size_t a) const { return q_[s * actions_ + a]; }
  std::vector<double> row(std::size_t s) const {
    return {q_.begin() + s * actions_, q_.begin() + (s + 1) * actions_};
  }
  double max(std::size_t s) const;
  std::size_t num_states() const { return states_; }
  std::size_t num_actions() const { return actions_; }
  const std::vector<double>& values() const { return q_; }

 private:
  std::size_t states_, actions_;
  std::vector<double> q_;
};

// Q(s,a) += lr (r + gamma max_a' Q(s',a') (1 - terminated) - Q(s,a)).
// Returns the TD error.
double q_learning_update(QTable& table, const replay::Experience& e, double lr, double gamma);

struct TabularConfig {
  double learning_rate = 0.5;
  double gamma = 0.99;
  EpsilonSchedule epsilon{1.0, 0.05, 0.5};
};

// Epsilon-greedy Q-learning on product-state indices, trained from replay.
class TabularAgent final : public Learner {
 public:
  TabularAgent(std::size_t states, std::size_t actions, TabularConfig config);

  env::Action act(const std::vector<double>& observation, std::optional<std::size_t> state,
                  bool explore, replay::Rng& rng) override;
  std::vector<double> update(const replay::Batch& batch, replay::Rng& rng) override;
  void set_progress(double fraction) override { progress_ = fraction; }
  nlohmann::json to_json() const override;

  const QTable& table() const { return table_; }
  // Lowest-index argmax per state.
  std::vector<std::size_t> greedy_policy() const;

 private:
  QTable table_;
  TabularConfig config_;
  double progress_ = 0.0;
};

}  // namespace ecrl::learn
