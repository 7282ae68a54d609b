#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "ecrl/learn/learner.hpp"
#include "ecrl/learn/mlp.hpp"

namespace ecrl::learn {

// Builds an input matrix with one observation per column.
Matrix stack_observations(const replay::Batch& batch, bool next);

struct DqnConfig {
  std::vector<std::size_t> hidden{64, 64};
  double learning_rate = 3e-4;
  OptimizerKind optimizer = OptimizerKind::SgdMomentum;
  double gamma = 0.99;
  std::size_t target_update_interval = 500;  // in gradient updates
  double max_grad_norm = 10.0;
  // Huber threshold on the TD error; 0 selects the plain squared error.
  double huber_delta = 1.0;
  // Double DQN: the online network picks the bootstrap action, the target
  // network values it.
  bool double_q = false;
  EpsilonSchedule epsilon{1.0, 0.05, 0.2};
};

// Deep Q-network with a hard-copied target network.
class DqnAgent final : public Learner {
 public:
  DqnAgent(std::size_t observation_size, std::size_t actions, DqnConfig config, Rng& rng);

  env::Action act(const std::vector<double>& observation, std::optional<std::size_t> state,
                  bool explore, replay::Rng& rng) override;
  std::vector<double> update(const replay::Batch& batch, replay::Rng& rng) override;
  void set_progress(double fraction) override { progress_ = fraction; }
  nlohmann::json to_json() const override;

  const Mlp& network() const { return q_; }

 private:
  DqnConfig config_;
  Mlp q_, target_;
  std::unique_ptr<Optimizer> opt_;
  std::size_t updates_ = 0;
  double progress_ = 0.0;
};

}  // namespace ecrl::learn
