#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <vector>

#include "ecrl/learn/learner.hpp"
#include "ecrl/learn/mlp.hpp"

namespace ecrl::learn {

struct Td3Config {
  std::vector<std::size_t> hidden{64, 64};
  double learning_rate = 3e-4;
  OptimizerKind optimizer = OptimizerKind::SgdMomentum;
  double gamma = 0.99;
  double tau = 0.005;
  double exploration_noise = 0.1;  // std, as a fraction of the action range
  double target_noise = 0.2;
  double target_noise_clip = 0.5;
  std::size_t policy_delay = 2;
};

// Twin-critic deterministic actor-critic. Critics read [observation; action].
class Td3Agent final : public Learner {
 public:
  Td3Agent(std::size_t observation_size, env::ActionSpace space, Td3Config config, Rng& rng);

  env::Action act(const std::vector<double>& observation, std::optional<std::size_t> state,
                  bool explore, replay::Rng& rng) override;
  std::vector<double> update(const replay::Batch& batch, replay::Rng& rng) override;
  nlohmann::json to_json() const override;

  // y = r + gamma (1 - done) min_k Q'_k(s', clip(pi'(s') + clip(noise))).
  Vector compute_targets(const replay::Batch& batch, replay::Rng& rng) const;
  // Mean squared error of critic k against fixed targets.
  double critic_loss(std::size_t k, const replay::Batch& batch, const Vector& y) const;
  Gradients critic_gradient(std::size_t k, const replay::Batch& batch, const Vector& y) const;
  // One optimizer step on both critics; returns the TD errors of critic 0.
  std::vector<double> critic_step(const replay::Batch& batch, const Vector& y);
  void actor_step(const replay::Batch& batch);
  void update_targets();

  Mlp& actor() { return actor_; }
  Mlp& critic(std::size_t k) { return critic_[k]; }
  const Mlp& target_actor() const { return actor_target_; }
  const Mlp& target_critic(std::size_t k) const { return critic_target_[k]; }
  std::size_t updates() const { return updates_; }

 private:
  Matrix critic_input(const Matrix& obs, const Matrix& actions) const;
  Matrix scale_actions(const Matrix& tanh_out) const;
  Matrix stack_actions(const replay::Batch& batch) const;

  env::ActionSpace space_;
  Td3Config config_;
  Mlp actor_, actor_target_;
  std::array<Mlp, 2> critic_, critic_target_;
  std::unique_ptr<Optimizer> actor_opt_;
  std::array<std::unique_ptr<Optimizer>, 2> critic_opt_;
  std::size_t updates_ = 0;
};

}  // namespace ecrl::learn
