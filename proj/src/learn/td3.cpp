#include "ecrl/learn/td3.hpp"

#include <algorithm>

#include "ecrl/learn/dqn.hpp"

namespace ecrl::learn {

namespace {

std::vector<std::size_t> layer_sizes(std::size_t in, const std::vector<std::size_t>& hidden,
                                     std::size_t out) {
  std::vector<std::size_t> s{in};
  s.insert(s.end(), hidden.begin(), hidden.end());
  s.push_back(out);
  return s;
}

}  // namespace

Td3Agent::Td3Agent(std::size_t obs, env::ActionSpace space, Td3Config config, Rng& rng)
    : space_(space),
      config_(std::move(config)),
      actor_(layer_sizes(obs, config_.hidden, space.dimension), OutputActivation::Tanh, rng),
      actor_target_(actor_),
      critic_{Mlp(layer_sizes(obs + space.dimension, config_.hidden, 1), OutputActivation::Identity, rng),
              Mlp(layer_sizes(obs + space.dimension, config_.hidden, 1), OutputActivation::Identity, rng)},
      critic_target_(critic_),
      actor_opt_(make_optimizer(config_.optimizer, config_.learning_rate)),
      critic_opt_{make_optimizer(config_.optimizer, config_.learning_rate),
                  make_optimizer(config_.optimizer, config_.learning_rate)} {
  if (space.is_discrete()) throw ConfigError("TD3 needs a continuous action space");
}

Matrix Td3Agent::scale_actions(const Matrix& t) const {
  const double mid = 0.5 * (space_.high + space_.low), half = 0.5 * (space_.high - space_.low);
  return (t.array() * half + mid).matrix();
}

Matrix Td3Agent::critic_input(const Matrix& obs, const Matrix& actions) const {
  Matrix x(obs.rows() + actions.rows(), obs.cols());
  x << obs, actions;
  return x;
}

Matrix Td3Agent::stack_actions(const replay::Batch& batch) const {
  Matrix a(static_cast<Eigen::Index>(space_.dimension), static_cast<Eigen::Index>(batch.items.size()));
  for (std::size_t k = 0; k < batch.items.size(); ++k)
    for (std::size_t d = 0; d < space_.dimension; ++d)
      a(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(k)) = batch.items[k]->a.at(d);
  return a;
}

env::Action Td3Agent::act(const std::vector<double>& obs, std::optional<std::size_t>, bool explore,
                          replay::Rng& rng) {
  Vector x = Eigen::Map<const Vector>(obs.data(), static_cast<Eigen::Index>(obs.size()));
  Matrix a = scale_actions(actor_.forward(Matrix(x)));
  env::Action out(space_.dimension);
  std::normal_distribution<double> noise(0.0, config_.exploration_noise * (space_.high - space_.low));
  for (std::size_t d = 0; d < space_.dimension; ++d) {
    double v = a(static_cast<Eigen::Index>(d), 0);
    if (explore) v += noise(rng);
    out[d] = std::clamp(v, space_.low, space_.high);
  }
  return out;
}

Vector Td3Agent::compute_targets(const replay::Batch& batch, replay::Rng& rng) const {
  Matrix x2 = stack_observations(batch, true);
  Matrix a2 = scale_actions(actor_target_.forward(x2));
  std::normal_distribution<double> noise(0.0, config_.target_noise);
  for (Eigen::Index i = 0; i < a2.size(); ++i) {
    double eps = std::clamp(noise(rng), -config_.target_noise_clip, config_.target_noise_clip);
    a2.data()[i] = std::clamp(a2.data()[i] + eps, space_.low, space_.high);
  }
  Matrix in = critic_input(x2, a2);
  Matrix q1 = critic_target_[0].forward(in), q2 = critic_target_[1].forward(in);
  Vector y(static_cast<Eigen::Index>(batch.items.size()));
  for (std::size_t k = 0; k < batch.items.size(); ++k) {
    const auto& e = *batch.items[k];
    const auto i = static_cast<Eigen::Index>(k);
    y[i] = e.r + (e.terminated ? 0.0 : config_.gamma * std::min(q1(0, i), q2(0, i)));
  }
  return y;
}

double Td3Agent::critic_loss(std::size_t k, const replay::Batch& batch, const Vector& y) const {
  Matrix in = critic_input(stack_observations(batch, false), stack_actions(batch));
  Vector q = critic_[k].forward(in).row(0).transpose();
  return (q - y).squaredNorm() / static_cast<double>(y.size());
}

Gradients Td3Agent::critic_gradient(std::size_t k, const replay::Batch& batch, const Vector& y) const {
  Matrix in = critic_input(stack_observations(batch, false), stack_actions(batch));
  Mlp::Cache cache;
  Matrix q = critic_[k].forward(in, &cache);
  Matrix upstream = 2.0 * (q - y.transpose()) / static_cast<double>(y.size());
  return critic_[k].backward(cache, upstream);
}

std::vector<double> Td3Agent::critic_step(const replay::Batch& batch, const Vector& y) {
  Matrix in = critic_input(stack_observations(batch, false), stack_actions(batch));
  std::vector<double> td(batch.items.size());
  for (std::size_t k = 0; k < 2; ++k) {
    Mlp::Cache cache;
    Matrix q = critic_[k].forward(in, &cache);
    Matrix diff = q - y.transpose();
    if (k == 0)
      for (std::size_t i = 0; i < td.size(); ++i) td[i] = diff(0, static_cast<Eigen::Index>(i));
    for (std::size_t i = 0; i < td.size(); ++i)
      diff(0, static_cast<Eigen::Index>(i)) *= batch.weights.empty() ? 1.0 : batch.weights[i];
    Matrix upstream = 2.0 * diff / static_cast<double>(y.size());
    critic_opt_[k]->step(critic_[k], critic_[k].backward(cache, upstream));
  }
  return td;
}

void Td3Agent::actor_step(const replay::Batch& batch) {
  Matrix x = stack_observations(batch, false);
  Mlp::Cache actor_cache, critic_cache;
  Matrix t = actor_.forward(x, &actor_cache);
  Matrix a = scale_actions(t);
  critic_[0].forward(critic_input(x, a), &critic_cache);
  const auto n = static_cast<double>(batch.items.size());
  // Maximize Q: d(-mean Q)/dQ = -1/n.
  Matrix upstream = Matrix::Constant(1, x.cols(), -1.0 / n);
  Gradients cg = critic_[0].backward(critic_cache, upstream);
  const double half = 0.5 * (space_.high - space_.low);
  Matrix da = cg.input.bottomRows(static_cast<Eigen::Index>(space_.dimension)) * half;
  actor_opt_->step(actor_, actor_.backward(actor_cache, da));
}

void Td3Agent::update_targets() {
  actor_target_.soft_update(actor_, config_.tau);
  for (std::size_t k = 0; k < 2; ++k) critic_target_[k].soft_update(critic_[k], config_.tau);
}

std::vector<double> Td3Agent::update(const replay::Batch& batch, replay::Rng& rng) {
  if (batch.items.empty()) return {};
  Vector y = compute_targets(batch, rng);
  auto td = critic_step(batch, y);
  if (++updates_ % config_.policy_delay == 0) {
    actor_step(batch);
    update_targets();
  }
  return td;
}

nlohmann::json Td3Agent::to_json() const {
  return {{"kind", "td3"},
          {"actor", actor_.to_json()},
          {"critic1", critic_[0].to_json()},
          {"critic2", critic_[1].to_json()}};
}

}  // namespace ecrl::learn
