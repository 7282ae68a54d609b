#include "ecrl/learn/dqn.hpp"

#include <cmath>

namespace ecrl::learn {

Matrix stack_observations(const replay::Batch& batch, bool next) {
  const auto& first = next ? batch.items.front()->s2 : batch.items.front()->s;
  Matrix x(static_cast<Eigen::Index>(first.size()), static_cast<Eigen::Index>(batch.items.size()));
  for (std::size_t k = 0; k < batch.items.size(); ++k) {
    const auto& v = next ? batch.items[k]->s2 : batch.items[k]->s;
    x.col(static_cast<Eigen::Index>(k)) = Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
  }
  return x;
}

namespace {

std::vector<std::size_t> layer_sizes(std::size_t in, const std::vector<std::size_t>& hidden,
                                     std::size_t out) {
  std::vector<std::size_t> s{in};
  s.insert(s.end(), hidden.begin(), hidden.end());
  s.push_back(out);
  return s;
}

}  // namespace

DqnAgent::DqnAgent(std::size_t observation_size, std::size_t actions, DqnConfig config, Rng& rng)
    : config_(std::move(config)),
      q_(layer_sizes(observation_size, config_.hidden, actions), OutputActivation::Identity, rng),
      target_(q_),
      opt_(make_optimizer(config_.optimizer, config_.learning_rate)) {}

env::Action DqnAgent::act(const std::vector<double>& obs, std::optional<std::size_t>,
                          bool explore, replay::Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  if (explore && u(rng) < config_.epsilon.at(progress_)) {
    std::uniform_int_distribution<std::size_t> pick(0, q_.output_size() - 1);
    return {static_cast<double>(pick(rng))};
  }
  Vector x = Eigen::Map<const Vector>(obs.data(), static_cast<Eigen::Index>(obs.size()));
  Vector q = q_.forward(x);
  Eigen::Index best;
  q.maxCoeff(&best);
  return {static_cast<double>(best)};
}

std::vector<double> DqnAgent::update(const replay::Batch& batch, replay::Rng&) {
  const auto n = static_cast<Eigen::Index>(batch.items.size());
  if (n == 0) return {};
  Matrix x = stack_observations(batch, false);
  Matrix x2 = stack_observations(batch, true);
  Matrix next_q = target_.forward(x2);
  Matrix next_online;
  if (config_.double_q) next_online = q_.forward(x2);
  Mlp::Cache cache;
  Matrix q = q_.forward(x, &cache);

  Matrix upstream = Matrix::Zero(q.rows(), n);
  std::vector<double> td(static_cast<std::size_t>(n));
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto& e = *batch.items[static_cast<std::size_t>(k)];
    const auto a = static_cast<Eigen::Index>(e.a.front());
    double bootstrap;
    if (config_.double_q) {
      Eigen::Index best;
      next_online.col(k).maxCoeff(&best);
      bootstrap = next_q(best, k);
    } else {
      bootstrap = next_q.col(k).maxCoeff();
    }
    const double y = e.r + (e.terminated ? 0.0 : config_.gamma * bootstrap);
    const double d = q(a, k) - y;
    td[static_cast<std::size_t>(k)] = d;
    const double h = config_.huber_delta;
    const double grad = h <= 0.0 || std::abs(d) <= h ? d : (d > 0 ? h : -h);
    upstream(a, k) = batch.weights[static_cast<std::size_t>(k)] * grad / static_cast<double>(n);
  }
  Gradients g = q_.backward(cache, upstream);
  clip_gradients(g, config_.max_grad_norm);
  opt_->step(q_, g);
  if (++updates_ % config_.target_update_interval == 0) target_ = q_;
  return td;
}

nlohmann::json DqnAgent::to_json() const {
  return {{"kind", "dqn"}, {"q", q_.to_json()}};
}

}  // namespace ecrl::learn
