#include "ecrl/replay/buffers.hpp"

#include <algorithm>
#include <cmath>

namespace ecrl::replay {

Ring::Ring(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw ConfigError("replay capacity must be positive");
}

void Ring::push(Experience e) {
  if (items_.size() < capacity_) {
    last_ = items_.size();
    items_.push_back(std::move(e));
    return;
  }
  last_ = next_;
  items_[next_] = std::move(e);
  next_ = (next_ + 1) % capacity_;
}

Batch UniformBuffer::sample(std::size_t batch_size, Rng& rng) {
  Batch b;
  if (batch_size == 0) return b;
  if (ring_.empty()) throw AllEmpty();
  std::uniform_int_distribution<std::size_t> pick(0, ring_.size() - 1);
  for (std::size_t k = 0; k < batch_size; ++k) b.items.push_back(&ring_.at(pick(rng)));
  b.weights.assign(batch_size, 1.0);
  return b;
}

std::vector<double> category_probabilities(const std::vector<std::size_t>& sizes,
                                           const std::vector<double>& priorities, double alpha) {
  if (sizes.size() != priorities.size()) throw ConfigError("sizes and priorities differ in length");
  std::vector<double> w(sizes.size(), 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] == 0) continue;
    w[i] = static_cast<double>(sizes[i]) * std::pow(priorities[i], alpha);
    total += w[i];
  }
  if (total <= 0.0) throw AllEmpty();
  for (double& x : w) x /= total;
  return w;
}

ClassifiedBuffer::ClassifiedBuffer(std::vector<double> priorities, double alpha,
                                   std::size_t refresh_interval, std::size_t total_capacity)
    : priorities_(std::move(priorities)), alpha_(alpha), k_(refresh_interval) {
  if (priorities_.empty()) throw ConfigError("classified buffer needs at least one category");
  if (alpha_ < 0.0) throw ConfigError("alpha must be non-negative");
  if (k_ == 0) throw ConfigError("refresh interval must be positive");
  for (double p : priorities_)
    if (!(p > 0.0)) throw ConfigError("priorities must be positive");
  const std::size_t per = total_capacity / priorities_.size();
  for (std::size_t i = 0; i < priorities_.size(); ++i) parts_.emplace_back(per);
  probs_.assign(priorities_.size(), 0.0);
}

void ClassifiedBuffer::push(Experience e) {
  if (e.category >= parts_.size()) throw Error("experience category out of range");
  parts_[e.category].push(std::move(e));
}

std::size_t ClassifiedBuffer::size() const {
  std::size_t n = 0;
  for (const auto& p : parts_) n += p.size();
  return n;
}

std::vector<std::size_t> ClassifiedBuffer::sizes() const {
  std::vector<std::size_t> out;
  for (const auto& p : parts_) out.push_back(p.size());
  return out;
}

void ClassifiedBuffer::refresh_probs() {
  probs_ = category_probabilities(sizes(), priorities_, alpha_);
  refreshed_ = true;
}

void ClassifiedBuffer::on_episode(std::size_t episode) {
  if (episode % k_ == 0 && size() > 0) refresh_probs();
}

void ClassifiedBuffer::on_learning_start() {
  if (!refreshed_) refresh_probs();
}

Batch ClassifiedBuffer::sample(std::size_t batch_size, Rng& rng) {
  Batch b;
  if (batch_size == 0) return b;
  if (size() == 0) throw AllEmpty();
  if (!refreshed_) refresh_probs();
  std::discrete_distribution<std::size_t> category(probs_.begin(), probs_.end());
  for (std::size_t k = 0; k < batch_size; ++k) {
    std::size_t c = category(rng);
    // A category can be empty only if its items were evicted after the last
    // refresh, which equal-capacity rings never do.
    const auto& part = parts_[c];
    if (part.empty()) throw AllEmpty();
    std::uniform_int_distribution<std::size_t> pick(0, part.size() - 1);
    b.items.push_back(&part.at(pick(rng)));
  }
  b.weights.assign(batch_size, 1.0);
  return b;
}

SumTree::SumTree(std::size_t capacity) : capacity_(capacity), size_(1) {
  while (size_ < capacity) size_ <<= 1;
  tree_.assign(2 * size_, 0.0);
}

void SumTree::set(std::size_t leaf, double value) {
  std::size_t i = leaf + size_;
  tree_[i] = value;
  for (i >>= 1; i >= 1; i >>= 1) tree_[i] = tree_[2 * i] + tree_[2 * i + 1];
}

std::size_t SumTree::find(double mass) const {
  std::size_t i = 1;
  while (i < size_) {
    if (mass < tree_[2 * i] || tree_[2 * i + 1] <= 0.0) {
      i = 2 * i;
    } else {
      mass -= tree_[2 * i];
      i = 2 * i + 1;
    }
  }
  return std::min(i - size_, capacity_ - 1);
}

PrioritizedBuffer::PrioritizedBuffer(std::size_t capacity, double alpha, double beta0, double eps)
    : ring_(capacity), tree_(capacity), alpha_(alpha), beta0_(beta0), beta_(beta0), eps_(eps) {}

void PrioritizedBuffer::push(Experience e) {
  ring_.push(std::move(e));
  tree_.set(ring_.last_slot(), max_priority_);
}

void PrioritizedBuffer::set_progress(double fraction) {
  beta_ = beta0_ + std::clamp(fraction, 0.0, 1.0) * (1.0 - beta0_);
}

Batch PrioritizedBuffer::sample(std::size_t batch_size, Rng& rng) {
  Batch b;
  if (batch_size == 0) return b;
  if (ring_.empty()) throw AllEmpty();
  const double total = tree_.total();
  const double n = static_cast<double>(ring_.size());
  // Stratified: one draw per equal-mass segment.
  const double segment = total / static_cast<double>(batch_size);
  double max_w = 0.0;
  for (std::size_t k = 0; k < batch_size; ++k) {
    std::uniform_real_distribution<double> u(segment * k, segment * (k + 1));
    std::size_t slot = std::min(tree_.find(u(rng)), ring_.size() - 1);
    double p = tree_.get(slot) / total;
    double w = std::pow(n * p, -beta_);
    max_w = std::max(max_w, w);
    b.items.push_back(&ring_.at(slot));
    b.handles.push_back(slot);
    b.weights.push_back(w);
  }
  for (double& w : b.weights) w /= max_w;
  return b;
}

void PrioritizedBuffer::update_priorities(const Batch& batch, const std::vector<double>& td) {
  for (std::size_t k = 0; k < batch.handles.size(); ++k) {
    double p = std::pow(std::abs(td.at(k)) + eps_, alpha_);
    max_priority_ = std::max(max_priority_, p);
    tree_.set(batch.handles[k], p);
  }
}

}  // namespace ecrl::replay
