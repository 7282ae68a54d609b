#pragma once

#include <cstddef>
#include <optional>
#include <random>
#include <vector>

#include "ecrl/env/environment.hpp"

namespace ecrl::replay {

using Rng = std::mt19937_64;

struct Experience {
  std::vector<double> s;
  env::Action a;
  double r = 0.0;  // reward as stored: shaped when shaping is on
  std::vector<double> s2;
  bool terminated = false;
  std::size_t category = 0;  // rank of the automaton state inside s2
  // Product-state indices for tabular learners.
  std::optional<std::size_t> state;
  std::optional<std::size_t> next_state;
};

class AllEmpty : public Error {
 public:
  AllEmpty() : Error("replay buffer is empty") {}
};

// Fixed-capacity ring evicting oldest-first.
class Ring {
 public:
  explicit Ring(std::size_t capacity);

  void push(Experience e);
  std::size_t size() const { return items_.size(); }
  std::size_t capacity() const { return capacity_; }
  bool empty() const { return items_.empty(); }
  // i-th stored item in slot order (not insertion order once wrapped).
  const Experience& at(std::size_t i) const { return items_.at(i); }
  // Slot written by the most recent push.
  std::size_t last_slot() const { return last_; }

 private:
  std::size_t capacity_;
  std::size_t next_ = 0;
  std::size_t last_ = 0;
  std::vector<Experience> items_;
};

struct Batch {
  std::vector<const Experience*> items;
  std::vector<double> weights;        // importance weights; all 1 unless PER
  std::vector<std::size_t> handles;   // PER slots for priority updates
};

class ReplayBuffer {
 public:
  virtual ~ReplayBuffer() = default;
  virtual void push(Experience e) = 0;
  virtual std::size_t size() const = 0;
  // Throws AllEmpty.
  virtual Batch sample(std::size_t batch_size, Rng& rng) = 0;
  // Called at the start of every episode.
  virtual void on_episode(std::size_t /*episode*/) {}
  // Called once when learning begins.
  virtual void on_learning_start() {}
  virtual void update_priorities(const Batch& /*batch*/, const std::vector<double>& /*td*/) {}
  // Annealing progress in [0, 1] for schedules that need it.
  virtual void set_progress(double /*fraction*/) {}
};

class UniformBuffer final : public ReplayBuffer {
 public:
  explicit UniformBuffer(std::size_t capacity) : ring_(capacity) {}
  void push(Experience e) override { ring_.push(std::move(e)); }
  std::size_t size() const override { return ring_.size(); }
  Batch sample(std::size_t batch_size, Rng& rng) override;

 private:
  Ring ring_;
};

// P(i) = |B_i| p_i^alpha / sum_j |B_j| p_j^alpha. Throws AllEmpty when every
// size is zero.
std::vector<double> category_probabilities(const std::vector<std::size_t>& sizes,
                                           const std::vector<double>& priorities, double alpha);

// N rank-indexed partitions of equal capacity; categories are drawn from P,
// then an experience uniformly inside the category.
class ClassifiedBuffer final : public ReplayBuffer {
 public:
  ClassifiedBuffer(std::vector<double> priorities, double alpha, std::size_t refresh_interval,
                   std::size_t total_capacity = 100'000);

  void push(Experience e) override;
  std::size_t size() const override;
  Batch sample(std::size_t batch_size, Rng& rng) override;
  // Refreshes on every K-th episode once something is stored.
  void on_episode(std::size_t episode) override;
  // First refresh if the K boundary has not produced one yet.
  void on_learning_start() override;

  // Recompute P from current partition sizes. Throws AllEmpty.
  void refresh_probs();
  bool refreshed() const { return refreshed_; }
  const std::vector<double>& probs() const { return probs_; }
  std::vector<std::size_t> sizes() const;
  std::size_t num_categories() const { return parts_.size(); }
  const Ring& partition(std::size_t i) const { return parts_.at(i); }
  double alpha() const { return alpha_; }
  std::size_t refresh_interval() const { return k_; }

 private:
  std::vector<double> priorities_;
  double alpha_;
  std::size_t k_;
  std::vector<Ring> parts_;
  std::vector<double> probs_;
  bool refreshed_ = false;
};

// Binary sum tree over leaf priorities.
class SumTree {
 public:
  explicit SumTree(std::size_t capacity);
  void set(std::size_t leaf, double value);
  double get(std::size_t leaf) const { return tree_[leaf + size_]; }
  double total() const { return tree_[1]; }
  // Leaf whose cumulative interval contains `mass` in [0, total()).
  std::size_t find(double mass) const;
  std::size_t capacity() const { return capacity_; }

 private:
  std::size_t capacity_;
  std::size_t size_;  // leaves, rounded up to a power of two
  std::vector<double> tree_;
};

// Proportional prioritized replay: priority (|td| + eps)^alpha, new items at
// the running maximum, importance weights (n P)^-beta normalized by the max,
// beta annealed linearly from beta0 to 1.
class PrioritizedBuffer final : public ReplayBuffer {
 public:
  PrioritizedBuffer(std::size_t capacity, double alpha = 0.6, double beta0 = 0.4,
                    double eps = 1e-6);

  void push(Experience e) override;
  std::size_t size() const override { return ring_.size(); }
  Batch sample(std::size_t batch_size, Rng& rng) override;
  void update_priorities(const Batch& batch, const std::vector<double>& td) override;
  void set_progress(double fraction) override;
  double beta() const { return beta_; }
  double priority(std::size_t slot) const { return tree_.get(slot); }

 private:
  Ring ring_;
  SumTree tree_;
  double alpha_, beta0_, beta_, eps_;
  double max_priority_ = 1.0;
};

}  // namespace ecrl::replay
