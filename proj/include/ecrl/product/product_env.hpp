#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <ostream>
#include <vector>

#include "ecrl/dfa/dfa.hpp"
#include "ecrl/env/environment.hpp"
#include "ecrl/product/labeling.hpp"
#include "ecrl/rank/asp.hpp"

namespace ecrl::product {

using env::Action;

enum class Encoding { Enumerated, OneHot };

class StepAfterTermination : public Error {
 public:
  StepAfterTermination() : Error("step called on a finished episode") {}
};

class NotTabular : public Error {
 public:
  using Error::Error;
};

// A task <formula, reward> already compiled to its automaton.
struct TaskSpec {
  std::shared_ptr<const dfa::Dfa> dfa;
  double reward = 100.0;
  double gamma = 0.99;
};

struct ProductOptions {
  Encoding encoding = Encoding::Enumerated;
  bool shaping = false;
  // RDDL ordering: the automaton reads the label of the state the action is
  // taken from, so s_0 is consumed by the first step instead of at reset.
  bool delayed_automaton_step = false;
  // 0 means the base environment's default horizon.
  std::size_t horizon = 0;
};

struct ProductStep {
  std::vector<double> observation;
  double raw_reward = 0.0;
  double shaped_reward = 0.0;
  bool terminated = false;  // accepting, error, or base termination
  bool truncated = false;   // horizon reached without termination
  dfa::StateId q = 0;
  dfa::StateId q_next = 0;
  bool accepted = false;
};

struct TraceRow {
  std::size_t step;
  dfa::StateId q;
  dfa::StateId q_next;
  std::uint64_t action_hash;
  double raw_reward;
  double shaped_reward;
  bool terminated;
};

struct StateCount {
  std::size_t naive = 0;
  std::size_t reachable = 0;
};

// Base environment synchronized with a task automaton. Observations are the
// base features followed by the automaton feature: a single scalar q/(|Q|-1)
// in Enumerated mode, a |Q|-length indicator in OneHot mode.
class ProductEnv {
 public:
  ProductEnv(std::unique_ptr<env::Environment> base, TaskSpec task,
             std::optional<rank::RankTable> ranks, ProductOptions options);

  std::vector<double> reset();
  ProductStep step(const Action& action);

  // True once the episode has terminated or been truncated. Can already hold
  // right after reset when s_0 decides the task.
  bool done() const { return done_; }
  dfa::StateId automaton_state() const { return q_; }
  std::size_t steps() const { return t_; }

  const dfa::Dfa& dfa() const { return *task_.dfa; }
  const TaskSpec& task() const { return task_; }
  const ProductOptions& options() const { return options_; }
  const std::optional<rank::RankTable>& ranks() const { return ranks_; }
  env::Environment& base() { return *base_; }
  const env::Environment& base() const { return *base_; }

  std::size_t observation_size() const;
  env::ActionSpace action_space() const { return base_->action_space(); }
  std::size_t horizon() const { return horizon_; }
  double potential(dfa::StateId q) const;

  // Product index q * |S| + s for tabular learners.
  std::optional<std::size_t> tabular_state() const;
  std::optional<std::size_t> tabular_state_count() const;

  // |Q| x |S| (Enumerated) or 2^|Q| x |S| (OneHot) plus the number of
  // product states reachable from the start distribution. Throws NotTabular.
  StateCount product_state_count(Encoding mode) const;

  void record_trace(bool on) { record_ = on; }
  const std::vector<TraceRow>& trace() const { return trace_; }

  std::unique_ptr<ProductEnv> clone() const;

 private:
  std::vector<double> observe(const std::vector<double>& base_obs) const;

  std::unique_ptr<env::Environment> base_;
  TaskSpec task_;
  std::optional<rank::RankTable> ranks_;
  ProductOptions options_;
  LabelMap label_;
  std::size_t horizon_;

  dfa::StateId q_ = 0;
  std::size_t t_ = 0;
  bool done_ = true;
  bool record_ = false;
  std::vector<TraceRow> trace_;
};

std::uint64_t hash_action(const Action& a);
void write_trace_csv(std::ostream& os, const std::vector<TraceRow>& rows);

}  // namespace ecrl::product
