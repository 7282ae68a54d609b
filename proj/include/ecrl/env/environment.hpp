#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ecrl/error.hpp"
#include "ecrl/ltlf/formula.hpp"

namespace ecrl::env {

using ltlf::TraceState;

// Discrete actions are carried as a one-element vector holding the index.
using Action = std::vector<double>;

struct ActionSpace {
  enum class Kind { Discrete, Continuous } kind = Kind::Discrete;
  std::size_t count = 0;      // discrete: number of actions
  std::size_t dimension = 0;  // continuous: vector length
  double low = -1.0;          // continuous bounds, per component
  double high = 1.0;

  static ActionSpace discrete(std::size_t n) { return {Kind::Discrete, n, 1, 0, 0}; }
  static ActionSpace continuous(std::size_t dim, double lo, double hi) {
    return {Kind::Continuous, 0, dim, lo, hi};
  }
  bool is_discrete() const { return kind == Kind::Discrete; }
};

struct StepResult {
  std::vector<double> observation;
  double reward = 0.0;
  bool terminated = false;
};

class Environment {
 public:
  virtual ~Environment() = default;

  virtual std::vector<double> reset() = 0;
  virtual StepResult step(const Action& action) = 0;

  // Propositions this environment can label, in the bit order of labels().
  virtual const ltlf::AtomSet& propositions() const = 0;
  // Valuation of the current state.
  virtual TraceState labels() const = 0;

  virtual ActionSpace action_space() const = 0;
  virtual std::size_t observation_size() const = 0;
  virtual std::size_t default_horizon() const = 0;

  // Finite-state environments expose their state index.
  virtual std::optional<std::size_t> tabular_state() const { return std::nullopt; }
  virtual std::optional<std::size_t> tabular_state_count() const { return std::nullopt; }

  virtual std::unique_ptr<Environment> clone() const = 0;
};

// Explicit transition model for finite environments, used by the
// value-iteration oracle and for product state-space counts.
class TabularModel {
 public:
  virtual ~TabularModel() = default;

  struct Outcome {
    double probability;
    std::size_t next;
  };

  virtual std::size_t num_states() const = 0;
  virtual std::size_t num_actions() const = 0;
  virtual std::vector<Outcome> transitions(std::size_t s, std::size_t a) const = 0;
  virtual TraceState label_of(std::size_t s) const = 0;
  virtual const ltlf::AtomSet& propositions() const = 0;
  // Start-state distribution.
  virtual std::vector<Outcome> start_distribution() const = 0;
};

}  // namespace ecrl::env
