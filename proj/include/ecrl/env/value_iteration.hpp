#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "ecrl/dfa/dfa.hpp"
#include "ecrl/env/environment.hpp"

namespace ecrl::env {

class NonFinite : public Error {
 public:
  using Error::Error;
};

// Explicit MDP over product states x = q * |S| + s. States whose automaton
// component is accepting or error are absorbing with value 0.
struct ProductMdp {
  struct Outcome {
    double probability;
    std::size_t next;
    double reward;
  };

  std::size_t num_base_states = 0;
  std::size_t num_automaton_states = 0;
  std::size_t num_actions = 0;
  std::vector<bool> terminal;
  std::vector<bool> accepting;
  // transitions[x * num_actions + a]
  std::vector<std::vector<Outcome>> transitions;
  std::vector<std::pair<double, std::size_t>> start;

  std::size_t num_states() const { return terminal.size(); }
  std::size_t index(std::size_t q, std::size_t s) const { return q * num_base_states + s; }
  const std::vector<Outcome>& outcomes(std::size_t x, std::size_t a) const {
    return transitions[x * num_actions + a];
  }
};

// Reward on (s, q) -> (s', q') is `reward` when q' is accepting, plus
// gamma * potential[q'] - potential[q] when potentials are given. The first
// label is consumed at the start state.
ProductMdp build_product_mdp(const TabularModel& model, const dfa::Dfa& dfa, double reward,
                             double gamma,
                             const std::optional<std::vector<double>>& potential = std::nullopt);

struct ValueIterationResult {
  std::vector<double> value;
  std::vector<double> q;  // q[x * num_actions + a]
  std::vector<std::size_t> policy;
  std::size_t iterations = 0;
};

struct ValueIterationOptions {
  double tolerance = 1e-10;
  std::size_t max_iterations = 1'000'000;
  // Actions within this margin of the best are ties; the lowest index wins.
  double tie_tolerance = 1e-9;
};

// Throws NonFinite when values diverge or a reward is not finite.
ValueIterationResult value_iteration(const ProductMdp& mdp, double gamma,
                                     const ValueIterationOptions& options = {});

// Greedy action: lowest index whose value is within `tie` of the maximum.
std::size_t greedy_action(const std::vector<double>& q_row, double tie = 1e-9);

// Indices within `tie` of the maximum.
std::vector<std::size_t> optimal_actions(const std::vector<double>& q_row, double tie);

// Exact probability that the stationary policy enters an accepting state
// within `horizon` steps from the start distribution.
double success_probability(const ProductMdp& mdp, const std::vector<std::size_t>& policy,
                           std::size_t horizon);

// Maximum over all (history-dependent) policies of the same probability.
double optimal_success_probability(const ProductMdp& mdp, std::size_t horizon);

// Same probabilities per start product state rather than averaged.
std::vector<double> success_probability_by_state(const ProductMdp& mdp,
                                                 const std::vector<std::size_t>& policy,
                                                 std::size_t horizon);

}  // namespace ecrl::env
