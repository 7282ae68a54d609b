#include "ecrl/env/value_iteration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ecrl/product/labeling.hpp"

namespace ecrl::env {

ProductMdp build_product_mdp(const TabularModel& model, const dfa::Dfa& d, double reward,
                             double gamma, const std::optional<std::vector<double>>& potential) {
  if (!std::isfinite(reward) || !std::isfinite(gamma)) throw NonFinite("non-finite reward or discount");
  if (potential && potential->size() != d.num_states())
    throw ConfigError("potential table does not match the automaton");
  product::LabelMap label(model.propositions(), d.atoms());

  ProductMdp m;
  m.num_base_states = model.num_states();
  m.num_automaton_states = d.num_states();
  m.num_actions = model.num_actions();
  const std::size_t n = m.num_base_states * m.num_automaton_states;
  m.terminal.assign(n, false);
  m.accepting.assign(n, false);
  m.transitions.assign(n * m.num_actions, {});

  std::vector<TraceState> labels(m.num_base_states);
  for (std::size_t s = 0; s < m.num_base_states; ++s) labels[s] = label(model.label_of(s));

  for (std::size_t q = 0; q < m.num_automaton_states; ++q) {
    const bool term = d.is_accepting(q) || d.is_error(q);
    for (std::size_t s = 0; s < m.num_base_states; ++s) {
      const std::size_t x = m.index(q, s);
      m.terminal[x] = term;
      m.accepting[x] = d.is_accepting(q);
      if (term) continue;
      for (std::size_t a = 0; a < m.num_actions; ++a) {
        auto& out = m.transitions[x * m.num_actions + a];
        for (const auto& o : model.transitions(s, a)) {
          const std::size_t q2 = d.step(q, labels[o.next]);
          double r = d.is_accepting(q2) ? reward : 0.0;
          if (potential) r += gamma * (*potential)[q2] - (*potential)[q];
          out.push_back({o.probability, m.index(q2, o.next), r});
        }
      }
    }
  }
  for (const auto& o : model.start_distribution()) {
    const std::size_t q = d.step(d.initial(), labels[o.next]);
    m.start.emplace_back(o.probability, m.index(q, o.next));
  }
  return m;
}

std::vector<std::size_t> optimal_actions(const std::vector<double>& q_row, double tie) {
  const double best = *std::max_element(q_row.begin(), q_row.end());
  std::vector<std::size_t> out;
  for (std::size_t a = 0; a < q_row.size(); ++a)
    if (q_row[a] >= best - tie) out.push_back(a);
  return out;
}

std::size_t greedy_action(const std::vector<double>& q_row, double tie) {
  return optimal_actions(q_row, tie).front();
}

ValueIterationResult value_iteration(const ProductMdp& m, double gamma,
                                     const ValueIterationOptions& options) {
  const std::size_t n = m.num_states(), na = m.num_actions;
  for (const auto& row : m.transitions)
    for (const auto& o : row)
      if (!std::isfinite(o.reward)) throw NonFinite("non-finite reward in product MDP");

  ValueIterationResult res;
  res.value.assign(n, 0.0);
  res.q.assign(n * na, 0.0);
  std::vector<double> next(n, 0.0);
  for (res.iterations = 1; res.iterations <= options.max_iterations; ++res.iterations) {
    double delta = 0.0;
    for (std::size_t x = 0; x < n; ++x) {
      if (m.terminal[x]) continue;
      double best = -std::numeric_limits<double>::infinity();
      for (std::size_t a = 0; a < na; ++a) {
        double v = 0.0;
        for (const auto& o : m.outcomes(x, a)) v += o.probability * (o.reward + gamma * res.value[o.next]);
        res.q[x * na + a] = v;
        best = std::max(best, v);
      }
      next[x] = best;
      delta = std::max(delta, std::abs(best - res.value[x]));
    }
    res.value.swap(next);
    for (double v : res.value)
      if (!std::isfinite(v) || std::abs(v) > 1e15) throw NonFinite("value iteration diverged");
    if (delta < options.tolerance) break;
  }
  // Recompute Q from the converged values so the greedy policy is consistent.
  res.policy.assign(n, 0);
  for (std::size_t x = 0; x < n; ++x) {
    if (m.terminal[x]) continue;
    std::vector<double> row(na);
    for (std::size_t a = 0; a < na; ++a) {
      double v = 0.0;
      for (const auto& o : m.outcomes(x, a)) v += o.probability * (o.reward + gamma * res.value[o.next]);
      res.q[x * na + a] = row[a] = v;
    }
    res.policy[x] = greedy_action(row, options.tie_tolerance);
  }
  return res;
}

namespace {

// reach[x] after h rounds: probability of entering F within h steps from x.
template <typename Choose>
std::vector<double> reach_probabilities(const ProductMdp& m, std::size_t horizon, Choose choose) {
  const std::size_t n = m.num_states();
  std::vector<double> reach(n, 0.0), next(n, 0.0);
  for (std::size_t x = 0; x < n; ++x) reach[x] = m.accepting[x] ? 1.0 : 0.0;
  for (std::size_t h = 0; h < horizon; ++h) {
    for (std::size_t x = 0; x < n; ++x) {
      if (m.terminal[x]) {
        next[x] = reach[x];
        continue;
      }
      next[x] = choose(x, [&](std::size_t a) {
        double p = 0.0;
        for (const auto& o : m.outcomes(x, a)) p += o.probability * reach[o.next];
        return p;
      });
    }
    reach.swap(next);
  }
  return reach;
}

double over_start(const ProductMdp& m, const std::vector<double>& reach) {
  double total = 0.0;
  for (const auto& [p, x] : m.start) total += p * reach[x];
  return total;
}

}  // namespace

std::vector<double> success_probability_by_state(const ProductMdp& m,
                                                 const std::vector<std::size_t>& policy,
                                                 std::size_t horizon) {
  if (policy.size() != m.num_states()) throw ConfigError("policy does not cover the product MDP");
  return reach_probabilities(m, horizon, [&](std::size_t x, auto value) { return value(policy[x]); });
}

double success_probability(const ProductMdp& m, const std::vector<std::size_t>& policy,
                           std::size_t horizon) {
  return over_start(m, success_probability_by_state(m, policy, horizon));
}

double optimal_success_probability(const ProductMdp& m, std::size_t horizon) {
  auto reach = reach_probabilities(m, horizon, [&](std::size_t, auto value) {
    double best = 0.0;
    for (std::size_t a = 0; a < m.num_actions; ++a) best = std::max(best, value(a));
    return best;
  });
  return over_start(m, reach);
}

}  // namespace ecrl::env
