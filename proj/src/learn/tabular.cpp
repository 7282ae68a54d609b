#include "ecrl/learn/tabular.hpp"

#include <algorithm>

namespace ecrl::learn {

double EpsilonSchedule::at(double progress) const {
  if (fraction <= 0.0 || progress >= fraction) return end;
  return start + (end - start) * progress / fraction;
}

double QTable::max(std::size_t s) const {
  auto first = q_.begin() + static_cast<std::ptrdiff_t>(s * actions_);
  return *std::max_element(first, first + static_cast<std::ptrdiff_t>(actions_));
}

double q_learning_update(QTable& table, const replay::Experience& e, double lr, double gamma) {
  if (!e.state || !e.next_state || e.a.empty()) throw Error("tabular update needs state indices");
  const auto s = *e.state;
  const auto a = static_cast<std::size_t>(e.a.front());
  const double target = e.r + (e.terminated ? 0.0 : gamma * table.max(*e.next_state));
  const double td = target - table.at(s, a);
  table.at(s, a) += lr * td;
  return td;
}

TabularAgent::TabularAgent(std::size_t states, std::size_t actions, TabularConfig config)
    : table_(states, actions), config_(config) {}

env::Action TabularAgent::act(const std::vector<double>&, std::optional<std::size_t> state,
                              bool explore, replay::Rng& rng) {
  if (!state) throw Error("tabular agent needs a tabular environment");
  const std::size_t na = table_.num_actions();
  std::uniform_real_distribution<double> u(0.0, 1.0);
  if (explore && u(rng) < config_.epsilon.at(progress_)) {
    std::uniform_int_distribution<std::size_t> pick(0, na - 1);
    return {static_cast<double>(pick(rng))};
  }
  // Random tie-breaking while acting; untouched rows are all zero.
  const double best = table_.max(*state);
  std::vector<std::size_t> ties;
  for (std::size_t a = 0; a < na; ++a)
    if (table_.at(*state, a) == best) ties.push_back(a);
  std::uniform_int_distribution<std::size_t> pick(0, ties.size() - 1);
  return {static_cast<double>(ties[pick(rng)])};
}

std::vector<double> TabularAgent::update(const replay::Batch& batch, replay::Rng&) {
  std::vector<double> td;
  td.reserve(batch.items.size());
  for (std::size_t k = 0; k < batch.items.size(); ++k) {
    double lr = config_.learning_rate * (batch.weights.empty() ? 1.0 : batch.weights[k]);
    td.push_back(q_learning_update(table_, *batch.items[k], lr, config_.gamma));
  }
  return td;
}

std::vector<std::size_t> TabularAgent::greedy_policy() const {
  std::vector<std::size_t> out(table_.num_states());
  for (std::size_t s = 0; s < out.size(); ++s) {
    auto row = table_.row(s);
    out[s] = static_cast<std::size_t>(std::max_element(row.begin(), row.end()) - row.begin());
  }
  return out;
}

nlohmann::json TabularAgent::to_json() const {
  return {{"kind", "tabular"},
          {"states", table_.num_states()},
          {"actions", table_.num_actions()},
          {"q", table_.values()}};
}

}  // namespace ecrl::learn
