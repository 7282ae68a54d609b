#include "ecrl/product/product_env.hpp"

#include <cmath>
#include <cstring>
#include <deque>
#include <set>

#include "ecrl/env/value_iteration.hpp"

namespace ecrl::product {

LabelMap::LabelMap(const ltlf::AtomSet& env_props, const ltlf::AtomSet& dfa_atoms) {
  for (const auto& name : dfa_atoms.names()) {
    auto i = env_props.find(name);
    if (!i) throw ltlf::UnknownProposition(name);
    source_.push_back(*i);
  }
}

ltlf::TraceState LabelMap::operator()(ltlf::TraceState env_state) const {
  ltlf::TraceState out;
  for (std::size_t k = 0; k < source_.size(); ++k)
    if (env_state.holds(source_[k])) out.set(k);
  return out;
}

ProductEnv::ProductEnv(std::unique_ptr<env::Environment> base, TaskSpec task,
                       std::optional<rank::RankTable> ranks, ProductOptions options)
    : base_(std::move(base)),
      task_(std::move(task)),
      ranks_(std::move(ranks)),
      options_(options) {
  if (!base_ || !task_.dfa) throw ConfigError("product environment needs a base and an automaton");
  if (!std::isfinite(task_.reward)) throw ConfigError("task reward must be finite");
  if (!(task_.gamma > 0.0 && task_.gamma <= 1.0)) throw ConfigError("gamma must lie in (0, 1]");
  if (options_.shaping && !ranks_) throw ConfigError("shaping requires a rank table");
  if (ranks_ && ranks_->num_states() != task_.dfa->num_states())
    throw ConfigError("rank table does not match the automaton");
  label_ = LabelMap(base_->propositions(), task_.dfa->atoms());
  horizon_ = options_.horizon ? options_.horizon : base_->default_horizon();
}

std::unique_ptr<ProductEnv> ProductEnv::clone() const {
  return std::make_unique<ProductEnv>(base_->clone(), task_, ranks_, options_);
}

double ProductEnv::potential(dfa::StateId q) const {
  return ranks_ ? ranks_->potential.at(q) : 0.0;
}

std::size_t ProductEnv::observation_size() const {
  return base_->observation_size() +
         (options_.encoding == Encoding::Enumerated ? 1 : task_.dfa->num_states());
}

std::vector<double> ProductEnv::observe(const std::vector<double>& base_obs) const {
  std::vector<double> obs = base_obs;
  const std::size_t n = task_.dfa->num_states();
  if (options_.encoding == Encoding::Enumerated) {
    obs.push_back(n > 1 ? static_cast<double>(q_) / static_cast<double>(n - 1) : 0.0);
  } else {
    for (std::size_t k = 0; k < n; ++k) obs.push_back(k == q_ ? 1.0 : 0.0);
  }
  return obs;
}

std::vector<double> ProductEnv::reset() {
  auto base_obs = base_->reset();
  const auto& d = *task_.dfa;
  q_ = options_.delayed_automaton_step ? d.initial() : d.step(d.initial(), label_(base_->labels()));
  t_ = 0;
  done_ = d.is_accepting(q_) || d.is_error(q_);
  trace_.clear();
  return observe(base_obs);
}

ProductStep ProductEnv::step(const Action& action) {
  if (done_) throw StepAfterTermination();
  const auto& d = *task_.dfa;
  ProductStep out;
  out.q = q_;
  // In delayed mode the automaton reads the state the action is taken from.
  const auto before = label_(base_->labels());
  auto base_step = base_->step(action);
  const auto letter = options_.delayed_automaton_step ? before : label_(base_->labels());
  q_ = d.step(q_, letter);
  ++t_;
  out.q_next = q_;
  out.accepted = d.is_accepting(q_);
  out.raw_reward = base_step.reward + (out.accepted ? task_.reward : 0.0);
  out.shaped_reward = out.raw_reward;
  if (options_.shaping) out.shaped_reward += task_.gamma * potential(out.q_next) - potential(out.q);
  out.terminated = out.accepted || d.is_error(q_) || base_step.terminated;
  out.truncated = !out.terminated && t_ >= horizon_;
  done_ = out.terminated || out.truncated;
  out.observation = observe(base_step.observation);
  if (record_)
    trace_.push_back({t_, out.q, out.q_next, hash_action(action), out.raw_reward,
                      out.shaped_reward, out.terminated});
  return out;
}

std::optional<std::size_t> ProductEnv::tabular_state() const {
  auto s = base_->tabular_state();
  auto n = base_->tabular_state_count();
  if (!s || !n) return std::nullopt;
  return q_ * *n + *s;
}

std::optional<std::size_t> ProductEnv::tabular_state_count() const {
  auto n = base_->tabular_state_count();
  if (!n) return std::nullopt;
  return *n * task_.dfa->num_states();
}

StateCount ProductEnv::product_state_count(Encoding mode) const {
  auto n = base_->tabular_state_count();
  const auto* model = dynamic_cast<const env::TabularModel*>(base_.get());
  if (!n || !model) throw NotTabular("product state count needs a finite base environment");
  const std::size_t nq = task_.dfa->num_states();
  if (mode == Encoding::OneHot && nq >= 63) throw NotTabular("2^|Q| overflows");
  StateCount c;
  c.naive = (mode == Encoding::Enumerated ? nq : (std::size_t{1} << nq)) * *n;

  // Reachable (s, q) pairs; the one-hot encoding reaches the same pairs since
  // exactly one indicator is set at a time.
  auto mdp = env::build_product_mdp(*model, *task_.dfa, task_.reward, task_.gamma);
  std::vector<bool> seen(mdp.num_states(), false);
  std::deque<std::size_t> queue;
  for (const auto& [p, x] : mdp.start)
    if (p > 0.0 && !seen[x]) {
      seen[x] = true;
      queue.push_back(x);
    }
  while (!queue.empty()) {
    auto x = queue.front();
    queue.pop_front();
    ++c.reachable;
    for (std::size_t a = 0; a < mdp.num_actions; ++a)
      for (const auto& o : mdp.outcomes(x, a))
        if (o.probability > 0.0 && !seen[o.next]) {
          seen[o.next] = true;
          queue.push_back(o.next);
        }
  }
  return c;
}

std::uint64_t hash_action(const Action& a) {
  // FNV-1a over the raw bytes.
  std::uint64_t h = 1469598103934665603ULL;
  for (double v : a) {
    unsigned char bytes[sizeof(double)];
    std::memcpy(bytes, &v, sizeof v);
    for (unsigned char b : bytes) {
      h ^= b;
      h *= 1099511628211ULL;
    }
  }
  return h;
}

void write_trace_csv(std::ostream& os, const std::vector<TraceRow>& rows) {
  os << "step,q,q_next,action_hash,raw_reward,shaped_reward,terminated\n";
  for (const auto& r : rows)
    os << r.step << ',' << dfa::Dfa::state_name(r.q) << ',' << dfa::Dfa::state_name(r.q_next) << ','
       << r.action_hash << ',' << r.raw_reward << ',' << r.shaped_reward << ','
       << (r.terminated ? 1 : 0) << '\n';
}

}  // namespace ecrl::product
