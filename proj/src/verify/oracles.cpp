#include "ecrl/verify/oracles.hpp"

#include <algorithm>
#include <cmath>

#include "ecrl/ltlf/semantics.hpp"

namespace ecrl::verify {

using ltlf::Formula;

const std::size_t kRedGreenTable[4][4] = {
    {0, 2, 1, 1},  // q1
    {1, 1, 1, 1},  // q2
    {2, 1, 3, 1},  // q3
    {3, 3, 3, 3},  // q4
};

Formula random_formula(std::mt19937_64& rng, std::size_t depth, std::size_t num_atoms) {
  std::uniform_int_distribution<int> leaf(0, 9);
  auto atom = [&] {
    std::uniform_int_distribution<std::size_t> pick(0, num_atoms - 1);
    return Formula::atom(pick(rng));
  };
  if (depth == 0) {
    int k = leaf(rng);
    if (k == 0) return Formula::top();
    if (k == 1) return Formula::bottom();
    if (k == 2) return Formula::last();
    return atom();
  }
  std::uniform_int_distribution<int> op(0, 13);
  auto sub = [&] { return random_formula(rng, depth - 1, num_atoms); };
  switch (op(rng)) {
    case 0: return atom();
    case 1: return Formula::negation(sub());
    case 2: return Formula::conj(sub(), sub());
    case 3: return Formula::disj(sub(), sub());
    case 4: return Formula::implies(sub(), sub());
    case 5: return Formula::iff(sub(), sub());
    case 6: return Formula::next(sub());
    case 7: return Formula::weak_next(sub());
    case 8:
    case 9: return Formula::until(sub(), sub());
    case 10: return Formula::eventually(sub());
    case 11: return Formula::always(sub());
    case 12: return Formula::conj(atom(), sub());
    default: return Formula::negation(Formula::until(sub(), sub()));
  }
}

void for_each_trace(std::size_t num_atoms, std::size_t max_len,
                    const std::function<void(const ltlf::Trace&)>& fn) {
  const std::uint32_t letters = 1U << num_atoms;
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::vector<std::uint32_t> digits(len, 0);
    while (true) {
      std::vector<ltlf::TraceState> states;
      for (auto d : digits) states.emplace_back(d);
      fn(ltlf::Trace(states));
      std::size_t i = 0;
      while (i < len && ++digits[i] == letters) digits[i++] = 0;
      if (i == len) break;
    }
  }
}

LanguageCheck compare_language(const dfa::Dfa& d, const Formula& f, std::size_t max_len) {
  LanguageCheck out;
  for_each_trace(d.atoms().size(), max_len, [&](const ltlf::Trace& t) {
    ++out.traces;
    // Fold the transition table directly rather than through Dfa::accepts.
    std::size_t q = d.initial();
    for (const auto& s : t) q = d.table()[q][s.bits()];
    if (d.is_accepting(q) != ltlf::evaluate(t, 0, f)) {
      ++out.mismatches;
      if (!out.counterexample) out.counterexample = t;
    }
  });
  return out;
}

std::vector<double> category_probabilities_reference(const std::vector<std::size_t>& sizes,
                                                     const std::vector<double>& priorities,
                                                     double alpha) {
  std::vector<long double> logw(sizes.size(), -INFINITY);
  long double top = -INFINITY;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] == 0) continue;
    logw[i] = std::log(static_cast<long double>(sizes[i])) +
              static_cast<long double>(alpha) * std::log(static_cast<long double>(priorities[i]));
    top = std::max(top, logw[i]);
  }
  long double z = 0.0L;
  for (auto lw : logw)
    if (std::isfinite(static_cast<double>(lw))) z += std::exp(lw - top);
  std::vector<double> out(sizes.size(), 0.0);
  for (std::size_t i = 0; i < sizes.size(); ++i)
    if (sizes[i] != 0) out[i] = static_cast<double>(std::exp(logw[i] - top) / z);
  return out;
}

TelescopingCheck check_telescoping(product::ProductEnv& env, std::size_t rollouts,
                                   std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto space = env.action_space();
  TelescopingCheck out;
  for (std::size_t k = 0; k < rollouts; ++k) {
    env.reset();
    const auto q0 = env.automaton_state();
    double raw = 0.0, shaped = 0.0;
    while (!env.done()) {
      env::Action a;
      if (space.is_discrete()) {
        std::uniform_int_distribution<std::size_t> pick(0, space.count - 1);
        a = {static_cast<double>(pick(rng))};
      } else {
        std::uniform_real_distribution<double> u(space.low, space.high);
        for (std::size_t d = 0; d < space.dimension; ++d) a.push_back(u(rng));
      }
      auto r = env.step(a);
      raw += r.raw_reward;
      shaped += r.shaped_reward;
    }
    const double expected = env.potential(env.automaton_state()) - env.potential(q0);
    out.max_error = std::max(out.max_error, std::abs((shaped - raw) - expected));
    ++out.rollouts;
  }
  return out;
}

std::vector<double> numeric_gradient(learn::Mlp& net,
                                     const std::function<double(const learn::Mlp&)>& loss,
                                     double eps) {
  auto theta = net.parameters();
  std::vector<double> g(theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const double keep = theta[i];
    theta[i] = keep + eps;
    net.set_parameters(theta);
    const double up = loss(net);
    theta[i] = keep - eps;
    net.set_parameters(theta);
    const double down = loss(net);
    theta[i] = keep;
    g[i] = (up - down) / (2 * eps);
  }
  net.set_parameters(theta);
  return g;
}

double relative_error(const std::vector<double>& a, const std::vector<double>& b, double floor) {
  double diff = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff += (a[i] - b[i]) * (a[i] - b[i]);
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  return std::sqrt(diff) / std::max(std::sqrt(na) + std::sqrt(nb), floor);
}

}  // namespace ecrl::verify
