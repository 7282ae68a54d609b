#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ecrl/dfa/dfa.hpp"
#include "ecrl/learn/mlp.hpp"
#include "ecrl/ltlf/formula.hpp"
#include "ecrl/product/product_env.hpp"

// Reference implementations used to check the library. They deliberately
// avoid the code paths they check.
namespace ecrl::verify {

// Random formula over the first `num_atoms` atoms, using every operator
// including the derived ones.
ltlf::Formula random_formula(std::mt19937_64& rng, std::size_t depth, std::size_t num_atoms);

// Calls fn on every trace over `num_atoms` atoms with length 1..max_len.
void for_each_trace(std::size_t num_atoms, std::size_t max_len,
                    const std::function<void(const ltlf::Trace&)>& fn);

struct LanguageCheck {
  std::size_t traces = 0;
  std::size_t mismatches = 0;
  std::optional<ltlf::Trace> counterexample;
};

// accepts(d, sigma) against evaluate(sigma, 0, f) on every trace up to max_len.
LanguageCheck compare_language(const dfa::Dfa& d, const ltlf::Formula& f, std::size_t max_len);

// Normalized category probabilities |B_i| p_i^alpha, evaluated in log space
// with long double accumulation.
std::vector<double> category_probabilities_reference(const std::vector<std::size_t>& sizes,
                                                     const std::vector<double>& priorities,
                                                     double alpha);

struct TelescopingCheck {
  std::size_t rollouts = 0;
  double max_error = 0.0;
};

// Random-action rollouts on a shaping product environment with gamma = 1:
// (shaped - raw) must equal potential(q_T) - potential(q_init).
TelescopingCheck check_telescoping(product::ProductEnv& env, std::size_t rollouts,
                                   std::uint64_t seed);

// Central differences of loss(net) w.r.t. every parameter.
std::vector<double> numeric_gradient(learn::Mlp& net,
                                     const std::function<double(const learn::Mlp&)>& loss,
                                     double eps = 1e-5);

// ||a - b|| / max(||a|| + ||b||, floor).
double relative_error(const std::vector<double>& a, const std::vector<double>& b,
                      double floor = 1e-12);

// Hand-derived red-then-green transition table over atoms (r, g): rows q1..q4,
// columns by valuation mask {}, {r}, {g}, {r,g}.
extern const std::size_t kRedGreenTable[4][4];

}  // namespace ecrl::verify
