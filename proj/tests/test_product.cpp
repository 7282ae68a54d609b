#include <gtest/gtest.h>

#include <map>
#include <random>

#include "ecrl/env/gridworld.hpp"
#include "ecrl/product/product_env.hpp"
#include "ecrl/rank/asp.hpp"
#include "ecrl/verify/oracles.hpp"
#include "fixtures.hpp"

namespace ecrl::testing {
namespace {

using env::Cell;
using env::Gridworld;
using env::GridworldConfig;
using product::Encoding;
using product::ProductEnv;

// r at (1,1), g at (3,3) on a 5x5 grid.
GridworldConfig grid(std::optional<Cell> start, std::size_t side = 5) {
  GridworldConfig c;
  c.width = c.height = side;
  c.colors = {{"r", {{1, 1}}}, {"g", {{3, 3}}}};
  c.start = start;
  c.horizon = 60;
  return c;
}

ProductEnv make(GridworldConfig config, double gamma = 0.99, bool shaping = true,
                Encoding enc = Encoding::Enumerated, std::uint64_t seed = 1) {
  product::TaskSpec task{red_green_ptr(), 100.0, gamma};
  return ProductEnv(std::make_unique<Gridworld>(std::move(config), seed), task,
                    rank::rank_states(red_green_dfa(), 4, 1.0),
                    {.encoding = enc, .shaping = shaping});
}

// First action whose step lands on `target`, found by trying each on a clone.
env::Action action_to(const ProductEnv& env, Cell target) {
  const auto& g = dynamic_cast<const Gridworld&>(env.base());
  for (double a = 0; a < 4; ++a) {
    auto c = env.clone();
    auto& cg = dynamic_cast<Gridworld&>(c->base());
    cg.set_state(*g.tabular_state());
    c->base().step({a});
    if (*cg.tabular_state() == g.index(target)) return {a};
  }
  ADD_FAILURE() << "no action reaches the target";
  return {0.0};
}

TEST(Reset, UncoloredStartStaysInInitialState) {
  auto env = make(grid(Cell{2, 2}));
  env.reset();
  EXPECT_EQ(env.automaton_state(), q1);
  EXPECT_FALSE(env.done());
}

TEST(Reset, GreenStartIsImmediateError) {
  auto env = make(grid(Cell{3, 3}));
  env.reset();
  EXPECT_EQ(env.automaton_state(), q2);
  EXPECT_TRUE(env.done());
}

TEST(Reset, OneHotMarksInitialState) {
  auto env = make(grid(Cell{2, 2}), 0.99, true, Encoding::OneHot);
  auto obs = env.reset();
  ASSERT_EQ(obs.size(), 2u + 4u);
  EXPECT_EQ(std::vector<double>(obs.end() - 4, obs.end()), (std::vector<double>{1, 0, 0, 0}));
}

TEST(Reset, DelayedModeConsumesStartLabelOnFirstStep) {
  product::TaskSpec task{red_green_ptr(), 100.0, 0.99};
  ProductEnv env(std::make_unique<Gridworld>(grid(Cell{1, 1}), 1), task, std::nullopt,
                 {.delayed_automaton_step = true});
  env.reset();
  EXPECT_EQ(env.automaton_state(), q1);
  auto out = env.step({0.0});
  EXPECT_EQ(out.q_next, q3);
}

TEST(Step, EnteringGreenFromQ3Accepts) {
  auto config = grid(Cell{1, 1});
  config.colors[1].cells = {{1, 2}};
  auto env = make(config);
  env.reset();
  ASSERT_EQ(env.automaton_state(), q3);
  auto out = env.step(action_to(env, {1, 2}));
  EXPECT_EQ(out.q, q3);
  EXPECT_EQ(out.q_next, q4);
  EXPECT_DOUBLE_EQ(out.raw_reward, 100.0);
  EXPECT_TRUE(out.terminated);
  EXPECT_TRUE(out.accepted);
  EXPECT_THROW(env.step({0.0}), product::StepAfterTermination);
}

TEST(Step, SelfLoopBonusVanishesUndiscounted) {
  auto env = make(grid(Cell{2, 2}), 1.0);
  env.reset();
  auto out = env.step(action_to(env, {2, 3}));
  EXPECT_EQ(out.q_next, q1);
  EXPECT_EQ(out.shaped_reward - out.raw_reward, 0.0);
}

TEST(Step, RedBonusFromRankPotentials) {
  auto env = make(grid(Cell{1, 2}), 0.99);
  env.reset();
  auto out = env.step(action_to(env, {1, 1}));
  ASSERT_EQ(out.q_next, q3);
  const double bonus = out.shaped_reward - out.raw_reward;
  EXPECT_NEAR(bonus, 0.99 / 3.0 - 0.25, 1e-12);
  EXPECT_NEAR(bonus, 0.0800, 5e-5);
}

TEST(Step, TruncatesAtHorizon) {
  auto config = grid(Cell{4, 4});
  config.horizon = 3;
  auto env = make(config);
  env.reset();
  product::ProductStep out;
  for (int i = 0; i < 3; ++i) out = env.step(action_to(env, {4, 4}));
  EXPECT_TRUE(out.truncated);
  EXPECT_FALSE(out.terminated);
  EXPECT_TRUE(env.done());
}

TEST(StateCount, TenByTen) {
  auto env = make(grid(std::nullopt, 10));
  EXPECT_EQ(env.product_state_count(Encoding::Enumerated).naive, 400u);
  EXPECT_EQ(env.product_state_count(Encoding::OneHot).naive, 1600u);
}

TEST(StateCount, FiveByFive) {
  auto env = make(grid(std::nullopt, 5));
  EXPECT_EQ(env.product_state_count(Encoding::Enumerated).naive, 100u);
  EXPECT_EQ(env.product_state_count(Encoding::OneHot).naive, 400u);
  EXPECT_LE(env.product_state_count(Encoding::Enumerated).reachable, 100u);
}

TEST(StateCount, SingleAutomatonState) {
  auto single = std::make_shared<const dfa::Dfa>(rg(), std::vector<std::vector<dfa::StateId>>{{0, 0, 0, 0}},
                                                 0, std::vector<bool>{true});
  ProductEnv env(std::make_unique<Gridworld>(grid(std::nullopt), 1), {single, 100.0, 0.99},
                 std::nullopt, {});
  EXPECT_EQ(env.product_state_count(Encoding::Enumerated).naive, 25u);
  EXPECT_EQ(env.product_state_count(Encoding::OneHot).naive, 50u);
}

struct Episode {
  std::vector<ltlf::TraceState> labels;
  std::vector<product::ProductStep> steps;
};

Episode rollout(ProductEnv& env, std::mt19937_64& rng) {
  Episode e;
  env.reset();
  e.labels.push_back(env.base().labels());
  std::uniform_int_distribution<int> pick(0, 3);
  while (!env.done()) {
    e.steps.push_back(env.step({static_cast<double>(pick(rng))}));
    e.labels.push_back(env.base().labels());
  }
  return e;
}

TEST(Properties, TraceConsistency) {
  auto env = make(grid(std::nullopt));
  std::mt19937_64 rng(3);
  std::size_t accepted = 0;
  for (int i = 0; i < 2000; ++i) {
    auto e = rollout(env, rng);
    const bool ended_in_f = env.dfa().is_accepting(env.automaton_state());
    ASSERT_EQ(red_green_dfa().accepts(ltlf::Trace(e.labels)), ended_in_f);
    accepted += ended_in_f;
  }
  EXPECT_GT(accepted, 0u);
}

TEST(Properties, TelescopingUndiscounted) {
  auto env = make(grid(std::nullopt), 1.0);
  auto check = verify::check_telescoping(env, 1000, 5);
  EXPECT_EQ(check.rollouts, 1000u);
  EXPECT_LE(check.max_error, 1e-9);
}

TEST(Properties, BonusDependsOnlyOnAutomatonTransition) {
  auto env = make(grid(std::nullopt), 0.9);
  std::mt19937_64 rng(4);
  std::map<std::pair<dfa::StateId, dfa::StateId>, double> bonus;
  for (int i = 0; i < 500; ++i)
    for (const auto& s : rollout(env, rng).steps) {
      const double b = s.shaped_reward - s.raw_reward;
      auto [it, fresh] = bonus.emplace(std::make_pair(s.q, s.q_next), b);
      if (!fresh) {
        ASSERT_EQ(it->second, b);
      }
    }
  EXPECT_GE(bonus.size(), 3u);
}

TEST(Properties, RewardEmittedOncePerEpisode) {
  auto env = make(grid(std::nullopt));
  std::mt19937_64 rng(6);
  for (int i = 0; i < 1000; ++i) {
    auto e = rollout(env, rng);
    std::size_t emitted = 0;
    for (std::size_t k = 0; k < e.steps.size(); ++k) {
      const auto& s = e.steps[k];
      if (s.raw_reward != 0.0) {
        ++emitted;
        ASSERT_TRUE(s.accepted);
        ASSERT_EQ(k + 1, e.steps.size());
      }
    }
    ASSERT_LE(emitted, 1u);
  }
}

TEST(Properties, EncodingsAgreeOnAutomatonAndReward) {
  auto a = make(grid(std::nullopt), 0.99, true, Encoding::Enumerated, 9);
  auto b = make(grid(std::nullopt), 0.99, true, Encoding::OneHot, 9);
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> pick(0, 3);
  for (int ep = 0; ep < 200; ++ep) {
    a.reset();
    b.reset();
    ASSERT_EQ(a.automaton_state(), b.automaton_state());
    while (!a.done()) {
      ASSERT_FALSE(b.done());
      env::Action act{static_cast<double>(pick(rng))};
      auto x = a.step(act), y = b.step(act);
      ASSERT_EQ(x.q_next, y.q_next);
      ASSERT_EQ(x.raw_reward, y.raw_reward);
      ASSERT_EQ(x.shaped_reward, y.shaped_reward);
      ASSERT_EQ(x.terminated, y.terminated);
      ASSERT_EQ(x.truncated, y.truncated);
    }
    ASSERT_TRUE(b.done());
  }
}

TEST(Labels, UnknownDfaAtomRejected) {
  ltlf::AtomSet atoms{"r", "blue"};
  auto d = std::make_shared<const dfa::Dfa>(dfa::compile(core("F blue", atoms), atoms));
  EXPECT_THROW(ProductEnv(std::make_unique<Gridworld>(grid(std::nullopt), 1), {d, 100.0, 0.99},
                          std::nullopt, {}),
               ltlf::UnknownProposition);
}

}  // namespace
}  // namespace ecrl::testing
