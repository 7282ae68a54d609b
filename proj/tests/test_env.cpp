#include <gtest/gtest.h>

#include <cmath>

#include "ecrl/env/cartpole.hpp"
#include "ecrl/env/gridworld.hpp"
#include "ecrl/env/value_iteration.hpp"
#include "ecrl/env/waterworld.hpp"
#include "fixtures.hpp"

namespace ecrl::env {
namespace {

WaterworldConfig one_ball(Vec2 agent, Vec2 ball, Vec2 velocity = {0.0, 0.0}) {
  WaterworldConfig c;
  c.side = 10.0;
  c.agent_start = agent;
  c.balls = {{ball, velocity, "r"}};
  return c;
}

double distance(const Vec2& a, const Vec2& b) { return std::hypot(a[0] - b[0], a[1] - b[1]); }

TEST(Waterworld, BallReflectsOffWall) {
  auto c = one_ball({5, 5}, {9.45, 3.0}, {2.0, -1.0});
  WaterworldState s{c.agent_start, {0, 0}, c.balls};
  auto next = waterworld_step(c, s, {0, 0});
  EXPECT_EQ(next.balls[0].velocity[0], -2.0);
  EXPECT_EQ(next.balls[0].velocity[1], -1.0);
  EXPECT_LE(next.balls[0].position[0], c.side - c.ball_radius);
}

TEST(Waterworld, ZeroActionMovesUniformly) {
  auto c = one_ball({5, 5}, {2, 2}, {1.0, 0.5});
  WaterworldState s{c.agent_start, {1.5, -2.0}, c.balls};
  auto next = waterworld_step(c, s, {0, 0});
  EXPECT_NEAR(next.agent_position[0], 5.15, 1e-12);
  EXPECT_NEAR(next.agent_position[1], 4.80, 1e-12);
  EXPECT_EQ(next.agent_velocity, (Vec2{1.5, -2.0}));
  EXPECT_NEAR(next.balls[0].position[0], 2.1, 1e-12);
  EXPECT_NEAR(next.balls[0].position[1], 2.05, 1e-12);
}

TEST(Waterworld, SpeedCapHolds) {
  auto c = one_ball({5, 5}, {1, 1});
  WaterworldState s{c.agent_start, {3.5, 0.0}, c.balls};
  auto next = waterworld_step(c, s, {c.max_acceleration, 0.0});
  EXPECT_EQ(next.agent_velocity[0], 3.5);
}

TEST(Waterworld, AccelerationMagnitudeClamped) {
  auto c = one_ball({5, 5}, {1, 1});
  WaterworldState s{c.agent_start, {0, 0}, c.balls};
  auto next = waterworld_step(c, s, {100.0, 100.0});
  EXPECT_NEAR(std::hypot(next.agent_velocity[0], next.agent_velocity[1]), c.max_acceleration * c.dt,
              1e-12);
}

TEST(Waterworld, ContactIsClosed) {
  ltlf::AtomSet colors{"r"};
  auto touching = [&](Vec2 ball) {
    auto c = one_ball({5, 5}, ball);
    return waterworld_labels(c, colors, {c.agent_start, {0, 0}, c.balls}).holds(0);
  };
  EXPECT_TRUE(touching({5, 5}));
  EXPECT_TRUE(touching({6, 5}));
  EXPECT_FALSE(touching({6.01, 5}));
}

TEST(Waterworld, TouchedBallRespawnsAwayFromAgent) {
  auto c = one_ball({5, 5}, {5.5, 5});
  c.respawn_on_contact = true;
  Waterworld w(c, 3);
  ASSERT_TRUE(w.labels().holds(0));
  w.step({0.0});
  const auto& s = w.state();
  // One step moves the ball by at most sqrt(2) * 0.2.
  EXPECT_GT(distance(s.balls[0].position, s.agent_position), c.respawn_clearance - 0.3);
  EXPECT_FALSE(w.labels().holds(0));
  for (double v : s.balls[0].velocity) EXPECT_LE(std::abs(v), c.ball_max_speed);
}

TEST(Waterworld, WithoutRespawnContactPersists) {
  auto c = one_ball({5, 5}, {5.5, 5});
  Waterworld w(c, 3);
  w.step({0.0});
  EXPECT_TRUE(w.labels().holds(0));
}

TEST(Waterworld, ResetRestoresInitialBalls) {
  auto c = one_ball({5, 5}, {5.5, 5});
  c.respawn_on_contact = true;
  Waterworld w(c, 4);
  w.step({0.0});
  w.reset();
  EXPECT_EQ(w.state().balls[0].position, (Vec2{5.5, 5}));
}

TEST(Waterworld, GeneratedMapsRespectBounds) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto c = generate_waterworld_map(10.0, {{"r", 2}, {"b", 2}, {"g", 2}}, seed);
    ASSERT_EQ(c.balls.size(), 6u);
    for (const auto& b : c.balls) {
      ASSERT_GE(b.position[0], c.ball_radius);
      ASSERT_LE(b.position[0], c.side - c.ball_radius);
      ASSERT_GT(distance(b.position, c.agent_start), c.agent_radius + c.ball_radius);
      for (double v : b.velocity) ASSERT_LE(std::abs(v), c.ball_max_speed);
    }
    auto again = generate_waterworld_map(10.0, {{"r", 2}, {"b", 2}, {"g", 2}}, seed);
    ASSERT_EQ(again.balls[3].position, c.balls[3].position);
  }
}

TEST(Waterworld, SpeedsRespectedAlongRandomRollout) {
  auto c = generate_waterworld_map(10.0, {{"r", 3}, {"g", 3}}, 7);
  c.respawn_on_contact = true;
  Waterworld w(c, 7);
  std::mt19937_64 rng(7);
  for (int t = 0; t < 2000; ++t) {
    w.step({static_cast<double>(rng() % 9)});
    const auto& s = w.state();
    for (double v : s.agent_velocity) ASSERT_LE(std::abs(v), c.agent_max_speed);
    for (const auto& b : s.balls) {
      for (double v : b.velocity) ASSERT_LE(std::abs(v), c.ball_max_speed);
      for (double p : b.position) ASSERT_TRUE(p >= c.ball_radius && p <= c.side - c.ball_radius);
    }
  }
}

TEST(Waterworld, InvalidConfigRejected) {
  auto c = one_ball({5, 5}, {0.1, 5});
  EXPECT_THROW(validate(c), ConfigError);
  c = one_ball({5, 5}, {2, 2}, {3.0, 0.0});
  EXPECT_THROW(validate(c), ConfigError);
}

TEST(Cartpole, UprightEquilibriumHolds) {
  Cartpole cp{CartpoleConfig{}};
  cp.reset();
  cp.set_state({});
  for (int t = 0; t < 100; ++t) {
    auto r = cp.step({0.0});
    ASSERT_FALSE(r.terminated);
  }
  EXPECT_EQ(cp.state().theta, 0.0);
}

TEST(Cartpole, LeavingTrackIsPenalized) {
  Cartpole cp{CartpoleConfig{}};
  cp.reset();
  cp.set_state({3.49, 2.0, 0.0, 0.0});
  auto r = cp.step({0.0});
  EXPECT_TRUE(r.terminated);
  EXPECT_EQ(r.reward, -10.0);
}

TEST(Cartpole, ConstantForceMovesMonotonically) {
  Cartpole cp{CartpoleConfig{}};
  cp.reset();
  cp.set_state({});
  double prev = 0.0;
  for (int t = 0; t < 500; ++t) {
    auto r = cp.step({1.0});
    ASSERT_GT(cp.state().x, prev);
    prev = cp.state().x;
    if (r.terminated) break;
  }
}

TEST(Cartpole, RegionsTileTheTrack) {
  CartpoleConfig c;
  auto regions = cartpole_regions(c);
  ASSERT_EQ(regions.size(), 7u);
  EXPECT_DOUBLE_EQ(regions.front()[0], -3.5);
  for (std::size_t k = 0; k < regions.size(); ++k) {
    EXPECT_DOUBLE_EQ(regions[k][1] - regions[k][0], 1.0);
    if (k > 0) {
      EXPECT_DOUBLE_EQ(regions[k][0], regions[k - 1][1]);
    }
  }
  EXPECT_DOUBLE_EQ(regions.back()[1], 3.5);
}

TEST(Cartpole, BoundaryBelongsToLowerRegion) {
  CartpoleConfig c;
  CartpoleState s;
  s.x = -2.5;
  auto l = cartpole_labels(c, s);
  EXPECT_TRUE(l.holds(0));
  EXPECT_FALSE(l.holds(1));
  s.x = -3.5;
  EXPECT_EQ(cartpole_labels(c, s).bits(), 0u);
}

TEST(Cartpole, PropositionNames) {
  Cartpole cp{CartpoleConfig{}};
  EXPECT_EQ(cp.propositions().name(0), "g1");
  EXPECT_EQ(cp.propositions().name(6), "g7");
}

GridworldConfig line(std::size_t width, std::size_t goal) {
  GridworldConfig c;
  c.width = width;
  c.height = 1;
  c.start = Cell{0, 0};
  c.colors = {{"g", {{goal, 0}}}};
  return c;
}

TEST(Gridworld, WallsHoldAgent) {
  Gridworld g(line(3, 2), 0);
  g.reset();
  bool stayed = false;
  for (std::size_t a = 0; a < 4; ++a) {
    auto out = g.transitions(0, a);
    ASSERT_EQ(out.size(), 1u);
    stayed |= out[0].next == 0;
  }
  EXPECT_TRUE(stayed);
}

TEST(Gridworld, SlipSplitsProbability) {
  auto c = line(3, 2);
  c.height = 3;
  c.slip = 0.2;
  Gridworld g(c, 0);
  for (std::size_t s = 0; s < g.num_states(); ++s)
    for (std::size_t a = 0; a < 4; ++a) {
      double total = 0.0;
      for (const auto& o : g.transitions(s, a)) total += o.probability;
      ASSERT_NEAR(total, 1.0, 1e-12);
    }
}

TEST(Gridworld, LabelsFollowColors) {
  Gridworld g(line(3, 2), 0);
  EXPECT_TRUE(g.label_of(2).holds(0));
  EXPECT_FALSE(g.label_of(1).holds(0));
}

ProductMdp goal_mdp(std::size_t width, std::size_t goal, double gamma, const char* formula = "F g") {
  Gridworld g(line(width, goal), 0);
  ltlf::AtomSet atoms{"g"};
  auto d = dfa::compile(testing::core(formula, atoms), atoms);
  return build_product_mdp(g, d, 100.0, gamma);
}

double start_value(const ProductMdp& mdp, const ValueIterationResult& vi) {
  double v = 0.0;
  for (const auto& [p, x] : mdp.start) v += p * vi.value[x];
  return v;
}

TEST(ValueIteration, OneMoveFromGoal) {
  auto mdp = goal_mdp(2, 1, 1.0);
  auto vi = value_iteration(mdp, 1.0);
  EXPECT_NEAR(start_value(mdp, vi), 100.0, 1e-9);
}

TEST(ValueIteration, DiscountedChain) {
  // Goal two moves away: the reward arrives on the second transition.
  auto two = goal_mdp(3, 2, 0.9);
  EXPECT_NEAR(start_value(two, value_iteration(two, 0.9)), 90.0, 1e-8);
  // Goal three moves away: 0.9^2 * 100.
  auto three = goal_mdp(4, 3, 0.9);
  EXPECT_NEAR(start_value(three, value_iteration(three, 0.9)), 81.0, 1e-8);
}

TEST(ValueIteration, UnreachableGoalHasZeroValue) {
  GridworldConfig c = line(3, 2);
  c.colors.push_back({"r", {{1, 0}}});
  Gridworld g(c, 0);
  ltlf::AtomSet atoms{"g", "r"};
  auto d = dfa::compile(testing::core("F (g & r)", atoms), atoms);
  auto mdp = build_product_mdp(g, d, 100.0, 0.9);
  auto vi = value_iteration(mdp, 0.9);
  for (double v : vi.value) EXPECT_EQ(v, 0.0);
}

TEST(ValueIteration, SuccessProbabilities) {
  auto mdp = goal_mdp(4, 3, 0.9);
  auto vi = value_iteration(mdp, 0.9);
  EXPECT_DOUBLE_EQ(success_probability(mdp, vi.policy, 3), 1.0);
  EXPECT_DOUBLE_EQ(success_probability(mdp, vi.policy, 2), 0.0);
  EXPECT_DOUBLE_EQ(optimal_success_probability(mdp, 3), 1.0);
}

TEST(ValueIteration, GreedyActionBreaksTiesLow) {
  EXPECT_EQ(greedy_action({1.0, 3.0, 3.0 - 1e-12, 2.0}), 1u);
  EXPECT_EQ(optimal_actions({1.0, 3.0, 3.0 - 1e-12, 2.0}, 1e-9), (std::vector<std::size_t>{1, 2}));
}

TEST(ValueIteration, NonFiniteRewardRejected) {
  Gridworld g(line(2, 1), 0);
  ltlf::AtomSet atoms{"g"};
  auto d = dfa::compile(testing::core("F g", atoms), atoms);
  EXPECT_THROW(value_iteration(build_product_mdp(g, d, std::numeric_limits<double>::infinity(), 0.9), 0.9),
               NonFinite);
}

}  // namespace
}  // namespace ecrl::env
