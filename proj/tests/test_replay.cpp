#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>

#include "ecrl/replay/buffers.hpp"
#include "ecrl/verify/oracles.hpp"

namespace ecrl::replay {
namespace {

const std::vector<double> kFig4Priorities{1.0 / 4, 1.0 / 3, 1.0 / 2, 1.0};

Experience item(std::size_t category, double tag = 0.0) {
  Experience e;
  e.category = category;
  e.r = tag;
  return e;
}

TEST(Probabilities, UniformExponentEqualSizes) {
  auto p = category_probabilities({10, 10, 10, 10}, kFig4Priorities, 0.0);
  for (double x : p) EXPECT_DOUBLE_EQ(x, 0.25);
}

TEST(Probabilities, UniformExponentProportionalToSizes) {
  auto p = category_probabilities({30, 10, 0, 10}, kFig4Priorities, 0.0);
  EXPECT_DOUBLE_EQ(p[0], 0.6);
  EXPECT_DOUBLE_EQ(p[1], 0.2);
  EXPECT_EQ(p[2], 0.0);
  EXPECT_DOUBLE_EQ(p[3], 0.2);
}

TEST(Probabilities, ExponentThreeQuarters) {
  // Independent evaluation: w_i = |B_i| * p_i^0.75.
  const double w[4] = {100 * std::pow(0.25, 0.75), 50 * std::pow(1.0 / 3, 0.75),
                       10 * std::pow(0.5, 0.75), 5.0};
  const double total = w[0] + w[1] + w[2] + w[3];
  auto p = category_probabilities({100, 50, 10, 5}, kFig4Priorities, 0.75);
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(p[i], w[i] / total, 1e-15);
  // Hand-evaluated to four places; the weights sum to 68.2359.
  const double rounded[4] = {0.5181, 0.3215, 0.0871, 0.0733};
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(p[i], rounded[i], 5e-5);
}

TEST(Probabilities, AllEmptyThrows) {
  EXPECT_THROW(category_probabilities({0, 0, 0, 0}, kFig4Priorities, 0.75), AllEmpty);
}

TEST(Probabilities, MatchesLogSpaceReference) {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<std::size_t> n(3, 8), size(0, 5000);
  std::uniform_real_distribution<double> prio(0.01, 10.0), alpha(0.0, 2.0);
  for (int t = 0; t < 500; ++t) {
    std::vector<std::size_t> sizes(n(rng));
    std::vector<double> pr(sizes.size());
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      sizes[i] = rng() % 4 == 0 ? 0 : size(rng);
      pr[i] = prio(rng);
    }
    if (std::all_of(sizes.begin(), sizes.end(), [](auto s) { return s == 0; })) sizes[0] = 1;
    const double a = alpha(rng);
    auto got = category_probabilities(sizes, pr, a);
    auto ref = verify::category_probabilities_reference(sizes, pr, a);
    double sum = 0.0;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      sum += got[i];
      if (sizes[i] == 0) {
        ASSERT_EQ(got[i], 0.0);
      } else {
        ASSERT_LE(std::abs(got[i] - ref[i]), 1e-12 * ref[i]);
      }
    }
    ASSERT_NEAR(sum, 1.0, 1e-12);
  }
}

TEST(Ring, KeepsNewestAtCapacityOne) {
  Ring ring(1);
  ring.push(item(0, 1.0));
  ring.push(item(0, 2.0));
  ASSERT_EQ(ring.size(), 1u);
  EXPECT_EQ(ring.at(0).r, 2.0);
}

TEST(Ring, EvictsOldestFirst) {
  Ring ring(3);
  for (int i = 0; i < 5; ++i) ring.push(item(0, i));
  std::vector<double> kept;
  for (std::size_t i = 0; i < ring.size(); ++i) kept.push_back(ring.at(i).r);
  std::sort(kept.begin(), kept.end());
  EXPECT_EQ(kept, (std::vector<double>{2, 3, 4}));
}

TEST(Classified, PushGoesToRankPartition) {
  ClassifiedBuffer buf(kFig4Priorities, 0.75, 10, 400);
  EXPECT_EQ(buf.num_categories(), 4u);
  EXPECT_EQ(buf.partition(0).capacity(), 100u);
  buf.push(item(3));  // accepting q4
  buf.push(item(2));  // error q2
  EXPECT_EQ(buf.sizes(), (std::vector<std::size_t>{0, 0, 1, 1}));
  EXPECT_EQ(buf.size(), 2u);
}

TEST(Classified, DegenerateDistributionSamplesOneCategory) {
  ClassifiedBuffer buf(kFig4Priorities, 0.75, 1, 400);
  for (int i = 0; i < 20; ++i) buf.push(item(0));
  buf.refresh_probs();
  EXPECT_EQ(buf.probs(), (std::vector<double>{1, 0, 0, 0}));
  Rng rng(1);
  for (const auto* e : buf.sample(256, rng).items) ASSERT_EQ(e->category, 0u);
}

TEST(Classified, TwoEqualCategoriesSplitEvenly) {
  ClassifiedBuffer buf({1.0, 1.0, 1.0}, 1.0, 1, 3000);
  for (int i = 0; i < 50; ++i) {
    buf.push(item(0));
    buf.push(item(2));
  }
  buf.refresh_probs();
  Rng rng(2);
  std::size_t zeros = 0;
  const std::size_t draws = 100000;
  for (const auto* e : buf.sample(draws, rng).items) zeros += e->category == 0;
  EXPECT_NEAR(static_cast<double>(zeros) / draws, 0.5, 0.01);
}

TEST(Classified, EmptyBatch) {
  ClassifiedBuffer buf(kFig4Priorities, 0.75, 1, 400);
  buf.push(item(1));
  buf.refresh_probs();
  Rng rng(3);
  EXPECT_TRUE(buf.sample(0, rng).items.empty());
}

TEST(Classified, EmptySamplingThrows) {
  ClassifiedBuffer buf(kFig4Priorities, 0.75, 1, 400);
  Rng rng(3);
  EXPECT_THROW(buf.refresh_probs(), AllEmpty);
  EXPECT_THROW(buf.sample(4, rng), AllEmpty);
}

TEST(Classified, ZeroExponentIsUniformOverExperiences) {
  ClassifiedBuffer buf(kFig4Priorities, 0.0, 1, 4000);
  const std::size_t sizes[4] = {12, 5, 0, 8};
  double tag = 0;
  for (std::size_t c = 0; c < 4; ++c)
    for (std::size_t k = 0; k < sizes[c]; ++k) buf.push(item(c, tag++));
  buf.refresh_probs();
  Rng rng(4);
  std::map<double, std::size_t> hits;
  const std::size_t draws = 100000;
  for (const auto* e : buf.sample(draws, rng).items) ++hits[e->r];
  ASSERT_EQ(hits.size(), 25u);
  for (const auto& [t, n] : hits) EXPECT_NEAR(static_cast<double>(n) / draws, 1.0 / 25, 0.01);
}

TEST(Classified, ProbabilitiesOnlyChangeOnRefreshBoundary) {
  ClassifiedBuffer buf(kFig4Priorities, 0.75, 10, 400);
  buf.push(item(0));
  buf.on_episode(0);
  ASSERT_TRUE(buf.refreshed());
  const auto before = buf.probs();
  for (std::size_t ep = 1; ep < 10; ++ep) {
    buf.push(item(ep % 4));
    buf.on_episode(ep);
    ASSERT_EQ(buf.probs(), before);
  }
  buf.on_episode(10);
  EXPECT_NE(buf.probs(), before);
}

TEST(Classified, PushTouchesOnlyTargetPartition) {
  ClassifiedBuffer buf(kFig4Priorities, 0.75, 10, 40);
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    auto before = buf.sizes();
    const std::size_t c = rng() % 4;
    buf.push(item(c));
    auto after = buf.sizes();
    std::size_t total = 0;
    for (std::size_t k = 0; k < 4; ++k) {
      total += after[k];
      if (k != c) {
        ASSERT_EQ(after[k], before[k]);
      }
    }
    ASSERT_EQ(total, buf.size());
  }
}

TEST(SumTree, FindsByCumulativeMass) {
  SumTree tree(5);
  const double v[5] = {1, 0, 2, 3, 4};
  for (std::size_t i = 0; i < 5; ++i) tree.set(i, v[i]);
  EXPECT_DOUBLE_EQ(tree.total(), 10.0);
  EXPECT_EQ(tree.find(0.5), 0u);
  EXPECT_EQ(tree.find(1.5), 2u);
  EXPECT_EQ(tree.find(3.0), 3u);
  EXPECT_EQ(tree.find(9.99), 4u);
}

TEST(Prioritized, NewItemsGetMaxPriorityAndWeightsAreNormalized) {
  PrioritizedBuffer buf(16, 0.6, 0.4);
  for (int i = 0; i < 8; ++i) buf.push(item(0, i));
  Rng rng(6);
  auto batch = buf.sample(8, rng);
  buf.update_priorities(batch, std::vector<double>(batch.items.size(), 0.0));
  buf.push(item(0, 99));
  batch = buf.sample(64, rng);
  double wmax = 0.0;
  for (double w : batch.weights) wmax = std::max(wmax, w);
  EXPECT_DOUBLE_EQ(wmax, 1.0);
  buf.set_progress(1.0);
  EXPECT_DOUBLE_EQ(buf.beta(), 1.0);
}

TEST(Uniform, SamplesStoredItems) {
  UniformBuffer buf(4);
  for (int i = 0; i < 6; ++i) buf.push(item(0, i));
  Rng rng(7);
  for (const auto* e : buf.sample(100, rng).items) ASSERT_GE(e->r, 2.0);
}

}  // namespace
}  // namespace ecrl::replay
