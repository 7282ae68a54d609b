#include <gtest/gtest.h>

#include <deque>
#include <fstream>
#include <random>
#include <regex>
#include <set>
#include <sstream>

#include "ecrl/dfa/export.hpp"
#include "ecrl/dfa/guard.hpp"
#include "ecrl/ltlf/semantics.hpp"
#include "ecrl/verify/oracles.hpp"
#include "fixtures.hpp"

namespace ecrl::testing {
namespace {

using dfa::Dfa;
using dfa::StateId;
using ltlf::Trace;

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

// Shortest word separating p and q by acceptance, searched breadth-first over
// state pairs up to `limit` letters.
std::optional<std::size_t> distinguishing_length(const Dfa& d, StateId p, StateId q,
                                                 std::size_t limit) {
  std::set<std::pair<StateId, StateId>> seen{{p, q}};
  std::deque<std::tuple<StateId, StateId, std::size_t>> frontier{{p, q, 0}};
  while (!frontier.empty()) {
    auto [a, b, len] = frontier.front();
    frontier.pop_front();
    if (d.is_accepting(a) != d.is_accepting(b)) return len;
    if (len == limit) continue;
    for (std::uint32_t m = 0; m < d.num_valuations(); ++m) {
      auto next = std::make_pair(d.step_mask(a, m), d.step_mask(b, m));
      if (seen.insert(next).second) frontier.emplace_back(next.first, next.second, len + 1);
    }
  }
  return std::nullopt;
}

TEST(Compile, RedGreenShape) {
  const auto& d = red_green_dfa();
  ASSERT_EQ(d.num_states(), 4u);
  EXPECT_EQ(d.accepting_states(), std::vector<StateId>{q4});
  EXPECT_EQ(d.error_states(), std::vector<StateId>{q2});
  EXPECT_EQ(d.initial(), q1);
  for (StateId q = 0; q < 4; ++q)
    for (std::uint32_t m = 0; m < 4; ++m) EXPECT_EQ(d.step_mask(q, m), verify::kRedGreenTable[q][m]);
}

TEST(Compile, EventuallyHasTwoStates) {
  ltlf::AtomSet atoms{"g"};
  auto f = core("true U g", atoms);
  auto d = dfa::compile(f, atoms);
  ASSERT_EQ(d.num_states(), 2u);
  const StateId init = d.initial(), acc = 1 - init;
  EXPECT_FALSE(d.is_accepting(init));
  EXPECT_TRUE(d.is_accepting(acc));
  EXPECT_EQ(d.step_mask(init, 0), init);
  EXPECT_EQ(d.step_mask(init, 1), acc);
  EXPECT_EQ(d.step_mask(acc, 0), acc);
  EXPECT_EQ(d.step_mask(acc, 1), acc);
  EXPECT_EQ(verify::compare_language(d, f, 5).mismatches, 0u);
}

TEST(Compile, ContradictionIsUnsatisfiable) {
  ltlf::AtomSet atoms{"g"};
  EXPECT_THROW(dfa::compile(core("g & !g", atoms), atoms), dfa::UnsatisfiableTask);
}

TEST(Compile, ClosureCapEnforced) {
  ltlf::AtomSet atoms{"a", "b", "c"};
  auto f = core("F (a & X F (b & X F (c & X F (a & X F b))))", atoms);
  EXPECT_THROW(dfa::compile(f, atoms, {.max_states = 3}), dfa::ClosureOverflow);
}

TEST(Minimize, RedGreenAlreadyMinimal) {
  const auto& d = red_green_dfa();
  auto m = dfa::minimize(d);
  ASSERT_EQ(m.num_states(), d.num_states());
  EXPECT_EQ(m.table(), d.table());
}

TEST(Minimize, DuplicatedAcceptingSinksMerge) {
  ltlf::AtomSet atoms{"a"};
  Dfa d(atoms, {{2, 1}, {1, 1}, {2, 2}}, 0, {false, true, true});
  auto m = dfa::minimize(d);
  EXPECT_EQ(m.num_states(), 2u);
  EXPECT_EQ(m.accepting_states().size(), 1u);
}

TEST(Minimize, RedundantParityBitHalvesStates) {
  const auto& base = red_green_dfa();
  std::vector<std::vector<StateId>> table(8, std::vector<StateId>(4));
  std::vector<bool> accepting(8);
  for (StateId q = 0; q < 4; ++q)
    for (StateId bit = 0; bit < 2; ++bit) {
      accepting[2 * q + bit] = base.is_accepting(q);
      for (std::uint32_t m = 0; m < 4; ++m) table[2 * q + bit][m] = 2 * base.step_mask(q, m) + (1 - bit);
    }
  Dfa doubled(rg(), table, 0, accepting);
  auto m = dfa::minimize(doubled);
  EXPECT_EQ(m.num_states(), 4u);
  verify::for_each_trace(2, 6, [&](const Trace& t) { ASSERT_EQ(m.accepts(t), doubled.accepts(t)); });
}

TEST(Minimize, DropsUnreachableStates) {
  ltlf::AtomSet atoms{"a"};
  Dfa d(atoms, {{0, 1}, {1, 1}, {2, 1}}, 0, {false, true, false});
  EXPECT_EQ(dfa::minimize(d).num_states(), 2u);
}

TEST(ErrorStates, RedGreen) { EXPECT_EQ(dfa::find_error_states(red_green_dfa()), std::vector<StateId>{q2}); }

TEST(ErrorStates, AllAccepting) {
  ltlf::AtomSet atoms{"a"};
  Dfa d(atoms, {{1, 1}, {0, 0}}, 0, {true, true});
  EXPECT_TRUE(dfa::find_error_states(d).empty());
}

TEST(ErrorStates, TrapBesideChain) {
  ltlf::AtomSet atoms{"a"};
  // q0 -a-> q1 -> q2 (accepting); q0 -!a-> trap.
  Dfa d(atoms, {{3, 1}, {2, 2}, {2, 2}, {3, 3}}, 0, {false, false, true, false});
  EXPECT_EQ(dfa::find_error_states(d), std::vector<StateId>{3});
}

TEST(Step, RedGreenTransitions) {
  const auto& d = red_green_dfa();
  EXPECT_EQ(d.step(q1, st({"r"})), q3);
  for (auto s : {st({}), st({"r"}), st({"g"}), st({"r", "g"})}) EXPECT_EQ(d.step(q4, s), q4);
  EXPECT_EQ(d.step(q3, st({"g"})), q4);
}

TEST(Accepts, RedGreenTraces) {
  const auto& d = red_green_dfa();
  EXPECT_TRUE(d.accepts(Trace{st({"r"}), st({"g"})}));
  EXPECT_FALSE(d.accepts(Trace{st({"g"})}));
  EXPECT_EQ(d.run(Trace{st({"g"})}), q2);
}

TEST(Accepts, SingleStepAcceptance) {
  ltlf::AtomSet atoms{"g"};
  auto d = dfa::compile(core("g", atoms), atoms);
  auto s = ltlf::TraceState::of(atoms, {"g"});
  ASSERT_TRUE(d.is_accepting(d.step(d.initial(), s)));
  EXPECT_TRUE(d.accepts(Trace{s}));
}

TEST(Export, DotCounts) {
  auto dot = dfa::export_dot(red_green_dfa());
  std::regex node(R"(^  q\d+( \[[^\]]*\])?;$)");
  std::size_t nodes = 0;
  std::istringstream lines(dot);
  for (std::string line; std::getline(lines, line);) nodes += std::regex_match(line, node);
  EXPECT_EQ(nodes, 4u);
  EXPECT_EQ(count(dot, "->"), 9u);
  EXPECT_EQ(count(dot, "label=\"\""), 0u);
  EXPECT_EQ(count(dot, "doublecircle"), 1u);
  EXPECT_EQ(count(dot, "dashed"), 1u);
  EXPECT_EQ(dot, dfa::export_dot(red_green_dfa()));
}

TEST(Export, RddlMatchesGolden) {
  std::ifstream in(std::string(ECRL_GOLDEN_DIR) + "/red_green.rddl");
  ASSERT_TRUE(in);
  std::stringstream golden;
  golden << in.rdbuf();
  auto text = dfa::export_rddl(red_green_dfa(), 100.0);
  EXPECT_EQ(text, golden.str());
  EXPECT_NE(text.find("reward = 100*(fQ == @q4);"), std::string::npos);
  EXPECT_NE(text.find("termination {fQ == @q2; fQ == @q4;}"), std::string::npos);
  EXPECT_EQ(count(text, "reward ="), 1u);
}

TEST(Export, RddlRoundTrip) {
  const auto& d = red_green_dfa();
  auto edges = dfa::parse_rddl_cpfs(dfa::export_rddl(d, 100.0), rg());
  ASSERT_EQ(edges.size(), d.edges().size());
  std::vector<bool> acc(d.num_states());
  for (StateId q = 0; q < d.num_states(); ++q) acc[q] = d.is_accepting(q);
  auto back = Dfa::from_edges(rg(), d.num_states(), edges, d.initial(), acc);
  EXPECT_EQ(back.table(), d.table());
}

TEST(Export, JsonRoundTrip) {
  const auto& d = red_green_dfa();
  auto j = dfa::to_json(d);
  EXPECT_EQ(j.at("errors"), nlohmann::json::array({1}));
  auto back = dfa::dfa_from_json(j);
  EXPECT_EQ(back.table(), d.table());
  EXPECT_EQ(back.accepting_states(), d.accepting_states());
}

TEST(Guard, SynthesizedGuardDenotesMasks) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 1 + trial % 4;
    std::vector<std::uint32_t> masks;
    for (std::uint32_t m = 0; m < (1U << n); ++m)
      if (rng() % 2) masks.push_back(m);
    auto g = dfa::synthesize_guard(masks, n);
    ASSERT_TRUE(g.is_propositional());
    for (std::uint32_t m = 0; m < (1U << n); ++m)
      ASSERT_EQ(dfa::guard_holds(g, m), std::find(masks.begin(), masks.end(), m) != masks.end());
  }
}

TEST(FromEdges, RejectsOverlappingGuards) {
  ltlf::AtomSet atoms{"a"};
  auto t = ltlf::Formula::top();
  EXPECT_THROW(Dfa::from_edges(atoms, 2, {{0, t, 0}, {0, ltlf::Formula::atom(0), 1}, {1, t, 1}}, 0,
                               {false, true}),
               dfa::InvalidDfa);
}

class CompiledRandom : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    std::mt19937_64 rng(77);
    std::uniform_int_distribution<std::size_t> depth(1, 4), atoms(1, 3);
    while (cases_.size() < 40) {
      std::size_t n = atoms(rng);
      auto f = ltlf::expand_derived(verify::random_formula(rng, depth(rng), n));
      std::vector<std::string> names{"a", "b", "c"};
      names.resize(n);
      ltlf::AtomSet set(names);
      try {
        cases_.push_back({f, std::make_shared<Dfa>(dfa::compile(f, set))});
      } catch (const dfa::UnsatisfiableTask&) {
      }
    }
  }
  struct Case {
    ltlf::Formula f;
    std::shared_ptr<Dfa> d;
  };
  static inline std::vector<Case> cases_;
};

TEST_F(CompiledRandom, LanguageMatchesSemantics) {
  for (const auto& c : cases_) {
    auto check = verify::compare_language(*c.d, c.f, c.d->atoms().size() <= 2 ? 6 : 4);
    ASSERT_EQ(check.mismatches, 0u);
  }
}

TEST_F(CompiledRandom, EdgesAreTotalAndDeterministic) {
  for (const auto& c : cases_) {
    const auto& d = *c.d;
    for (StateId q = 0; q < d.num_states(); ++q)
      for (std::uint32_t m = 0; m < d.num_valuations(); ++m) {
        std::size_t enabled = 0;
        for (const auto& e : d.edges())
          if (e.from == q && dfa::guard_holds(e.guard, m)) ++enabled;
        ASSERT_EQ(enabled, 1u);
      }
  }
}

TEST_F(CompiledRandom, ErrorStatesNeverReachAccepting) {
  for (const auto& c : cases_) {
    const auto& d = *c.d;
    for (StateId e : d.error_states()) {
      ASSERT_FALSE(d.is_accepting(e));
      std::set<StateId> seen{e};
      std::vector<StateId> stack{e};
      while (!stack.empty()) {
        auto q = stack.back();
        stack.pop_back();
        ASSERT_FALSE(d.is_accepting(q));
        for (auto n : d.successors(q))
          if (seen.insert(n).second) stack.push_back(n);
      }
    }
    // Every other state has some path into F.
    for (StateId q = 0; q < d.num_states(); ++q) {
      if (d.is_error(q)) continue;
      std::set<StateId> seen{q};
      std::vector<StateId> stack{q};
      bool reaches = false;
      while (!stack.empty() && !reaches) {
        auto x = stack.back();
        stack.pop_back();
        reaches = d.is_accepting(x);
        for (auto n : d.successors(x))
          if (seen.insert(n).second) stack.push_back(n);
      }
      ASSERT_TRUE(reaches);
    }
  }
}

TEST_F(CompiledRandom, StatesArePairwiseDistinguishable) {
  for (const auto& c : cases_) {
    const auto& d = *c.d;
    for (StateId p = 0; p < d.num_states(); ++p)
      for (StateId q = p + 1; q < d.num_states(); ++q)
        ASSERT_TRUE(distinguishing_length(d, p, q, d.num_states()).has_value());
  }
}

}  // namespace
}  // namespace ecrl::testing
