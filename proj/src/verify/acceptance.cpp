#include "ecrl/verify/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <tuple>

#include "ecrl/dfa/compile.hpp"
#include "ecrl/env/gridworld.hpp"
#include "ecrl/env/value_iteration.hpp"
#include "ecrl/experiment/runner.hpp"
#include "ecrl/learn/dqn.hpp"
#include "ecrl/learn/td3.hpp"
#include "ecrl/ltlf/parser.hpp"
#include "ecrl/replay/buffers.hpp"
#include "ecrl/verify/oracles.hpp"

namespace ecrl::verify {

namespace fs = std::filesystem;
using experiment::TaskFile;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

std::string fmt(double v, int precision = 4) {
  std::ostringstream os;
  os << std::setprecision(precision) << v;
  return os.str();
}

std::string fmt(const std::optional<double>& v) { return v ? fmt(*v, 6) : "never"; }

TaskFile task(const fs::path& dir, const std::string& name) {
  return experiment::load_task(dir / (name + ".json"));
}

// Looser variant: second Until argument g alone.
constexpr const char* kRedGreenLoose = "(!r & !g) U ((r & !g) & X ((!r & !g) U g))";
constexpr const char* kRedGreen = "(!r & !g) U ((r & !g) & X ((!r & !g) U (g & !r)))";

struct Named {
  std::string label;
  std::string formula;
  ltlf::AtomSet atoms;
  std::size_t max_len;
};

// Relative comparison with optional "never" (nullopt) ordered last.
bool at_most(const std::optional<double>& a, const std::optional<double>& b) {
  if (!a) return !b;
  return !b || *a <= *b;
}

}  // namespace

std::string format_line(const CriterionResult& r) {
  std::ostringstream os;
  os << (r.passed ? "PASS" : "FAIL") << "  [" << r.id << "] " << r.name << " (" << std::fixed
     << std::setprecision(1) << r.seconds << " s): " << r.detail;
  return os.str();
}

CriterionResult check_language_equivalence() {
  const auto start = Clock::now();
  CriterionResult r{1, "DFA language equivalence", false, "", 0.0};
  const ltlf::AtomSet rg{"r", "g"}, rbg{"r", "b", "g"}, g3{"g1", "g2", "g3"};
  const std::string S = "(!r & !b & !g)";
  auto chain = [&](const std::vector<std::string>& steps) {
    std::string out = S + " U (" + steps.back() + ")";
    for (auto it = steps.rbegin() + 1; it != steps.rend(); ++it)
      out = S + " U ((" + *it + ") & X (" + out + "))";
    return out;
  };
  const std::string R = "r & !b & !g", B = "b & !r & !g", G = "g & !r & !b";
  std::vector<Named> named{
      {"red_green", kRedGreen, rg, 6},
      {"red_green_loose", kRedGreenLoose, rg, 6},
      {"task1", chain({R, B, G}), rbg, 4},
      {"task2", chain({R, B, G, R, G, B}), rbg, 4},
      {"task4", "F (g1 & X F (g2 & X F g3))", g3, 4},
  };

  std::size_t traces = 0, mismatches = 0, formulas = 0;
  std::string first_failure;
  auto check = [&](const std::string& label, const ltlf::Formula& f, const ltlf::AtomSet& atoms,
                   std::size_t len) {
    ++formulas;
    dfa::Dfa d = [&] {
      try {
        return dfa::compile(ltlf::expand_derived(f), atoms);
      } catch (const dfa::UnsatisfiableTask&) {
        // Empty language: the all-rejecting one-state automaton.
        return dfa::Dfa(atoms, {std::vector<dfa::StateId>(std::size_t{1} << atoms.size(), 0)}, 0,
                        {false});
      }
    }();
    auto res = compare_language(d, f, len);
    traces += res.traces;
    mismatches += res.mismatches;
    if (res.mismatches && first_failure.empty()) first_failure = label + ": " + ltlf::to_string(f, atoms);
  };
  for (const auto& n : named) check(n.label, ltlf::parse(n.formula, n.atoms), n.atoms, n.max_len);

  std::mt19937_64 rng(20240601);
  const std::vector<std::string> names{"a", "b", "c"};
  for (int k = 0; k < 50; ++k) {
    std::size_t n = 1 + static_cast<std::size_t>(k % 3);
    ltlf::AtomSet atoms(std::vector<std::string>(names.begin(), names.begin() + static_cast<long>(n)));
    std::uniform_int_distribution<std::size_t> depth(1, 4);
    auto f = random_formula(rng, depth(rng), n);
    check("random" + std::to_string(k), f, atoms, n <= 2 ? 6 : 4);
  }
  r.seconds = seconds_since(start);
  r.passed = mismatches == 0 && r.seconds < 300.0;
  r.detail = std::to_string(formulas) + " formulas, " + std::to_string(traces) + " traces, " +
             std::to_string(mismatches) + " mismatches" +
             (first_failure.empty() ? "" : "; first: " + first_failure);
  return r;
}

CriterionResult check_reference_automaton() {
  const auto start = Clock::now();
  CriterionResult r{2, "Reference automaton, ranks and task sizes", true, "", 0.0};
  std::ostringstream detail;
  const ltlf::AtomSet rg{"r", "g"};
  auto d = dfa::compile(ltlf::expand_derived(ltlf::parse(kRedGreen, rg)), rg);
  const bool shape = d.num_states() == 4 && d.accepting_states().size() == 1 &&
                     d.error_states().size() == 1;
  detail << "|Q|=" << d.num_states() << " |F|=" << d.accepting_states().size()
         << " |E|=" << d.error_states().size();
  r.passed &= shape;

  bool table_ok = shape;
  for (std::size_t q = 0; shape && q < 4; ++q)
    for (std::uint32_t m = 0; m < 4; ++m) table_ok &= d.step_mask(q, m) == kRedGreenTable[q][m];
  detail << "; transitions " << (table_ok ? "match" : "differ from") << " the hand table";
  r.passed &= table_ok;

  if (shape) {
    auto t = rank::rank_states(d, 4, 1.0);
    const std::vector<std::size_t> want_rank{0, 2, 1, 3};  // q1, q2, q3, q4
    const std::vector<double> want_p{1.0 / 4, 1.0 / 3, 1.0 / 2, 1.0};
    bool ranks_ok = t.rank == want_rank;
    double p_err = 0.0;
    for (std::size_t i = 0; i < 4; ++i) p_err = std::max(p_err, std::abs(t.priority[i] - want_p[i]));
    detail << "; ranks q1..q4 = [";
    for (std::size_t q = 0; q < 4; ++q) detail << (q ? "," : "") << t.rank[q];
    detail << "]";
    if (!ranks_ok) detail << " expected q1:0 q3:1 q2:2 q4:3 (sorted [0,1,2,3])";
    detail << "; priority error " << p_err;
    r.passed &= ranks_ok && p_err <= 1e-12;
  }

  // Expected DFA sizes of the six benchmark tasks.
  const ltlf::AtomSet rbg{"r", "b", "g"};
  const std::string S = "(!r & !b & !g)";
  auto chain = [](const std::string& s, const std::vector<std::string>& steps) {
    std::string out = s + " U (" + steps.back() + ")";
    for (auto it = steps.rbegin() + 1; it != steps.rend(); ++it)
      out = s + " U ((" + *it + ") & X (" + out + "))";
    return out;
  };
  auto eventually = [](std::size_t n) {
    std::string out = "g" + std::to_string(n);
    for (std::size_t k = n - 1; k >= 1; --k) out = "g" + std::to_string(k) + " & X F (" + out + ")";
    return "F (" + out + ")";
  };
  auto regions = [](std::size_t n) {
    std::vector<std::string> v;
    for (std::size_t k = 1; k <= n; ++k) v.push_back("g" + std::to_string(k));
    return ltlf::AtomSet(v);
  };
  const std::string R = "r & !b & !g", B = "b & !r & !g", G = "g & !r & !b";
  const std::string S2 = "(!blk & !wht & !gry)";
  const std::string t1 = chain(S, {R, B, G});
  const std::string t3 =
      "(" + t1 + ") & (" + chain(S2, {"blk & !wht & !gry", "wht & !blk & !gry", "gry & !blk & !wht"}) + ")";
  struct Row {
    std::string formula;
    ltlf::AtomSet atoms;
    std::size_t expected;
  };
  std::vector<Row> rows{{t1, rbg, 5},
                        {chain(S, {R, B, G, R, G, B}), rbg, 8},
                        {t3, ltlf::AtomSet{"r", "b", "g", "blk", "wht", "gry"}, 17},
                        {eventually(3), regions(3), 4},
                        {eventually(5), regions(5), 6},
                        {eventually(7), regions(7), 8}};
  detail << "; task sizes [";
  int exact = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto di = dfa::compile(ltlf::expand_derived(ltlf::parse(rows[i].formula, rows[i].atoms)), rows[i].atoms);
    const auto n = di.num_states();
    detail << (i ? "," : "") << n;
    const auto diff = static_cast<long>(n) - static_cast<long>(rows[i].expected);
    if (diff == 0) ++exact;
    if (std::abs(diff) > 1) r.passed = false;
  }
  detail << "] vs [5,8,17,4,6,8], " << exact << "/6 exact";
  r.detail = detail.str();
  r.seconds = seconds_since(start);
  return r;
}

CriterionResult check_eq1_exactness() {
  const auto start = Clock::now();
  CriterionResult r{3, "Category probability exactness", true, "", 0.0};
  std::mt19937_64 rng(7);
  double worst = 0.0;
  bool zeros_ok = true;
  for (int k = 0; k < 1000; ++k) {
    std::uniform_int_distribution<std::size_t> n_dist(3, 8), size_dist(0, 5000);
    std::uniform_real_distribution<double> p_dist(0.01, 10.0), a_dist(0.0, 2.0);
    const std::size_t n = n_dist(rng);
    std::vector<std::size_t> sizes(n);
    std::vector<double> p(n);
    for (std::size_t i = 0; i < n; ++i) {
      sizes[i] = size_dist(rng) * (rng() % 4 != 0);
      p[i] = p_dist(rng);
    }
    if (std::all_of(sizes.begin(), sizes.end(), [](auto s) { return s == 0; })) sizes[0] = 1;
    const double alpha = a_dist(rng);
    auto got = replay::category_probabilities(sizes, p, alpha);
    auto want = category_probabilities_reference(sizes, p, alpha);
    for (std::size_t i = 0; i < n; ++i) {
      if (want[i] == 0.0) {
        zeros_ok &= got[i] == 0.0;
      } else {
        worst = std::max(worst, std::abs(got[i] - want[i]) / want[i]);
      }
    }
  }
  r.passed &= worst <= 1e-12 && zeros_ok;

  // Uniform per-experience sampling at alpha = 0.
  replay::ClassifiedBuffer buffer({0.25, 1.0 / 3, 0.5, 1.0}, 0.0, 10, 4000);
  const std::vector<std::size_t> sizes{12, 5, 0, 8};
  std::size_t id = 0;
  for (std::size_t c = 0; c < sizes.size(); ++c)
    for (std::size_t k = 0; k < sizes[c]; ++k) {
      replay::Experience e;
      e.category = c;
      e.r = static_cast<double>(id++);
      buffer.push(e);
    }
  buffer.refresh_probs();
  replay::Rng srng(11);
  const std::size_t draws = 100'000;
  std::vector<double> freq(id, 0.0);
  for (std::size_t k = 0; k < draws / 100; ++k)
    for (const auto* e : buffer.sample(100, srng).items) freq[static_cast<std::size_t>(e->r)] += 1.0 / draws;
  double dev = 0.0;
  for (double f : freq) dev = std::max(dev, std::abs(f - 1.0 / static_cast<double>(id)));
  r.passed &= dev <= 0.01;
  r.detail = "max relative error " + fmt(worst, 3) + " over 1000 triples" +
             (zeros_ok ? "" : ", empty categories got mass") +
             "; alpha=0 max per-experience deviation " + fmt(dev, 3) + " at 1e5 draws";
  r.seconds = seconds_since(start);
  return r;
}

CriterionResult check_shaping_telescoping(const fs::path& dir) {
  const auto start = Clock::now();
  CriterionResult r{4, "Shaping telescoping", true, "", 0.0};
  std::ostringstream detail;
  for (const char* name : {"gridworld_red_green", "waterworld_red_green", "cartpole_task4"}) {
    auto t = task(dir, name);
    t.gamma = 1.0;
    auto compiled = experiment::compile_task(t);
    auto env = experiment::make_product_env(t, compiled, {learn::Strategy::RS, 0, std::nullopt, false});
    auto res = check_telescoping(*env, 1000, 3);
    r.passed &= res.max_error <= 1e-9 && res.rollouts == 1000;
    detail << (detail.tellp() ? "; " : "") << name << " max error " << fmt(res.max_error, 3);
  }
  r.detail = detail.str() + " (1000 rollouts each)";
  r.seconds = seconds_since(start);
  return r;
}

CriterionResult check_gradients(const fs::path& dir) {
  const auto start = Clock::now();
  CriterionResult r{5, "Gradient correctness", true, "", 0.0};
  struct Shape {
    std::vector<std::size_t> sizes;
    learn::OutputActivation out;
    bool operator<(const Shape& o) const { return std::tie(sizes, out) < std::tie(o.sizes, o.out); }
  };
  // Every network shape the shipped tasks instantiate.
  std::set<Shape> shapes;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() != ".json") continue;
    auto t = experiment::load_task(entry.path());
    auto compiled = experiment::compile_task(t);
    auto env = experiment::make_product_env(t, compiled, {learn::Strategy::Base, 0, std::nullopt, false});
    const auto kind = experiment::resolve_learner(t, *env);
    const auto obs = env->observation_size();
    auto with = [](std::size_t in, const std::vector<std::size_t>& hidden, std::size_t out) {
      std::vector<std::size_t> v{in};
      v.insert(v.end(), hidden.begin(), hidden.end());
      v.push_back(out);
      return v;
    };
    if (kind == experiment::LearnerKind::Dqn) {
      shapes.insert({with(obs, t.learner.dqn.hidden, env->action_space().count), learn::OutputActivation::Identity});
    } else if (kind == experiment::LearnerKind::Td3) {
      const auto dim = env->action_space().dimension;
      shapes.insert({with(obs, t.learner.td3.hidden, dim), learn::OutputActivation::Tanh});
      shapes.insert({with(obs + dim, t.learner.td3.hidden, 1), learn::OutputActivation::Identity});
    }
  }
  r.passed &= !shapes.empty();

  constexpr double kEps = 1e-5;
  std::ostringstream detail;
  std::mt19937_64 rng(5);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::size_t redrawn = 0;
  for (const auto& s : shapes) {
    double worst = 0.0;
    for (int point = 0; point < 100;) {
      learn::Mlp net(s.sizes, s.out, rng);
      learn::Vector x(static_cast<Eigen::Index>(s.sizes.front()));
      learn::Matrix u(static_cast<Eigen::Index>(s.sizes.back()), 1);
      for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = normal(rng);
      for (Eigen::Index i = 0; i < u.size(); ++i) u(i, 0) = normal(rng);
      learn::Mlp::Cache cache;
      net.forward(learn::Matrix(x), &cache);
      // Central differences are meaningless across a rectifier kink: redraw
      // points with a hidden pre-activation within reach of the step.
      bool near_kink = false;
      for (std::size_t l = 0; l + 1 < cache.z.size(); ++l)
        near_kink |= (cache.z[l].array().abs() < 1e-3).any();
      if (near_kink) {
        ++redrawn;
        continue;
      }
      ++point;
      auto g = net.backward(cache, u);
      auto loss = [&](const learn::Mlp& n) { return u.col(0).dot(n.forward(x)); };
      worst = std::max(worst, relative_error(learn::Mlp::flatten(g), numeric_gradient(net, loss, kEps)));
      std::vector<double> gin(g.input.data(), g.input.data() + g.input.size());
      std::vector<double> nin(static_cast<std::size_t>(x.size()));
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        learn::Vector xp = x, xm = x;
        xp[i] += kEps;
        xm[i] -= kEps;
        nin[static_cast<std::size_t>(i)] =
            (u.col(0).dot(net.forward(xp)) - u.col(0).dot(net.forward(xm))) / (2 * kEps);
      }
      worst = std::max(worst, relative_error(gin, nin));
    }
    r.passed &= worst <= 1e-4;
    detail << (detail.tellp() ? "; " : "");
    for (std::size_t i = 0; i < s.sizes.size(); ++i) detail << (i ? "-" : "") << s.sizes[i];
    if (s.out == learn::OutputActivation::Tanh) detail << " tanh";
    detail << " worst " << fmt(worst, 3);
  }
  r.detail = detail.str() + " (100 points each, " + std::to_string(redrawn) + " near-kink draws replaced)";
  r.seconds = seconds_since(start);
  return r;
}

CriterionResult check_tabular_convergence(const fs::path& dir) {
  const auto start = Clock::now();
  CriterionResult r{6, "Tabular oracle convergence", true, "", 0.0};
  auto t = task(dir, "gridworld_red_green");
  auto compiled = experiment::compile_task(t);
  auto run = experiment::run_one(t, compiled, {learn::Strategy::EC, 0, std::nullopt, false});

  auto base = experiment::make_environment(t, 0);
  const auto& grid = dynamic_cast<const env::Gridworld&>(*base);
  const std::size_t horizon = grid.config().horizon;
  auto mdp = env::build_product_mdp(grid, *compiled.dfa, t.reward, t.gamma);
  const double learned = env::success_probability(mdp, run.greedy_policy, horizon);
  const double optimum = env::optimal_success_probability(mdp, horizon);
  r.passed &= std::abs(learned - optimum) <= 0.02;

  // Argmax invariance under shaping with gamma = 1.
  auto raw = env::build_product_mdp(grid, *compiled.dfa, t.reward, 1.0);
  auto shaped = env::build_product_mdp(grid, *compiled.dfa, t.reward, 1.0, compiled.ranks->potential);
  auto v_raw = env::value_iteration(raw, 1.0);
  auto v_shaped = env::value_iteration(shaped, 1.0);
  std::size_t differing = 0, compared = 0;
  for (std::size_t x = 0; x < raw.num_states(); ++x) {
    if (raw.terminal[x]) continue;
    ++compared;
    differing += v_raw.policy[x] != v_shaped.policy[x];
  }
  r.passed &= differing == 0;
  r.detail = "greedy success " + fmt(learned) + " vs optimum " + fmt(optimum) + " after " +
             std::to_string(run.log.episodes.size()) + " EC episodes; shaped vs raw greedy policies differ in " +
             std::to_string(differing) + "/" + std::to_string(compared) + " states";
  r.seconds = seconds_since(start);
  return r;
}

CriterionResult check_directional_benefit(const fs::path& dir) {
  const auto start = Clock::now();
  CriterionResult r{7, "Directional EC benefit", true, "", 0.0};
  std::ostringstream detail;
  for (const char* name : {"gridworld_task1", "waterworld_task1_small"}) {
    auto t = task(dir, name);
    auto compiled = experiment::compile_task(t);
    std::vector<experiment::RunSpec> specs;
    for (auto s : {learn::Strategy::Base, learn::Strategy::EC})
      for (std::uint64_t seed = 0; seed < 10; ++seed) specs.push_back({s, seed, std::nullopt, false});
    auto runs = experiment::run_matrix(t, compiled, specs, 1);
    auto summary = experiment::summarize(runs);
    const auto& base = summary[0];
    const auto& ec = summary[1];
    const bool first_ok = ec.median_first_success && at_most(ec.median_first_success, base.median_first_success);
    const bool auc_ok = ec.median_auc >= base.median_auc;
    const bool threshold_ok =
        ec.median_threshold_step && at_most(ec.median_threshold_step, base.median_threshold_step);
    r.passed &= first_ok && auc_ok && threshold_ok;
    detail << (detail.tellp() ? "; " : "") << name << ": first success EC " << fmt(ec.median_first_success)
           << " vs BASE " << fmt(base.median_first_success) << (first_ok ? "" : " (FAIL)") << ", AUC EC "
           << fmt(ec.median_auc) << " vs BASE " << fmt(base.median_auc) << (auc_ok ? "" : " (FAIL)")
           << ", 80% step EC " << fmt(ec.median_threshold_step) << " vs BASE "
           << fmt(base.median_threshold_step) << (threshold_ok ? "" : " (FAIL)");
  }
  r.seconds = seconds_since(start);
  r.passed &= r.seconds < 1800.0;
  r.detail = detail.str();
  return r;
}

CriterionResult check_encoding_comparison(const fs::path& dir) {
  const auto start = Clock::now();
  CriterionResult r{8, "Encoding comparison", true, "", 0.0};
  auto t = task(dir, "gridworld_red_green");
  auto compiled = experiment::compile_task(t);
  auto make = [&](product::Encoding e) {
    auto copy = t;
    copy.encoding = e;
    return experiment::make_product_env(copy, compiled, {learn::Strategy::RS, 7, std::nullopt, false});
  };
  auto enumerated = make(product::Encoding::Enumerated);
  auto onehot = make(product::Encoding::OneHot);
  const std::size_t nq = compiled.dfa->num_states(), ns = 49;
  auto ce = enumerated->product_state_count(product::Encoding::Enumerated);
  auto co = onehot->product_state_count(product::Encoding::OneHot);
  const bool counts_ok = ce.naive == nq * ns && co.naive == (std::size_t{1} << nq) * ns;
  r.passed &= counts_ok;

  // Same seed and actions: identical automaton, reward and termination traces.
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> pick(0, 3);
  std::vector<env::Action> actions;
  std::size_t mismatched = 0, steps = 0;
  for (int episode = 0; episode < 300; ++episode) {
    enumerated->reset();
    onehot->reset();
    mismatched += enumerated->automaton_state() != onehot->automaton_state();
    while (!enumerated->done() && !onehot->done()) {
      env::Action a{static_cast<double>(pick(rng))};
      actions.push_back(a);
      auto x = enumerated->step(a);
      auto y = onehot->step(a);
      ++steps;
      mismatched += x.q != y.q || x.q_next != y.q_next || x.raw_reward != y.raw_reward ||
                    x.shaped_reward != y.shaped_reward || x.terminated != y.terminated ||
                    x.truncated != y.truncated;
    }
    mismatched += enumerated->done() != onehot->done();
  }
  r.passed &= mismatched == 0;

  // Wall-clock per product step over the recorded actions; best of several
  // interleaved repetitions.
  auto time_env = [&](product::ProductEnv& env) {
    const auto t0 = Clock::now();
    std::size_t i = 0;
    double sink = 0.0;
    for (int rep = 0; rep < 20; ++rep) {
      sink += env.reset().back();
      for (const auto& a : actions) {
        if (env.done()) sink += env.reset().back();
        sink += env.step(a).observation.back();
        ++i;
      }
    }
    volatile double keep = sink;
    (void)keep;
    return seconds_since(t0) / static_cast<double>(i);
  };
  double best_e = 1e9, best_o = 1e9;
  for (int rep = 0; rep < 7; ++rep) {
    best_e = std::min(best_e, time_env(*enumerated));
    best_o = std::min(best_o, time_env(*onehot));
  }
  r.passed &= best_e <= best_o;
  r.detail = "naive states " + std::to_string(ce.naive) + " vs " + std::to_string(co.naive) +
             " (|Q|=" + std::to_string(nq) + ", |S|=" + std::to_string(ns) + ", reachable " +
             std::to_string(ce.reachable) + "); " + std::to_string(mismatched) + " trace mismatches over " +
             std::to_string(steps) + " steps; per-step " + fmt(best_e * 1e9, 4) + " ns vs " +
             fmt(best_o * 1e9, 4) + " ns";
  r.seconds = seconds_since(start);
  return r;
}

CriterionResult check_alpha_sweep(const fs::path& dir) {
  const auto start = Clock::now();
  CriterionResult r{9, "Alpha sweep sanity", true, "", 0.0};
  auto t = task(dir, "gridworld_task1");
  auto compiled = experiment::compile_task(t);
  const std::vector<double> alphas{0.0, 0.25, 0.5, 0.75};
  std::vector<experiment::RunSpec> specs;
  for (double a : alphas)
    for (std::uint64_t seed = 0; seed < 10; ++seed) specs.push_back({learn::Strategy::EC, seed, a, false});
  auto summary = experiment::summarize(experiment::run_matrix(t, compiled, specs, 1));
  std::ostringstream detail;
  detail << "median AUC";
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    detail << (i ? ", " : " ") << "alpha=" << alphas[i] << ": " << fmt(summary[i].median_auc);
    if (i > 0 && summary[i].median_auc < summary[0].median_auc) {
      r.passed = false;
      detail << " (below alpha=0)";
    }
  }
  r.detail = detail.str();
  r.seconds = seconds_since(start);
  return r;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options, std::ostream& os) {
  const auto& dir = options.tasks_dir;
  const std::vector<std::pair<int, std::function<CriterionResult()>>> all{
      {1, check_language_equivalence},
      {2, check_reference_automaton},
      {3, check_eq1_exactness},
      {4, [&] { return check_shaping_telescoping(dir); }},
      {5, [&] { return check_gradients(dir); }},
      {6, [&] { return check_tabular_convergence(dir); }},
      {7, [&] { return check_directional_benefit(dir); }},
      {8, [&] { return check_encoding_comparison(dir); }},
      {9, [&] { return check_alpha_sweep(dir); }},
  };
  std::vector<CriterionResult> results;
  for (const auto& [id, fn] : all) {
    if (!options.only.empty() && std::find(options.only.begin(), options.only.end(), id) == options.only.end())
      continue;
    CriterionResult res;
    try {
      res = fn();
    } catch (const std::exception& e) {
      res = {id, "criterion " + std::to_string(id), false, std::string("exception: ") + e.what(), 0.0};
    }
    os << format_line(res) << std::endl;
    results.push_back(res);
  }
  return results;
}

bool all_passed(const std::vector<CriterionResult>& results) {
  return std::all_of(results.begin(), results.end(), [](const auto& r) { return r.passed; });
}

}  // namespace ecrl::verify
