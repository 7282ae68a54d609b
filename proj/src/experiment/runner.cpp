#include "ecrl/experiment/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "ecrl/dfa/export.hpp"

namespace ecrl::experiment {

namespace {

std::string format_alpha(double a) {
  std::ostringstream os;
  os << a;
  return os.str();
}

std::string run_label(const RunSpec& spec) {
  std::string s = learn::to_string(spec.strategy);
  if (spec.alpha) s += "_a" + format_alpha(*spec.alpha);
  return s;
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error("cannot write " + p.string());
  out << text;
}

}  // namespace

std::unique_ptr<product::ProductEnv> make_product_env(const TaskFile& task,
                                                      const CompiledTask& compiled,
                                                      const RunSpec& spec) {
  product::ProductOptions options;
  options.encoding = task.encoding;
  options.shaping = learn::uses_shaping(spec.strategy) && compiled.ranks.has_value();
  options.delayed_automaton_step = spec.delayed_automaton_step;
  options.horizon = task.horizon;
  product::TaskSpec ts{compiled.dfa, task.reward, task.gamma};
  return std::make_unique<product::ProductEnv>(make_environment(task, spec.seed), ts,
                                               compiled.ranks, options);
}

LearnerKind resolve_learner(const TaskFile& task, const product::ProductEnv& env) {
  if (task.learner.kind != LearnerKind::Auto) return task.learner.kind;
  if (env.tabular_state_count()) return LearnerKind::Tabular;
  return env.action_space().is_discrete() ? LearnerKind::Dqn : LearnerKind::Td3;
}

RunResult run_one(const TaskFile& task, const CompiledTask& compiled, const RunSpec& spec) {
  const auto start = std::chrono::steady_clock::now();
  RunResult result;
  result.spec = spec;
  result.label = run_label(spec);

  auto env = make_product_env(task, compiled, spec);
  learn::TrainConfig config = task.train;
  config.strategy = spec.strategy;
  config.seed = spec.seed;
  if (spec.alpha) config.alpha = *spec.alpha;
  // Without ranks (|Q| < 3) EC and RS degrade to a single uniform buffer.
  if (!compiled.ranks && config.strategy != learn::Strategy::PER) config.strategy = learn::Strategy::Base;

  learn::Rng init_rng(spec.seed ^ 0x9e3779b97f4a7c15ULL);
  std::unique_ptr<learn::Learner> learner;
  const auto kind = resolve_learner(task, *env);
  learn::TabularAgent* tabular = nullptr;
  switch (kind) {
    case LearnerKind::Tabular: {
      auto n = env->tabular_state_count();
      if (!n) throw ConfigError("tabular learner needs a finite environment");
      auto agent = std::make_unique<learn::TabularAgent>(*n, env->action_space().count,
                                                         task.learner.tabular);
      tabular = agent.get();
      learner = std::move(agent);
      break;
    }
    case LearnerKind::Dqn:
      if (!env->action_space().is_discrete()) throw ConfigError("DQN needs discrete actions");
      learner = std::make_unique<learn::DqnAgent>(env->observation_size(), env->action_space().count,
                                                  task.learner.dqn, init_rng);
      break;
    case LearnerKind::Td3:
      learner = std::make_unique<learn::Td3Agent>(env->observation_size(), env->action_space(),
                                                  task.learner.td3, init_rng);
      break;
    case LearnerKind::Auto:
      break;
  }

  auto buffer = learn::make_buffer(config, compiled.ranks);
  result.log = learn::train(*env, *learner, *buffer, config);
  result.policy = learner->to_json();
  if (tabular) result.greedy_policy = tabular->greedy_policy();
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

std::vector<RunResult> run_matrix(const TaskFile& task, const CompiledTask& compiled,
                                  const std::vector<RunSpec>& specs, std::size_t jobs) {
  std::vector<RunResult> results(specs.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < specs.size(); i = next++) {
      try {
        results[i] = run_one(task, compiled, specs[i]);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  jobs = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(1, specs.size()));
  std::vector<std::thread> pool;
  for (std::size_t k = 1; k < jobs; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return results;
}

CompileReport cmd_compile(const TaskFile& task, const std::filesystem::path& out_root) {
  auto compiled = compile_task(task);
  const auto& d = *compiled.dfa;
  CompileReport report;
  report.directory = out_root / task.name;
  std::filesystem::create_directories(report.directory);
  write_file(report.directory / "dfa.json", dfa::to_json(d).dump(2) + "\n");
  write_file(report.directory / "dfa.dot", dfa::export_dot(d));
  write_file(report.directory / "dfa.rddl", dfa::export_rddl(d, task.reward));
  nlohmann::json ranks = compiled.ranks ? rank::to_json(*compiled.ranks) : nlohmann::json();
  write_file(report.directory / "ranks.json", ranks.dump(2) + "\n");

  std::ostringstream os;
  os << task.name << ": |Q|=" << d.num_states() << " |F|=" << d.accepting_states().size()
     << " |E|=" << d.error_states().size() << "\n";
  if (compiled.ranks) {
    os << "ranks (N=" << compiled.ranks->N << "):";
    for (std::size_t q = 0; q < d.num_states(); ++q)
      os << ' ' << dfa::Dfa::state_name(q) << '=' << compiled.ranks->rank[q];
    os << "\n";
  } else {
    os << "too few states to rank; training uses one uniform buffer\n";
  }
  report.summary = os.str();
  return report;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::optional<double> median_with_missing(std::vector<std::optional<double>> v) {
  if (v.empty()) return std::nullopt;
  std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
    if (!a) return false;
    if (!b) return true;
    return *a < *b;
  });
  const std::size_t n = v.size();
  if (n % 2) return v[n / 2];
  if (!v[n / 2 - 1] || !v[n / 2]) return std::nullopt;
  return 0.5 * (*v[n / 2 - 1] + *v[n / 2]);
}

std::vector<StrategySummary> summarize(const std::vector<RunResult>& runs) {
  std::vector<std::string> order;
  std::map<std::string, std::vector<const RunResult*>> groups;
  for (const auto& r : runs) {
    if (!groups.count(r.label)) order.push_back(r.label);
    groups[r.label].push_back(&r);
  }
  std::vector<StrategySummary> out;
  for (const auto& label : order) {
    const auto& g = groups[label];
    StrategySummary s;
    s.label = label;
    s.runs = g.size();
    std::vector<double> auc;
    std::vector<std::optional<double>> first, threshold;
    for (const auto* r : g) {
      s.mean_reward_per_step += learn::reward_per_step(r->log) / static_cast<double>(g.size());
      s.mean_wall_seconds += r->wall_seconds / static_cast<double>(g.size());
      auc.push_back(learn::area_under_curve(r->log));
      auto f = learn::steps_to_first_success(r->log);
      first.push_back(f ? std::optional<double>(static_cast<double>(*f)) : std::nullopt);
      if (f) s.success_fraction += 1.0 / static_cast<double>(g.size());
      auto t = learn::steps_to_success_rate(r->log, 0.8);
      threshold.push_back(t ? std::optional<double>(static_cast<double>(*t)) : std::nullopt);
    }
    s.median_auc = median(auc);
    s.median_first_success = median_with_missing(first);
    s.median_threshold_step = median_with_missing(threshold);
    out.push_back(s);
  }
  return out;
}

void write_summary_csv(std::ostream& os, const std::vector<StrategySummary>& rows) {
  auto opt = [](const std::optional<double>& v) { return v ? std::to_string(*v) : std::string("inf"); };
  const StrategySummary* base = nullptr;
  for (const auto& r : rows)
    if (r.label == "BASE") base = &r;
  os << "strategy,runs,meanRewardPerStep,improvementVsBasePercent,medianAuc,"
        "medianStepsToFirstSuccess,medianStepsTo80PercentSuccess,fractionRunsWithSuccess,meanWallSeconds\n";
  for (const auto& r : rows) {
    std::string improvement = "";
    if (base && base->mean_reward_per_step != 0.0)
      improvement = std::to_string(100.0 * (r.mean_reward_per_step - base->mean_reward_per_step) /
                                   std::abs(base->mean_reward_per_step));
    os << r.label << ',' << r.runs << ',' << r.mean_reward_per_step << ',' << improvement << ','
       << r.median_auc << ',' << opt(r.median_first_success) << ','
       << opt(r.median_threshold_step) << ',' << r.success_fraction << ',' << r.mean_wall_seconds
       << '\n';
  }
}

void write_curves_csv(std::ostream& os, const std::vector<RunResult>& runs, std::size_t points) {
  std::size_t max_steps = 0;
  for (const auto& r : runs) max_steps = std::max(max_steps, r.log.total_steps);
  os << "strategy,step,meanEpisodeReturn,meanRewardPerStep\n";
  if (max_steps == 0 || points == 0) return;
  std::vector<std::string> order;
  std::map<std::string, std::vector<const RunResult*>> groups;
  for (const auto& r : runs) {
    if (!groups.count(r.label)) order.push_back(r.label);
    groups[r.label].push_back(&r);
  }
  for (const auto& label : order) {
    for (std::size_t p = 1; p <= points; ++p) {
      const std::size_t at = max_steps * p / points;
      double ret = 0.0, per_step = 0.0;
      for (const auto* r : groups[label]) {
        // Return of the last episode finished by `at`; cumulative reward / at.
        double last = 0.0, total = 0.0;
        for (const auto& e : r->log.episodes) {
          if (e.steps > at) break;
          last = e.raw_return;
          total += e.raw_return;
        }
        ret += last;
        per_step += total / static_cast<double>(at);
      }
      const auto n = static_cast<double>(groups[label].size());
      os << label << ',' << at << ',' << ret / n << ',' << per_step / n << '\n';
    }
  }
}

std::vector<RunResult> cmd_train(const TaskFile& task, const std::filesystem::path& out_root,
                                 const TrainOptions& options) {
  auto compiled = compile_task(task);
  std::vector<RunSpec> specs;
  const auto strategies = options.strategies.value_or(task.strategies);
  const auto seeds = options.seeds.value_or(task.seeds);
  if (options.alphas) {
    for (double a : *options.alphas)
      for (auto seed : seeds) specs.push_back({learn::Strategy::EC, seed, a, options.delayed_automaton_step});
  } else {
    for (auto s : strategies)
      for (auto seed : seeds) specs.push_back({s, seed, std::nullopt, options.delayed_automaton_step});
  }
  auto runs = run_matrix(task, compiled, specs, options.jobs);

  const auto dir = out_root / task.name;
  std::filesystem::create_directories(dir / "runs");
  for (const auto& r : runs) {
    const auto stem = r.label + "_seed" + std::to_string(r.spec.seed);
    std::ofstream csv(dir / "runs" / (stem + ".csv"));
    r.log.write_csv(csv);
    std::ofstream policy(dir / "runs" / (stem + "_policy.json"));
    policy << r.policy.dump() << '\n';
  }
  std::ofstream summary(dir / "summary.csv");
  write_summary_csv(summary, summarize(runs));
  std::ofstream curves(dir / "curves.csv");
  write_curves_csv(curves, runs);
  return runs;
}

}  // namespace ecrl::experiment
