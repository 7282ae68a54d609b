#include "ecrl/rank/asp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace ecrl::rank {

namespace {

class PathEnumerator {
 public:
  PathEnumerator(const Dfa& d, const PathOptions& options)
      : d_(d), options_(options), on_path_(d.num_states(), false) {
    for (StateId q = 0; q < d.num_states(); ++q) succ_.push_back(d.successors(q));
  }

  std::vector<std::size_t> run(StateId start) {
    lengths_.clear();
    visit(start, 0);
    return lengths_;
  }

 private:
  void visit(StateId q, std::size_t depth) {
    if (d_.is_accepting(q)) {
      if (lengths_.size() >= options_.max_paths)
        throw EnumerationOverflow("more than " +
                                  std::to_string(options_.max_paths) +
                                  " simple paths");
      lengths_.push_back(depth);
      return;
    }
    on_path_[q] = true;
    for (auto t : succ_[q])
      if (!on_path_[t] && !d_.is_error(t)) visit(t, depth + 1);
    on_path_[q] = false;
  }

  const Dfa& d_;
  const PathOptions& options_;
  std::vector<std::vector<StateId>> succ_;
  std::vector<bool> on_path_;
  std::vector<std::size_t> lengths_;
};

}  // namespace

std::vector<std::size_t> simple_path_lengths(const Dfa& d, StateId q,
                                             const PathOptions& options) {
  if (q >= d.num_states()) throw NoPathToAccepting("state out of range");
  if (d.is_accepting(q))
    throw NoPathToAccepting(Dfa::state_name(q) + " is accepting");
  if (d.is_error(q))
    throw NoPathToAccepting(Dfa::state_name(q) + " is an error state");
  return PathEnumerator(d, options).run(q);
}

double expected_length(const Dfa& d, StateId q, const PathOptions& options) {
  auto lengths = simple_path_lengths(d, q, options);
  double sum = std::accumulate(lengths.begin(), lengths.end(), 0.0);
  return sum / static_cast<double>(lengths.size());
}

RankTable rank_states(const Dfa& d, std::size_t N, double C,
                      const PathOptions& options) {
  const std::size_t n = d.num_states();
  if (N < 3 || N > n)
    throw InvalidN("category count " + std::to_string(N) +
                   " outside [3, " + std::to_string(n) + "]");
  if (!(C > 0.0) || !std::isfinite(C))
    throw InvalidN("priority constant must be positive");

  RankTable t;
  t.N = N;
  t.C = C;
  t.rank.assign(n, 0);
  t.path_length.assign(n, std::nullopt);
  t.potential.assign(n, 0.0);
  for (std::size_t i = 0; i < N; ++i)
    t.priority.push_back(C / static_cast<double>(N - i));

  double lmin = std::numeric_limits<double>::infinity();
  double lmax = -lmin;
  PathEnumerator paths(d, options);
  for (StateId q = 0; q < n; ++q) {
    if (d.is_accepting(q) || d.is_error(q)) continue;
    auto lengths = paths.run(q);
    double mean = std::accumulate(lengths.begin(), lengths.end(), 0.0) /
                  static_cast<double>(lengths.size());
    t.path_length[q] = mean;
    lmin = std::min(lmin, mean);
    lmax = std::max(lmax, mean);
  }

  const double top = static_cast<double>(N - 3);
  for (StateId q = 0; q < n; ++q) {
    if (d.is_accepting(q)) {
      t.rank[q] = N - 1;
    } else if (d.is_error(q)) {
      t.rank[q] = N - 2;
    } else if (lmax == lmin) {
      // One length class: every intermediate state is as close as it gets.
      t.rank[q] = N - 3;
    } else {
      double r = std::floor(top - (*t.path_length[q] - lmin) * top / (lmax - lmin) + 0.5);
      t.rank[q] = static_cast<std::size_t>(std::clamp(r, 0.0, top));
    }
    t.potential[q] = d.is_error(q) ? C / static_cast<double>(N) : t.priority[t.rank[q]];
  }
  return t;
}

std::optional<std::size_t> default_category_count(const Dfa& d) {
  if (d.num_states() < 3) return std::nullopt;
  return std::min<std::size_t>(4, d.num_states());
}

nlohmann::json to_json(const RankTable& table) {
  nlohmann::json j;
  j["N"] = table.N;
  j["C"] = table.C;
  nlohmann::json rank = nlohmann::json::object();
  nlohmann::json potential = nlohmann::json::object();
  nlohmann::json lengths = nlohmann::json::object();
  for (StateId q = 0; q < table.num_states(); ++q) {
    auto name = Dfa::state_name(q);
    rank[name] = table.rank[q];
    potential[name] = table.potential[q];
    if (table.path_length[q]) lengths[name] = *table.path_length[q];
  }
  j["rank"] = rank;
  j["priority"] = table.priority;
  j["potential"] = potential;
  j["pathLength"] = lengths;
  return j;
}

}  // namespace ecrl::rank
