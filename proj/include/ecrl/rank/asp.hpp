#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <json.hpp>

#include "ecrl/dfa/dfa.hpp"

namespace ecrl::rank {

using dfa::Dfa;
using dfa::StateId;

class NoPathToAccepting : public Error {
 public:
  using Error::Error;
};

class EnumerationOverflow : public Error {
 public:
  using Error::Error;
};

class InvalidN : public Error {
 public:
  using Error::Error;
};

// Per-state ranks, category priorities and shaping potentials.
//
//   rank(q) = N-1 for accepting q, N-2 for error q, in [0, N-3] otherwise
//   priority[i] = C / (N - i)
//   potential(q) = priority[rank(q)] for non-error q, C / N for error q
struct RankTable {
  std::size_t N = 0;
  double C = 1.0;
  std::vector<std::size_t> rank;
  std::vector<double> priority;
  std::vector<double> potential;
  // Mean simple-path length to F; empty for accepting and error states.
  std::vector<std::optional<double>> path_length;

  std::size_t num_states() const { return rank.size(); }
};

struct PathOptions {
  std::size_t max_paths = 1'000'000;
};

// Lengths of all simple paths from q that end at the first accepting state
// they enter. A pair of states is connected when any valuation moves one to
// the other.
std::vector<std::size_t> simple_path_lengths(const Dfa& d, StateId q,
                                             const PathOptions& options = {});

double expected_length(const Dfa& d, StateId q, const PathOptions& options = {});

RankTable rank_states(const Dfa& d, std::size_t N, double C = 1.0,
                      const PathOptions& options = {});

// min(4, |Q|), or nullopt when the automaton is too small to classify.
std::optional<std::size_t> default_category_count(const Dfa& d);

nlohmann::json to_json(const RankTable& table);

}  // namespace ecrl::rank
