#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "ecrl/ltlf/formula.hpp"

namespace ecrl::dfa {

using ltlf::AtomSet;
using ltlf::Formula;
using ltlf::Trace;
using ltlf::TraceState;

using StateId = std::size_t;

class InvalidDfa : public Error {
 public:
  using Error::Error;
};

// A guard is a propositional formula over the DFA's atoms; it denotes the
// set of valuations that satisfy it.
struct Edge {
  StateId from;
  Formula guard;
  StateId to;
};

// Complete deterministic automaton over the alphabet 2^atoms.
//
// Transitions are stored as a dense table indexed by valuation bitmask, and
// mirrored as one guard-labelled edge per (from, to) pair. States are
// displayed as q1..q|Q| (index + 1).
class Dfa {
 public:
  static constexpr std::size_t kMaxAtoms = 16;

  // table[q][mask] is the successor of q on the valuation with bits `mask`.
  Dfa(AtomSet atoms, std::vector<std::vector<StateId>> table, StateId initial,
      std::vector<bool> accepting);

  // Builds the table by evaluating guards; throws InvalidDfa unless exactly
  // one edge is enabled for every state and valuation.
  static Dfa from_edges(AtomSet atoms, std::size_t num_states,
                        const std::vector<Edge>& edges, StateId initial,
                        std::vector<bool> accepting);

  const AtomSet& atoms() const { return atoms_; }
  std::size_t num_states() const { return table_.size(); }
  std::size_t num_valuations() const { return std::size_t{1} << atoms_.size(); }
  StateId initial() const { return initial_; }

  bool is_accepting(StateId q) const { return accepting_.at(q); }
  bool is_error(StateId q) const { return error_.at(q); }
  std::vector<StateId> accepting_states() const;
  std::vector<StateId> error_states() const;

  StateId step(StateId q, TraceState s) const;
  StateId step_mask(StateId q, std::uint32_t mask) const {
    return table_[q][mask];
  }
  bool accepts(const Trace& trace) const;
  // Runs from q0 over the trace and returns the final state.
  StateId run(const Trace& trace) const;

  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<std::vector<StateId>>& table() const { return table_; }
  // Distinct successors of q (self-loops included).
  std::vector<StateId> successors(StateId q) const;

  static std::string state_name(StateId q) { return "q" + std::to_string(q + 1); }

 private:
  AtomSet atoms_;
  std::vector<std::vector<StateId>> table_;
  StateId initial_;
  std::vector<bool> accepting_;
  std::vector<bool> error_;
  std::vector<Edge> edges_;
};

// Bitmask of the valuation satisfying exactly the true atoms of `s` that are
// in range for `atoms`.
std::uint32_t valuation_mask(const AtomSet& atoms, TraceState s);

// Truth of a propositional guard under a valuation.
bool guard_holds(const Formula& guard, std::uint32_t mask);

// States that cannot reach any accepting state (complement of the backward
// closure of F).
std::vector<StateId> find_error_states(const Dfa& d);

// Partition-refinement minimization; drops unreachable states and renumbers
// breadth-first from the initial state (valuations visited in truth-table
// order, first declared atom most significant).
Dfa minimize(const Dfa& d);

}  // namespace ecrl::dfa
