#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ecrl/dfa/dfa.hpp"

namespace ecrl::dfa {

// Graphviz digraph. Accepting states are double circles, error states dashed.
std::string export_dot(const Dfa& d);

// RDDL-style encoding of the automaton as one enumerated state fluent `fQ`:
// pvariables, a cpfs conditional chain with one branch per edge, the reward
// line and a termination block listing accepting and error states.
std::string export_rddl(const Dfa& d, double reward);

// Reads back the cpfs chain written by export_rddl.
std::vector<Edge> parse_rddl_cpfs(std::string_view text, const AtomSet& atoms);

// {atoms, states, initial, accepting, errors, edges:[{from, guard, to}]} with
// zero-based state indices and guards in the ASCII formula syntax.
nlohmann::json to_json(const Dfa& d);
Dfa dfa_from_json(const nlohmann::json& j);

}  // namespace ecrl::dfa
