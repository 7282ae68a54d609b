#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ecrl/ltlf/formula.hpp"

namespace ecrl::dfa {

// Smallest-effort sum-of-products guard for a set of valuation masks over
// `num_atoms` atoms. Uses Quine-McCluskey prime implicants with a greedy cover
// when the guard depends on few atoms, Shannon expansion otherwise.
ltlf::Formula synthesize_guard(const std::vector<std::uint32_t>& masks,
                               std::size_t num_atoms);

// ASCII boolean syntax accepted by ltlf::parse: "!r & !g", "g | (r & !b)".
std::string guard_to_string(const ltlf::Formula& guard,
                            const ltlf::AtomSet& atoms);

// RDDL boolean syntax: "(~r ^ ~g)", "r", "true".
std::string guard_to_rddl(const ltlf::Formula& guard,
                          const ltlf::AtomSet& atoms);

}  // namespace ecrl::dfa
