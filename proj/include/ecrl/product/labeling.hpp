#pragma once

#include <cstddef>
#include <vector>

#include "ecrl/dfa/dfa.hpp"

namespace ecrl::product {

// Translates valuations over an environment's propositions into valuations
// over a DFA's atoms, matching by name. Every DFA atom must be labelled by the
// environment; environment propositions the formula does not mention are
// dropped.
class LabelMap {
 public:
  LabelMap() = default;
  // Throws ltlf::UnknownProposition naming the first unmatched DFA atom.
  LabelMap(const ltlf::AtomSet& env_props, const ltlf::AtomSet& dfa_atoms);

  ltlf::TraceState operator()(ltlf::TraceState env_state) const;

 private:
  std::vector<std::size_t> source_;  // source_[dfa atom] = env bit
};

}  // namespace ecrl::product
