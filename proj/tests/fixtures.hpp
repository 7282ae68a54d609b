#pragma once

#include <memory>

#include "ecrl/dfa/compile.hpp"
#include "ecrl/ltlf/parser.hpp"

namespace ecrl::testing {

inline const char* const kRedGreen = "(!r & !g) U ((r & !g) & X ((!r & !g) U (g & !r)))";
inline const char* const kRedGreenLoose = "(!r & !g) U ((r & !g) & X ((!r & !g) U g))";

// Red-then-green automaton state indices: q1..q4 are 0..3, q2 is the error state.
enum RedGreen : dfa::StateId { q1 = 0, q2 = 1, q3 = 2, q4 = 3 };

inline const ltlf::AtomSet& rg() {
  static const ltlf::AtomSet atoms{"r", "g"};
  return atoms;
}

inline ltlf::Formula core(const char* text, const ltlf::AtomSet& atoms) {
  return ltlf::expand_derived(ltlf::parse(text, atoms));
}

inline const dfa::Dfa& red_green_dfa() {
  static const dfa::Dfa d = dfa::compile(core(kRedGreen, rg()), rg());
  return d;
}

inline std::shared_ptr<const dfa::Dfa> red_green_ptr() {
  return std::make_shared<const dfa::Dfa>(red_green_dfa());
}

inline ltlf::TraceState st(std::initializer_list<std::string_view> names) {
  return ltlf::TraceState::of(rg(), names);
}

}  // namespace ecrl::testing
