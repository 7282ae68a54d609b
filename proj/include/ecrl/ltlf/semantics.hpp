#pragma once

#include <cstddef>

#include "ecrl/ltlf/formula.hpp"

namespace ecrl::ltlf {

class IndexOutOfTrace : public Error {
 public:
  using Error::Error;
};

// Brute-force satisfaction check sigma, i |= f, following the semantic
// clauses literally (derived operators by their own definitions).
// This is the ground truth that every other component is tested against.
bool evaluate(const Trace& trace, std::size_t i, const Formula& f);

inline bool satisfies(const Trace& trace, const Formula& f) {
  return evaluate(trace, 0, f);
}

// Residual obligation after observing `s` when the trace continues:
// for every non-empty sigma', (s . sigma' |= f) <=> (sigma' |= progress(f, s)).
// `f` must be core-form; the result is core-form and canonical.
Formula progress(const Formula& f, TraceState s);

// Whether the one-state trace [s] satisfies core-form `f`.
bool accepts_empty_continuation(const Formula& f, TraceState s);

// Simplifying constructors producing canonical form: constants folded,
// And/Or flattened, children sorted and deduplicated, x & !x collapsed.
namespace canonical {
Formula negation(const Formula& f);
Formula conj(const Formula& a, const Formula& b);
Formula disj(const Formula& a, const Formula& b);
Formula next(const Formula& f);
Formula until(const Formula& a, const Formula& b);
}  // namespace canonical

// Rebuilds a core-form formula bottom-up through the canonical constructors.
Formula canonicalize(const Formula& f);

}  // namespace ecrl::ltlf
