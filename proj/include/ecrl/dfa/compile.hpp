#pragma once

#include <cstddef>

#include "ecrl/dfa/dfa.hpp"

namespace ecrl::dfa {

class ClosureOverflow : public Error {
 public:
  using Error::Error;
};

class UnsatisfiableTask : public Error {
 public:
  using Error::Error;
};

struct CompileOptions {
  std::size_t max_states = 4096;
};

// LTL_f -> minimal complete DFA by formula progression.
//
// Construction states are pairs (residual, ended_ok): `residual` is the
// canonical progression of f over the consumed prefix, and `ended_ok` records
// whether that prefix, if the trace stopped there, satisfies f. A state is
// accepting iff ended_ok. The initial state stands for the empty prefix and is
// never accepting.
Dfa compile(const Formula& f, const AtomSet& atoms,
            const CompileOptions& options = {});

}  // namespace ecrl::dfa
