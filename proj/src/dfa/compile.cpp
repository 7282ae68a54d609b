#include "ecrl/dfa/compile.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

#include "ecrl/dfa/guard.hpp"
#include "ecrl/ltlf/semantics.hpp"

namespace ecrl::dfa {

namespace {

struct Residual {
  Formula formula;
  bool ended_ok;
  bool operator==(const Residual& o) const {
    return ended_ok == o.ended_ok && formula == o.formula;
  }
};

struct ResidualHash {
  std::size_t operator()(const Residual& r) const {
    return r.formula.hash() * 2 + (r.ended_ok ? 1 : 0);
  }
};

using ltlf::Op;

bool is_boolean(Op op) {
  return op == Op::Not || op == Op::And || op == Op::Or || op == Op::True || op == Op::False;
}

// Maximal non-boolean subformulas (atoms, last, X, U) of a residual.
void collect_basis(const Formula& f, std::vector<Formula>& out) {
  if (!is_boolean(f.op())) {
    if (std::find(out.begin(), out.end(), f) == out.end()) out.push_back(f);
    return;
  }
  if (f.op() == Op::True || f.op() == Op::False) return;
  collect_basis(f.lhs(), out);
  if (f.op() != Op::Not) collect_basis(f.rhs(), out);
}

bool eval_boolean(const Formula& f, const std::vector<Formula>& basis, std::uint32_t mask) {
  switch (f.op()) {
    case Op::True: return true;
    case Op::False: return false;
    case Op::Not: return !eval_boolean(f.lhs(), basis, mask);
    case Op::And: return eval_boolean(f.lhs(), basis, mask) && eval_boolean(f.rhs(), basis, mask);
    case Op::Or: return eval_boolean(f.lhs(), basis, mask) || eval_boolean(f.rhs(), basis, mask);
    default: {
      auto i = static_cast<std::size_t>(std::find(basis.begin(), basis.end(), f) - basis.begin());
      return (mask >> i) & 1U;
    }
  }
}

Formula substitute(const Formula& g, const std::vector<Formula>& basis) {
  switch (g.op()) {
    case Op::Atom: return basis[g.atom_index()];
    case Op::Not: return ltlf::canonical::negation(substitute(g.lhs(), basis));
    case Op::And: return ltlf::canonical::conj(substitute(g.lhs(), basis), substitute(g.rhs(), basis));
    case Op::Or: return ltlf::canonical::disj(substitute(g.lhs(), basis), substitute(g.rhs(), basis));
    default: return g;
  }
}

// Rewrites a residual as a minimal sum of products over the temporal
// subformulas it mentions, so boolean-equivalent residuals coincide and the
// closure stays finite.
Formula boolean_normal_form(const Formula& f) {
  constexpr std::size_t kMaxBasis = 12;
  std::vector<Formula> basis;
  collect_basis(f, basis);
  if (basis.size() > kMaxBasis) return f;
  std::sort(basis.begin(), basis.end());
  const std::uint32_t n = 1U << basis.size();
  std::vector<bool> value(n);
  for (std::uint32_t m = 0; m < n; ++m) value[m] = eval_boolean(f, basis, m);
  // Drop basis elements the function ignores.
  std::vector<Formula> used;
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    bool matters = false;
    for (std::uint32_t m = 0; m < n && !matters; ++m) matters = value[m] != value[m ^ (1U << i)];
    if (matters) {
      used.push_back(basis[i]);
      keep.push_back(i);
    }
  }
  std::vector<std::uint32_t> masks;
  for (std::uint32_t m = 0; m < (1U << used.size()); ++m) {
    std::uint32_t full = 0;
    for (std::size_t j = 0; j < keep.size(); ++j)
      if ((m >> j) & 1U) full |= 1U << keep[j];
    if (value[full]) masks.push_back(m);
  }
  return substitute(synthesize_guard(masks, used.size()), used);
}

}  // namespace

Dfa compile(const Formula& f, const AtomSet& atoms,
            const CompileOptions& options) {
  if (atoms.size() > Dfa::kMaxAtoms)
    throw InvalidDfa("at most 16 atoms are supported by the automaton");
  if (f.atom_bound() > atoms.size())
    throw ltlf::UnknownProposition("#" + std::to_string(f.atom_bound() - 1));

  const std::uint32_t vals = 1U << atoms.size();
  std::unordered_map<Residual, StateId, ResidualHash> ids;
  std::vector<Residual> states;
  std::vector<std::vector<StateId>> table;

  auto intern = [&](Residual r) {
    auto [it, inserted] = ids.emplace(r, states.size());
    if (inserted) {
      if (states.size() >= options.max_states)
        throw ClosureOverflow("progression closure exceeds " +
                              std::to_string(options.max_states) + " states");
      states.push_back(std::move(r));
    }
    return it->second;
  };

  intern({boolean_normal_form(ltlf::canonicalize(ltlf::expand_derived(f))), false});
  for (StateId q = 0; q < states.size(); ++q) {
    std::vector<StateId> row(vals);
    // Copy: `states` may grow while this row is filled.
    const Formula residual = states[q].formula;
    for (std::uint32_t m = 0; m < vals; ++m) {
      TraceState s(m);
      row[m] = intern({boolean_normal_form(ltlf::progress(residual, s)),
                       ltlf::accepts_empty_continuation(residual, s)});
    }
    table.push_back(std::move(row));
  }

  std::vector<bool> accepting(states.size());
  bool any = false;
  for (StateId q = 0; q < states.size(); ++q) {
    accepting[q] = states[q].ended_ok;
    any = any || accepting[q];
  }
  if (!any) throw UnsatisfiableTask("formula is not satisfiable by any trace");

  return minimize(Dfa(atoms, std::move(table), 0, std::move(accepting)));
}

}  // namespace ecrl::dfa
