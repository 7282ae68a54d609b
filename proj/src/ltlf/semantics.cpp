#include "ecrl/ltlf/semantics.hpp"

#include <algorithm>
#include <unordered_map>
#include <vector>

namespace ecrl::ltlf {

namespace {

struct MemoKey {
  const void* node;
  std::size_t index;
  bool operator==(const MemoKey&) const = default;
};

struct MemoHash {
  std::size_t operator()(const MemoKey& k) const {
    return std::hash<const void*>()(k.node) * 31 + k.index;
  }
};

// Memoized on (subformula, position) so nested Until stays polynomial.
class Evaluator {
 public:
  explicit Evaluator(const Trace& trace) : trace_(trace) {}

  bool eval(std::size_t i, const Formula& f) {
    MemoKey key{f.id(), i};
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    bool v = compute(i, f);
    memo_.emplace(key, v);
    return v;
  }

 private:
  bool compute(std::size_t i, const Formula& f) {
    const std::size_t n = trace_.last_index();
    switch (f.op()) {
      case Op::Atom: return trace_[i].holds(f.atom_index());
      case Op::True: return true;
      case Op::False: return false;
      case Op::Last: return i == n;
      case Op::Not: return !eval(i, f.lhs());
      case Op::And: return eval(i, f.lhs()) && eval(i, f.rhs());
      case Op::Or: return eval(i, f.lhs()) || eval(i, f.rhs());
      case Op::Implies: return !eval(i, f.lhs()) || eval(i, f.rhs());
      case Op::Iff: return eval(i, f.lhs()) == eval(i, f.rhs());
      case Op::Next: return i < n && eval(i + 1, f.lhs());
      case Op::WeakNext: return i == n || eval(i + 1, f.lhs());
      case Op::Until:
        // exists i <= j <= n with f2 at j and f1 at every i <= k < j
        for (std::size_t j = i; j <= n; ++j) {
          if (eval(j, f.rhs())) return true;
          if (!eval(j, f.lhs())) return false;
        }
        return false;
      case Op::Eventually:
        for (std::size_t j = i; j <= n; ++j)
          if (eval(j, f.lhs())) return true;
        return false;
      case Op::Always:
        for (std::size_t j = i; j <= n; ++j)
          if (!eval(j, f.lhs())) return false;
        return true;
    }
    return false;
  }

  const Trace& trace_;
  std::unordered_map<MemoKey, bool, MemoHash> memo_;
};

bool is_const(const Formula& f, Op op) { return f.op() == op; }

void flatten(const Formula& f, Op op, std::vector<Formula>& out) {
  if (f.op() == op) {
    flatten(f.lhs(), op, out);
    flatten(f.rhs(), op, out);
  } else {
    out.push_back(f);
  }
}

// Shared body of conj/disj. `unit` is absorbed, `zero` dominates.
Formula associative(const Formula& a, const Formula& b, Op op, Op unit,
                    Op zero) {
  std::vector<Formula> items;
  flatten(a, op, items);
  flatten(b, op, items);
  std::vector<Formula> kept;
  kept.reserve(items.size());
  for (auto& f : items) {
    if (is_const(f, zero)) return f;
    if (!is_const(f, unit)) kept.push_back(f);
  }
  if (kept.empty())
    return unit == Op::True ? Formula::top() : Formula::bottom();
  std::sort(kept.begin(), kept.end());
  kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
  for (auto& f : kept) {
    if (f.op() == Op::Not &&
        std::binary_search(kept.begin(), kept.end(), f.lhs()))
      return zero == Op::False ? Formula::bottom() : Formula::top();
  }
  Formula result = kept.back();
  for (std::size_t i = kept.size() - 1; i-- > 0;)
    result = op == Op::And ? Formula::conj(kept[i], result)
                           : Formula::disj(kept[i], result);
  return result;
}

}  // namespace

bool evaluate(const Trace& trace, std::size_t i, const Formula& f) {
  if (i >= trace.size())
    throw IndexOutOfTrace("position " + std::to_string(i) +
                          " outside trace of length " +
                          std::to_string(trace.size()));
  return Evaluator(trace).eval(i, f);
}

namespace canonical {

Formula negation(const Formula& f) {
  switch (f.op()) {
    case Op::True: return Formula::bottom();
    case Op::False: return Formula::top();
    case Op::Not: return f.lhs();
    default: return Formula::negation(f);
  }
}

Formula conj(const Formula& a, const Formula& b) {
  return associative(a, b, Op::And, Op::True, Op::False);
}

Formula disj(const Formula& a, const Formula& b) {
  return associative(a, b, Op::Or, Op::False, Op::True);
}

Formula next(const Formula& f) {
  // X false can never hold: either there is no next state or it fails there.
  if (f.op() == Op::False) return f;
  return Formula::next(f);
}

Formula until(const Formula& a, const Formula& b) {
  if (b.op() == Op::True || b.op() == Op::False) return b;
  if (a.op() == Op::False) return b;
  if (a == b) return b;
  return Formula::until(a, b);
}

}  // namespace canonical

Formula canonicalize(const Formula& f) {
  switch (f.op()) {
    case Op::Atom:
    case Op::True:
    case Op::False:
    case Op::Last:
      return f;
    case Op::Not: return canonical::negation(canonicalize(f.lhs()));
    case Op::Next: return canonical::next(canonicalize(f.lhs()));
    case Op::And:
      return canonical::conj(canonicalize(f.lhs()), canonicalize(f.rhs()));
    case Op::Or:
      return canonical::disj(canonicalize(f.lhs()), canonicalize(f.rhs()));
    case Op::Until:
      return canonical::until(canonicalize(f.lhs()), canonicalize(f.rhs()));
    default:
      return canonicalize(expand_derived(f));
  }
}

Formula progress(const Formula& f, TraceState s) {
  switch (f.op()) {
    case Op::Atom:
      return s.holds(f.atom_index()) ? Formula::top() : Formula::bottom();
    case Op::True:
    case Op::False:
      return f;
    case Op::Last:
      // The trace continues, so s is not the final state.
      return Formula::bottom();
    case Op::Not: return canonical::negation(progress(f.lhs(), s));
    case Op::And:
      return canonical::conj(progress(f.lhs(), s), progress(f.rhs(), s));
    case Op::Or:
      return canonical::disj(progress(f.lhs(), s), progress(f.rhs(), s));
    case Op::Next: return canonicalize(f.lhs());
    case Op::Until:
      // a U b  ==  b | (a & X(a U b))
      return canonical::disj(
          progress(f.rhs(), s),
          canonical::conj(progress(f.lhs(), s), canonicalize(f)));
    default:
      return progress(expand_derived(f), s);
  }
}

bool accepts_empty_continuation(const Formula& f, TraceState s) {
  switch (f.op()) {
    case Op::Atom: return s.holds(f.atom_index());
    case Op::True: return true;
    case Op::False: return false;
    case Op::Last: return true;
    case Op::Not: return !accepts_empty_continuation(f.lhs(), s);
    case Op::And:
      return accepts_empty_continuation(f.lhs(), s) &&
             accepts_empty_continuation(f.rhs(), s);
    case Op::Or:
      return accepts_empty_continuation(f.lhs(), s) ||
             accepts_empty_continuation(f.rhs(), s);
    case Op::Next: return false;
    case Op::Until: return accepts_empty_continuation(f.rhs(), s);
    default: return accepts_empty_continuation(expand_derived(f), s);
  }
}

}  // namespace ecrl::ltlf
