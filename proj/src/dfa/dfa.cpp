#include "ecrl/dfa/dfa.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include "ecrl/dfa/guard.hpp"

namespace ecrl::dfa {

namespace {

// Valuation masks in truth-table order: the first declared atom is the most
// significant position, so for atoms (r, g) the order is {}, {g}, {r}, {r,g}.
std::vector<std::uint32_t> truth_table_order(std::size_t num_atoms) {
  std::vector<std::uint32_t> order;
  const std::uint32_t count = 1U << num_atoms;
  order.reserve(count);
  for (std::uint32_t k = 0; k < count; ++k) {
    std::uint32_t mask = 0;
    for (std::size_t i = 0; i < num_atoms; ++i)
      if ((k >> (num_atoms - 1 - i)) & 1U) mask |= (1U << i);
    order.push_back(mask);
  }
  return order;
}

}  // namespace

std::uint32_t valuation_mask(const AtomSet& atoms, TraceState s) {
  const std::uint32_t keep =
      atoms.size() >= 32 ? ~0U : ((1U << atoms.size()) - 1U);
  return s.bits() & keep;
}

bool guard_holds(const Formula& guard, std::uint32_t mask) {
  using ltlf::Op;
  switch (guard.op()) {
    case Op::Atom: return (mask >> guard.atom_index()) & 1U;
    case Op::True: return true;
    case Op::False: return false;
    case Op::Not: return !guard_holds(guard.lhs(), mask);
    case Op::And: return guard_holds(guard.lhs(), mask) && guard_holds(guard.rhs(), mask);
    case Op::Or: return guard_holds(guard.lhs(), mask) || guard_holds(guard.rhs(), mask);
    case Op::Implies:
      return !guard_holds(guard.lhs(), mask) || guard_holds(guard.rhs(), mask);
    case Op::Iff:
      return guard_holds(guard.lhs(), mask) == guard_holds(guard.rhs(), mask);
    default:
      throw InvalidDfa("guard contains a temporal operator");
  }
}

Dfa::Dfa(AtomSet atoms, std::vector<std::vector<StateId>> table,
         StateId initial, std::vector<bool> accepting)
    : atoms_(std::move(atoms)),
      table_(std::move(table)),
      initial_(initial),
      accepting_(std::move(accepting)) {
  if (atoms_.size() > kMaxAtoms)
    throw InvalidDfa("at most 16 atoms are supported by the automaton");
  const std::size_t n = table_.size();
  if (n == 0) throw InvalidDfa("automaton has no states");
  if (initial_ >= n) throw InvalidDfa("initial state out of range");
  if (accepting_.size() != n)
    throw InvalidDfa("accepting flags do not match the state count");
  for (const auto& row : table_) {
    if (row.size() != num_valuations())
      throw InvalidDfa("transition row does not cover every valuation");
    for (auto t : row)
      if (t >= n) throw InvalidDfa("transition target out of range");
  }

  error_.assign(n, false);
  for (auto q : find_error_states(*this)) error_[q] = true;

  for (StateId q = 0; q < n; ++q) {
    std::map<StateId, std::vector<std::uint32_t>> by_target;
    for (std::uint32_t m = 0; m < num_valuations(); ++m) by_target[table_[q][m]].push_back(m);
    for (auto& [to, masks] : by_target)
      edges_.push_back({q, synthesize_guard(masks, atoms_.size()), to});
  }
}

Dfa Dfa::from_edges(AtomSet atoms, std::size_t num_states,
                    const std::vector<Edge>& edges, StateId initial,
                    std::vector<bool> accepting) {
  if (atoms.size() > kMaxAtoms)
    throw InvalidDfa("at most 16 atoms are supported by the automaton");
  const std::uint32_t vals = 1U << atoms.size();
  constexpr StateId kUnset = static_cast<StateId>(-1);
  std::vector<std::vector<StateId>> table(num_states,
                                          std::vector<StateId>(vals, kUnset));
  for (const auto& e : edges) {
    if (e.from >= num_states || e.to >= num_states)
      throw InvalidDfa("edge endpoint out of range");
    if (!e.guard.is_propositional())
      throw InvalidDfa("guard contains a temporal operator");
    for (std::uint32_t m = 0; m < vals; ++m) {
      if (!guard_holds(e.guard, m)) continue;
      auto& slot = table[e.from][m];
      if (slot != kUnset && slot != e.to)
        throw InvalidDfa("nondeterministic transition from " +
                         state_name(e.from));
      slot = e.to;
    }
  }
  for (StateId q = 0; q < num_states; ++q)
    for (std::uint32_t m = 0; m < vals; ++m)
      if (table[q][m] == kUnset)
        throw InvalidDfa("transition function is not total at " +
                         state_name(q));
  return Dfa(std::move(atoms), std::move(table), initial, std::move(accepting));
}

std::vector<StateId> Dfa::accepting_states() const {
  std::vector<StateId> out;
  for (StateId q = 0; q < num_states(); ++q)
    if (accepting_[q]) out.push_back(q);
  return out;
}

std::vector<StateId> Dfa::error_states() const {
  std::vector<StateId> out;
  for (StateId q = 0; q < num_states(); ++q)
    if (error_[q]) out.push_back(q);
  return out;
}

StateId Dfa::step(StateId q, TraceState s) const {
  return table_.at(q)[valuation_mask(atoms_, s)];
}

StateId Dfa::run(const Trace& trace) const {
  StateId q = initial_;
  for (const auto& s : trace) q = step(q, s);
  return q;
}

bool Dfa::accepts(const Trace& trace) const { return accepting_[run(trace)]; }

std::vector<StateId> Dfa::successors(StateId q) const {
  std::vector<bool> seen(num_states(), false);
  std::vector<StateId> out;
  for (auto t : table_.at(q))
    if (!seen[t]) {
      seen[t] = true;
      out.push_back(t);
    }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<StateId> find_error_states(const Dfa& d) {
  const std::size_t n = d.num_states();
  std::vector<std::vector<StateId>> preds(n);
  for (StateId q = 0; q < n; ++q)
    for (auto t : d.successors(q)) preds[t].push_back(q);
  std::vector<bool> reaches(n, false);
  std::deque<StateId> work;
  for (StateId q = 0; q < n; ++q)
    if (d.is_accepting(q)) {
      reaches[q] = true;
      work.push_back(q);
    }
  while (!work.empty()) {
    auto q = work.front();
    work.pop_front();
    for (auto p : preds[q])
      if (!reaches[p]) {
        reaches[p] = true;
        work.push_back(p);
      }
  }
  std::vector<StateId> errors;
  for (StateId q = 0; q < n; ++q)
    if (!reaches[q]) errors.push_back(q);
  return errors;
}

Dfa minimize(const Dfa& d) {
  const std::size_t n = d.num_states();
  const std::size_t vals = d.num_valuations();
  const auto order = truth_table_order(d.atoms().size());

  std::vector<bool> reachable(n, false);
  {
    std::deque<StateId> work{d.initial()};
    reachable[d.initial()] = true;
    while (!work.empty()) {
      auto q = work.front();
      work.pop_front();
      for (auto t : d.successors(q))
        if (!reachable[t]) {
          reachable[t] = true;
          work.push_back(t);
        }
    }
  }

  // Moore refinement: split blocks by the blocks of their successors until
  // the partition is stable.
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> block(n, kNone);
  for (StateId q = 0; q < n; ++q)
    if (reachable[q]) block[q] = d.is_accepting(q) ? 1 : 0;
  std::size_t num_blocks = 0;
  while (true) {
    std::map<std::vector<std::size_t>, std::size_t> ids;
    std::vector<std::size_t> next(n, kNone);
    for (StateId q = 0; q < n; ++q) {
      if (!reachable[q]) continue;
      std::vector<std::size_t> sig;
      sig.reserve(vals + 1);
      sig.push_back(block[q]);
      for (std::uint32_t m = 0; m < vals; ++m)
        sig.push_back(block[d.step_mask(q, m)]);
      auto [it, inserted] = ids.emplace(std::move(sig), ids.size());
      next[q] = it->second;
    }
    bool stable = ids.size() == num_blocks;
    num_blocks = ids.size();
    block = std::move(next);
    if (stable) break;
  }

  // Renumber blocks breadth-first from the initial block.
  std::vector<StateId> representative(num_blocks, kNone);
  for (StateId q = 0; q < n; ++q)
    if (reachable[q] && representative[block[q]] == kNone)
      representative[block[q]] = q;
  std::vector<std::size_t> new_id(num_blocks, kNone);
  std::vector<std::size_t> visit;
  new_id[block[d.initial()]] = 0;
  visit.push_back(block[d.initial()]);
  for (std::size_t i = 0; i < visit.size(); ++i) {
    auto rep = representative[visit[i]];
    for (auto m : order) {
      auto b = block[d.step_mask(rep, m)];
      if (new_id[b] == kNone) {
        new_id[b] = visit.size();
        visit.push_back(b);
      }
    }
  }
  std::vector<std::vector<StateId>> table(visit.size(),
                                          std::vector<StateId>(vals));
  std::vector<bool> accepting(visit.size(), false);
  for (std::size_t i = 0; i < visit.size(); ++i) {
    auto rep = representative[visit[i]];
    accepting[i] = d.is_accepting(rep);
    for (std::uint32_t m = 0; m < vals; ++m)
      table[i][m] = new_id[block[d.step_mask(rep, m)]];
  }
  return Dfa(d.atoms(), std::move(table), 0, std::move(accepting));
}

}  // namespace ecrl::dfa
