#include "ecrl/dfa/guard.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <unordered_set>

namespace ecrl::dfa {

using ltlf::Formula;
using ltlf::Op;

namespace {

struct Cube {
  std::uint32_t value;  // bits that must be 1 (within care)
  std::uint32_t care;   // bits the cube constrains
  auto operator<=>(const Cube&) const = default;
  bool covers(std::uint32_t m) const { return (m & care) == value; }
};

Formula cube_formula(const Cube& c, const std::vector<std::size_t>& atoms) {
  std::vector<Formula> literals;
  for (std::size_t j = 0; j < atoms.size(); ++j) {
    if (!((c.care >> j) & 1U)) continue;
    auto a = Formula::atom(atoms[j]);
    literals.push_back(((c.value >> j) & 1U) ? a : Formula::negation(a));
  }
  if (literals.empty()) return Formula::top();
  Formula f = literals.back();
  for (std::size_t i = literals.size() - 1; i-- > 0;)
    f = Formula::conj(literals[i], f);
  return f;
}

Formula disjoin(const std::vector<Formula>& terms) {
  if (terms.empty()) return Formula::bottom();
  Formula f = terms.back();
  for (std::size_t i = terms.size() - 1; i-- > 0;) f = Formula::disj(terms[i], f);
  return f;
}

Formula quine_mccluskey(const std::vector<std::uint32_t>& minterms,
                        const std::vector<std::size_t>& atoms) {
  const std::uint32_t full = (1U << atoms.size()) - 1;
  std::set<Cube> current;
  for (auto m : minterms) current.insert({m, full});
  std::set<Cube> primes;
  while (!current.empty()) {
    std::set<Cube> next;
    std::set<Cube> merged;
    std::vector<Cube> items(current.begin(), current.end());
    for (std::size_t i = 0; i < items.size(); ++i) {
      for (std::size_t j = i + 1; j < items.size(); ++j) {
        if (items[i].care != items[j].care) continue;
        std::uint32_t diff = items[i].value ^ items[j].value;
        if (std::popcount(diff) != 1) continue;
        next.insert({items[i].value & ~diff, items[i].care & ~diff});
        merged.insert(items[i]);
        merged.insert(items[j]);
      }
    }
    for (auto& c : items)
      if (!merged.count(c)) primes.insert(c);
    current = std::move(next);
  }

  std::vector<Cube> candidates(primes.begin(), primes.end());
  std::sort(candidates.begin(), candidates.end(), [](const Cube& a, const Cube& b) {
    auto la = std::popcount(a.care), lb = std::popcount(b.care);
    if (la != lb) return la < lb;
    return a < b;
  });
  std::unordered_set<std::uint32_t> uncovered(minterms.begin(), minterms.end());
  std::vector<Cube> chosen;
  while (!uncovered.empty()) {
    const Cube* best = nullptr;
    std::size_t best_gain = 0;
    for (auto& c : candidates) {
      std::size_t gain = 0;
      for (auto m : uncovered)
        if (c.covers(m)) ++gain;
      if (gain > best_gain) {
        best_gain = gain;
        best = &c;
      }
    }
    chosen.push_back(*best);
    for (auto it = uncovered.begin(); it != uncovered.end();)
      it = best->covers(*it) ? uncovered.erase(it) : std::next(it);
  }
  std::sort(chosen.begin(), chosen.end(), [](const Cube& a, const Cube& b) {
    auto la = std::popcount(a.care), lb = std::popcount(b.care);
    if (la != lb) return la < lb;
    return a < b;
  });
  std::vector<Formula> terms;
  for (auto& c : chosen) terms.push_back(cube_formula(c, atoms));
  return disjoin(terms);
}

// Shannon expansion on the projected variables, highest first.
Formula shannon(const std::vector<bool>& member, std::size_t bits,
                const std::vector<std::size_t>& atoms) {
  std::size_t size = std::size_t{1} << bits;
  bool any = false, all = true;
  for (std::size_t m = 0; m < size; ++m) {
    any = any || member[m];
    all = all && member[m];
  }
  if (!any) return Formula::bottom();
  if (all) return Formula::top();
  std::size_t half = size / 2;
  std::vector<bool> low(member.begin(), member.begin() + half);
  std::vector<bool> high(member.begin() + half, member.end());
  auto var = Formula::atom(atoms[bits - 1]);
  if (low == high) return shannon(low, bits - 1, atoms);
  auto f0 = shannon(low, bits - 1, atoms);
  auto f1 = shannon(high, bits - 1, atoms);
  auto neg = Formula::negation(var);
  auto lo = f0.op() == Op::True ? neg : Formula::conj(neg, f0);
  auto hi = f1.op() == Op::True ? var : Formula::conj(var, f1);
  if (f0.op() == Op::False) return hi;
  if (f1.op() == Op::False) return lo;
  return Formula::disj(lo, hi);
}

void flatten(const Formula& f, Op op, std::vector<Formula>& out) {
  if (f.op() == op) {
    flatten(f.lhs(), op, out);
    flatten(f.rhs(), op, out);
  } else {
    out.push_back(f);
  }
}

struct Syntax {
  std::string_view not_token, and_token, or_token;
  bool wrap_top;
};

std::string render(const Formula& f, const ltlf::AtomSet& atoms,
                   const Syntax& syntax, bool top) {
  switch (f.op()) {
    case Op::Atom: return atoms.name(f.atom_index());
    case Op::True: return "true";
    case Op::False: return "false";
    case Op::Not: {
      const auto& c = f.lhs();
      bool simple = c.op() == Op::Atom || c.op() == Op::True ||
                    c.op() == Op::False;
      return std::string(syntax.not_token) +
             (simple ? render(c, atoms, syntax, false)
                     : "(" + render(c, atoms, syntax, true) + ")");
    }
    case Op::And:
    case Op::Or: {
      std::vector<Formula> parts;
      flatten(f, f.op(), parts);
      auto sep = f.op() == Op::And ? syntax.and_token : syntax.or_token;
      std::string out;
      for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) {
          out += ' ';
          out += sep;
          out += ' ';
        }
        out += render(parts[i], atoms, syntax, false);
      }
      if (!top || syntax.wrap_top) out = "(" + out + ")";
      return out;
    }
    default: {
      // Only propositional formulas are guards; fall back to the full printer
      // for anything else.
      return ltlf::to_string(f, atoms);
    }
  }
}

}  // namespace

Formula synthesize_guard(const std::vector<std::uint32_t>& masks,
                         std::size_t num_atoms) {
  const std::size_t size = std::size_t{1} << num_atoms;
  std::vector<bool> member(size, false);
  for (auto m : masks) member.at(m) = true;
  if (masks.empty()) return Formula::bottom();
  if (std::all_of(member.begin(), member.end(), [](bool b) { return b; }))
    return Formula::top();

  std::vector<std::size_t> relevant;
  for (std::size_t i = 0; i < num_atoms; ++i) {
    for (std::size_t m = 0; m < size; ++m) {
      if (member[m] != member[m ^ (std::size_t{1} << i)]) {
        relevant.push_back(i);
        break;
      }
    }
  }
  // Project onto the relevant atoms; membership is independent of the rest.
  const std::size_t k = relevant.size();
  std::vector<bool> projected(std::size_t{1} << k, false);
  for (std::size_t m = 0; m < size; ++m) {
    if (!member[m]) continue;
    std::uint32_t p = 0;
    for (std::size_t j = 0; j < k; ++j)
      if ((m >> relevant[j]) & 1U) p |= (1U << j);
    projected[p] = true;
  }
  if (k <= 10) {
    std::vector<std::uint32_t> minterms;
    for (std::uint32_t p = 0; p < projected.size(); ++p)
      if (projected[p]) minterms.push_back(p);
    return quine_mccluskey(minterms, relevant);
  }
  return shannon(projected, k, relevant);
}

std::string guard_to_string(const Formula& guard, const ltlf::AtomSet& atoms) {
  return render(guard, atoms, {"!", "&", "|", false}, true);
}

std::string guard_to_rddl(const Formula& guard, const ltlf::AtomSet& atoms) {
  return render(guard, atoms, {"~", "^", "|", true}, true);
}

}  // namespace ecrl::dfa
