#include "ecrl/ltlf/formula.hpp"

#include <algorithm>
#include <array>
#include <functional>

namespace ecrl::ltlf {

namespace {

constexpr std::array<std::string_view, 8> kReserved = {
    "X", "N", "U", "F", "G", "true", "false", "last"};

std::size_t mix(std::size_t seed, std::size_t value) {
  return seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace

AtomSet::AtomSet(std::vector<std::string> names) : names_(std::move(names)) {
  if (names_.size() > kMaxAtoms)
    throw InvalidAtomSet("at most 32 atomic propositions are supported");
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (!is_valid_name(names_[i]))
      throw InvalidAtomSet("invalid proposition name '" + names_[i] + "'");
    if (is_reserved(names_[i]))
      throw InvalidAtomSet("proposition name '" + names_[i] +
                           "' is a reserved keyword");
    for (std::size_t j = 0; j < i; ++j)
      if (names_[j] == names_[i])
        throw InvalidAtomSet("duplicate proposition '" + names_[i] + "'");
  }
}

std::optional<std::size_t> AtomSet::find(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return i;
  return std::nullopt;
}

std::size_t AtomSet::index_of(std::string_view name) const {
  if (auto i = find(name)) return *i;
  throw UnknownProposition(std::string(name));
}

bool AtomSet::is_valid_name(std::string_view name) {
  if (name.empty()) return false;
  auto alpha = [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
  };
  if (!alpha(name.front())) return false;
  return std::all_of(name.begin() + 1, name.end(), [&](char c) {
    return alpha(c) || (c >= '0' && c <= '9');
  });
}

bool AtomSet::is_reserved(std::string_view name) {
  return std::find(kReserved.begin(), kReserved.end(), name) != kReserved.end();
}

TraceState TraceState::of(const AtomSet& atoms,
                          std::initializer_list<std::string_view> names) {
  TraceState s;
  for (auto n : names) s.set(atoms.index_of(n));
  return s;
}

Trace::Trace(std::vector<TraceState> states) : states_(std::move(states)) {
  if (states_.empty()) throw EmptyTrace();
}

std::string_view op_name(Op op) {
  switch (op) {
    case Op::Atom: return "Atom";
    case Op::True: return "True";
    case Op::False: return "False";
    case Op::Last: return "Last";
    case Op::Not: return "Not";
    case Op::And: return "And";
    case Op::Or: return "Or";
    case Op::Implies: return "Implies";
    case Op::Iff: return "Iff";
    case Op::Next: return "Next";
    case Op::WeakNext: return "WeakNext";
    case Op::Until: return "Until";
    case Op::Eventually: return "Eventually";
    case Op::Always: return "Always";
  }
  return "?";
}

struct Formula::Node {
  Op op;
  std::size_t atom = 0;
  Formula lhs;
  Formula rhs;
  std::size_t hash = 0;
  std::size_t size = 1;
  std::size_t depth = 0;
  std::size_t atom_bound = 0;
};

Formula Formula::make(Op op, std::size_t atom, const Formula* lhs,
                      const Formula* rhs) {
  auto node = std::make_shared<Node>();
  node->op = op;
  node->atom = atom;
  node->hash = mix(static_cast<std::size_t>(op), atom);
  if (op == Op::Atom) node->atom_bound = atom + 1;
  if (lhs) {
    node->lhs = *lhs;
    node->hash = mix(node->hash, lhs->hash());
    node->size += lhs->size();
    node->depth = lhs->depth() + 1;
    node->atom_bound = lhs->atom_bound();
  }
  if (rhs) {
    node->rhs = *rhs;
    node->hash = mix(node->hash, rhs->hash());
    node->size += rhs->size();
    node->depth = std::max(node->depth, rhs->depth() + 1);
    node->atom_bound = std::max(node->atom_bound, rhs->atom_bound());
  }
  return Formula(std::move(node));
}

Formula Formula::atom(std::size_t index) {
  if (index >= AtomSet::kMaxAtoms)
    throw InvalidAtomSet("atom index out of range");
  return make(Op::Atom, index, nullptr, nullptr);
}
Formula Formula::top() { return make(Op::True, 0, nullptr, nullptr); }
Formula Formula::bottom() { return make(Op::False, 0, nullptr, nullptr); }
Formula Formula::last() { return make(Op::Last, 0, nullptr, nullptr); }
Formula Formula::negation(Formula f) { return make(Op::Not, 0, &f, nullptr); }
Formula Formula::conj(Formula a, Formula b) { return make(Op::And, 0, &a, &b); }
Formula Formula::disj(Formula a, Formula b) { return make(Op::Or, 0, &a, &b); }
Formula Formula::implies(Formula a, Formula b) {
  return make(Op::Implies, 0, &a, &b);
}
Formula Formula::iff(Formula a, Formula b) { return make(Op::Iff, 0, &a, &b); }
Formula Formula::next(Formula f) { return make(Op::Next, 0, &f, nullptr); }
Formula Formula::weak_next(Formula f) {
  return make(Op::WeakNext, 0, &f, nullptr);
}
Formula Formula::until(Formula a, Formula b) {
  return make(Op::Until, 0, &a, &b);
}
Formula Formula::eventually(Formula f) {
  return make(Op::Eventually, 0, &f, nullptr);
}
Formula Formula::always(Formula f) { return make(Op::Always, 0, &f, nullptr); }

Op Formula::op() const { return node_->op; }
std::size_t Formula::atom_index() const { return node_->atom; }
const Formula& Formula::lhs() const { return node_->lhs; }
const Formula& Formula::rhs() const { return node_->rhs; }
std::size_t Formula::hash() const { return node_->hash; }
std::size_t Formula::size() const { return node_->size; }
std::size_t Formula::depth() const { return node_->depth; }
std::size_t Formula::atom_bound() const { return node_->atom_bound; }

bool Formula::is_unary() const {
  switch (op()) {
    case Op::Not:
    case Op::Next:
    case Op::WeakNext:
    case Op::Eventually:
    case Op::Always:
      return true;
    default:
      return false;
  }
}

bool Formula::is_binary() const {
  switch (op()) {
    case Op::And:
    case Op::Or:
    case Op::Implies:
    case Op::Iff:
    case Op::Until:
      return true;
    default:
      return false;
  }
}

bool Formula::is_core() const {
  switch (op()) {
    case Op::Atom:
    case Op::True:
    case Op::False:
    case Op::Last:
      return true;
    case Op::Not:
    case Op::Next:
      return lhs().is_core();
    case Op::And:
    case Op::Or:
    case Op::Until:
      return lhs().is_core() && rhs().is_core();
    default:
      return false;
  }
}

bool Formula::is_propositional() const {
  switch (op()) {
    case Op::Atom:
    case Op::True:
    case Op::False:
      return true;
    case Op::Not:
      return lhs().is_propositional();
    case Op::And:
    case Op::Or:
    case Op::Implies:
    case Op::Iff:
      return lhs().is_propositional() && rhs().is_propositional();
    default:
      return false;
  }
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash() || a.size() != b.size()) return false;
  return (a <=> b) == std::strong_ordering::equal;
}

std::strong_ordering operator<=>(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (auto c = a.op() <=> b.op(); c != 0) return c;
  if (a.op() == Op::Atom) return a.atom_index() <=> b.atom_index();
  if (a.is_unary()) return a.lhs() <=> b.lhs();
  if (a.is_binary()) {
    if (auto c = a.lhs() <=> b.lhs(); c != 0) return c;
    return a.rhs() <=> b.rhs();
  }
  return std::strong_ordering::equal;
}

namespace {

void print(const Formula& f, const AtomSet& atoms, std::string& out) {
  auto binary = [&](std::string_view token) {
    out += '(';
    print(f.lhs(), atoms, out);
    out += ' ';
    out += token;
    out += ' ';
    print(f.rhs(), atoms, out);
    out += ')';
  };
  auto unary = [&](std::string_view token) {
    out += '(';
    out += token;
    print(f.lhs(), atoms, out);
    out += ')';
  };
  switch (f.op()) {
    case Op::Atom: out += atoms.name(f.atom_index()); break;
    case Op::True: out += "true"; break;
    case Op::False: out += "false"; break;
    case Op::Last: out += "last"; break;
    case Op::Not: unary("!"); break;
    case Op::Next: unary("X "); break;
    case Op::WeakNext: unary("N "); break;
    case Op::Eventually: unary("F "); break;
    case Op::Always: unary("G "); break;
    case Op::And: binary("&"); break;
    case Op::Or: binary("|"); break;
    case Op::Implies: binary("->"); break;
    case Op::Iff: binary("<->"); break;
    case Op::Until: binary("U"); break;
  }
}

}  // namespace

std::string to_string(const Formula& f, const AtomSet& atoms) {
  std::string out;
  print(f, atoms, out);
  return out;
}

Formula expand_derived(const Formula& f) {
  switch (f.op()) {
    case Op::Atom:
    case Op::True:
    case Op::False:
    case Op::Last:
      return f;
    case Op::Not:
      return Formula::negation(expand_derived(f.lhs()));
    case Op::Next:
      return Formula::next(expand_derived(f.lhs()));
    case Op::And:
      return Formula::conj(expand_derived(f.lhs()), expand_derived(f.rhs()));
    case Op::Or:
      return Formula::disj(expand_derived(f.lhs()), expand_derived(f.rhs()));
    case Op::Until:
      return Formula::until(expand_derived(f.lhs()), expand_derived(f.rhs()));
    case Op::Implies:
      return Formula::disj(Formula::negation(expand_derived(f.lhs())),
                           expand_derived(f.rhs()));
    case Op::Iff: {
      auto a = expand_derived(f.lhs());
      auto b = expand_derived(f.rhs());
      return Formula::conj(Formula::disj(Formula::negation(a), b),
                           Formula::disj(Formula::negation(b), a));
    }
    case Op::Eventually:
      return Formula::until(Formula::top(), expand_derived(f.lhs()));
    case Op::Always:
      // G f == !F !f == !(true U !f)
      return Formula::negation(Formula::until(
          Formula::top(), Formula::negation(expand_derived(f.lhs()))));
    case Op::WeakNext:
      return Formula::disj(Formula::last(),
                           Formula::next(expand_derived(f.lhs())));
  }
  return f;
}

}  // namespace ecrl::ltlf
