#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ecrl/error.hpp"

namespace ecrl::ltlf {

class UnknownProposition : public Error {
 public:
  explicit UnknownProposition(std::string name)
      : Error("unknown proposition '" + name + "'"), name_(std::move(name)) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

class InvalidAtomSet : public Error {
 public:
  using Error::Error;
};

// Ordered set of atomic proposition names. Atoms are referred to by index;
// index i corresponds to bit i of a TraceState.
class AtomSet {
 public:
  static constexpr std::size_t kMaxAtoms = 32;

  AtomSet() = default;
  explicit AtomSet(std::vector<std::string> names);
  AtomSet(std::initializer_list<std::string> names)
      : AtomSet(std::vector<std::string>(names)) {}

  std::size_t size() const { return names_.size(); }
  bool empty() const { return names_.empty(); }
  const std::string& name(std::size_t i) const { return names_.at(i); }
  const std::vector<std::string>& names() const { return names_; }

  std::optional<std::size_t> find(std::string_view name) const;
  // Throws UnknownProposition.
  std::size_t index_of(std::string_view name) const;

  bool operator==(const AtomSet&) const = default;

  static bool is_valid_name(std::string_view name);
  static bool is_reserved(std::string_view name);

 private:
  std::vector<std::string> names_;
};

// A set of propositions held true; everything else is false.
class TraceState {
 public:
  constexpr TraceState() = default;
  constexpr explicit TraceState(std::uint32_t bits) : bits_(bits) {}

  static TraceState of(const AtomSet& atoms,
                       std::initializer_list<std::string_view> names);

  constexpr bool holds(std::size_t atom) const { return (bits_ >> atom) & 1U; }
  constexpr void set(std::size_t atom, bool value = true) {
    if (value)
      bits_ |= (1U << atom);
    else
      bits_ &= ~(1U << atom);
  }
  constexpr std::uint32_t bits() const { return bits_; }

  auto operator<=>(const TraceState&) const = default;

 private:
  std::uint32_t bits_ = 0;
};

class EmptyTrace : public Error {
 public:
  EmptyTrace() : Error("traces must contain at least one state") {}
};

// Finite, non-empty sequence of states s_0 ... s_n.
class Trace {
 public:
  explicit Trace(std::vector<TraceState> states);
  Trace(std::initializer_list<TraceState> states)
      : Trace(std::vector<TraceState>(states)) {}

  std::size_t size() const { return states_.size(); }
  std::size_t last_index() const { return states_.size() - 1; }
  const TraceState& operator[](std::size_t i) const { return states_[i]; }
  const std::vector<TraceState>& states() const { return states_; }
  auto begin() const { return states_.begin(); }
  auto end() const { return states_.end(); }

 private:
  std::vector<TraceState> states_;
};

enum class Op : std::uint8_t {
  Atom,
  True,
  False,
  Last,
  Not,
  And,
  Or,
  Implies,
  Iff,
  Next,
  WeakNext,
  Until,
  Eventually,
  Always,
};

std::string_view op_name(Op op);

// Immutable LTL_f syntax tree. Copies share structure.
class Formula {
 public:
  static Formula atom(std::size_t index);
  static Formula top();
  static Formula bottom();
  static Formula last();
  static Formula negation(Formula f);
  static Formula conj(Formula a, Formula b);
  static Formula disj(Formula a, Formula b);
  static Formula implies(Formula a, Formula b);
  static Formula iff(Formula a, Formula b);
  static Formula next(Formula f);
  static Formula weak_next(Formula f);
  static Formula until(Formula a, Formula b);
  static Formula eventually(Formula f);
  static Formula always(Formula f);

  Op op() const;
  std::size_t atom_index() const;
  // Unary operators keep their operand in lhs().
  const Formula& lhs() const;
  const Formula& rhs() const;

  bool is_unary() const;
  bool is_binary() const;
  // Only Atom/True/False/Last/Not/And/Or/Next/Until.
  bool is_core() const;
  // No temporal operators and no Last.
  bool is_propositional() const;

  std::size_t hash() const;
  std::size_t size() const;
  std::size_t depth() const;
  // Largest atom index + 1, or 0 when no atom occurs.
  std::size_t atom_bound() const;
  // Identity of the shared node, stable for the lifetime of the formula.
  const void* id() const { return node_.get(); }

  friend bool operator==(const Formula& a, const Formula& b);
  // Total structural order used for canonical child ordering.
  friend std::strong_ordering operator<=>(const Formula& a, const Formula& b);

 private:
  struct Node;
  Formula() = default;
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Formula make(Op op, std::size_t atom, const Formula* lhs,
                      const Formula* rhs);

  std::shared_ptr<const Node> node_;
};

struct FormulaHash {
  std::size_t operator()(const Formula& f) const { return f.hash(); }
};

// Fully parenthesized canonical text; parse(to_string(f)) == f.
std::string to_string(const Formula& f, const AtomSet& atoms);

// Rewrites derived operators into Atom/True/False/Last/Not/And/Or/Next/Until.
Formula expand_derived(const Formula& f);

}  // namespace ecrl::ltlf
