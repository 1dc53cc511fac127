// LTL abstract syntax trees over named atomic propositions.
//
// A Formula is an immutable value: nodes are shared through shared_ptr and
// never mutated, so formulas can be copied, stored in containers and handed
// across threads freely. Structural equality is the only notion of equality
// used in this library; every node caches a structural hash so that negative
// comparisons are O(1).

#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>

namespace denf {

enum class Op : std::uint8_t {
  True,
  False,
  Atom,
  Not,
  And,
  Or,
  Implies,
  Iff,
  Next,
  Globally,
  Eventually,
  Until,
  Release,
};

constexpr bool is_temporal(Op op) {
  return op == Op::Next || op == Op::Globally || op == Op::Eventually ||
         op == Op::Until || op == Op::Release;
}

constexpr int arity(Op op) {
  switch (op) {
    case Op::True:
    case Op::False:
    case Op::Atom:
      return 0;
    case Op::Not:
    case Op::Next:
    case Op::Globally:
    case Op::Eventually:
      return 1;
    default:
      return 2;
  }
}

struct FormulaNode;

class Formula {
 public:
  // Default-constructed formulas are empty handles; factories never return one.
  Formula() = default;

  bool valid() const { return node_ != nullptr; }
  Op op() const;
  const std::string& atom_name() const;
  const Formula& lhs() const;
  const Formula& rhs() const;
  std::size_t hash() const;

  friend bool operator==(const Formula& a, const Formula& b);
  friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }

 private:
  explicit Formula(std::shared_ptr<const FormulaNode> node) : node_(std::move(node)) {}
  std::shared_ptr<const FormulaNode> node_;

  friend Formula detail_make(Op op, std::string atom, Formula lhs, Formula rhs);
};

struct FormulaNode {
  Op op;
  std::string atom;  // Atom nodes only
  Formula lhs;
  Formula rhs;
  std::size_t hash;
};

namespace detail {
inline std::size_t hash_mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}
}  // namespace detail

inline Formula detail_make(Op op, std::string atom, Formula lhs, Formula rhs) {
  std::size_t h = detail::hash_mix(0x5bf03635, static_cast<std::size_t>(op));
  if (!atom.empty()) h = detail::hash_mix(h, std::hash<std::string>{}(atom));
  if (lhs.valid()) h = detail::hash_mix(h, lhs.hash());
  if (rhs.valid()) h = detail::hash_mix(h, rhs.hash());
  auto node = std::make_shared<const FormulaNode>(
      FormulaNode{op, std::move(atom), std::move(lhs), std::move(rhs), h});
  return Formula(std::move(node));
}

inline Op Formula::op() const { return node_->op; }
inline const std::string& Formula::atom_name() const { return node_->atom; }
inline const Formula& Formula::lhs() const { return node_->lhs; }
inline const Formula& Formula::rhs() const { return node_->rhs; }
inline std::size_t Formula::hash() const { return node_->hash; }

inline bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  const FormulaNode& x = *a.node_;
  const FormulaNode& y = *b.node_;
  if (x.hash != y.hash || x.op != y.op || x.atom != y.atom) return false;
  if (arity(x.op) >= 1 && !(x.lhs == y.lhs)) return false;
  if (arity(x.op) == 2 && !(x.rhs == y.rhs)) return false;
  return true;
}

// The two constants are shared singletons.
inline Formula make_true() {
  static const Formula t = detail_make(Op::True, {}, {}, {});
  return t;
}
inline Formula make_false() {
  static const Formula f = detail_make(Op::False, {}, {}, {});
  return f;
}
inline Formula make_atom(std::string name) {
  if (name.empty()) throw std::invalid_argument("atom name must be nonempty");
  return detail_make(Op::Atom, std::move(name), {}, {});
}
inline Formula make_not(Formula f) { return detail_make(Op::Not, {}, std::move(f), {}); }
inline Formula make_and(Formula a, Formula b) {
  return detail_make(Op::And, {}, std::move(a), std::move(b));
}
inline Formula make_or(Formula a, Formula b) {
  return detail_make(Op::Or, {}, std::move(a), std::move(b));
}
inline Formula make_implies(Formula a, Formula b) {
  return detail_make(Op::Implies, {}, std::move(a), std::move(b));
}
inline Formula make_iff(Formula a, Formula b) {
  return detail_make(Op::Iff, {}, std::move(a), std::move(b));
}
inline Formula make_next(Formula f) { return detail_make(Op::Next, {}, std::move(f), {}); }
inline Formula make_globally(Formula f) {
  return detail_make(Op::Globally, {}, std::move(f), {});
}
inline Formula make_eventually(Formula f) {
  return detail_make(Op::Eventually, {}, std::move(f), {});
}
inline Formula make_until(Formula a, Formula b) {
  return detail_make(Op::Until, {}, std::move(a), std::move(b));
}
inline Formula make_release(Formula a, Formula b) {
  return detail_make(Op::Release, {}, std::move(a), std::move(b));
}

inline bool is_constant(const Formula& f) {
  return f.op() == Op::True || f.op() == Op::False;
}

// Literal: an atom or a negated atom.
inline bool is_literal(const Formula& f) {
  return f.op() == Op::Atom || (f.op() == Op::Not && f.lhs().op() == Op::Atom);
}

}  // namespace denf
