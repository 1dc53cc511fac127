// Syntactic simplification.
//
// The rule set is fixed and purely structural: constant folding (true/false
// units and absorbers for &, |, !), contradiction and tautology on literal
// multisets within one connective chain (p & !p -> false, p | !p -> true),
// idempotence / duplicate-disjunct removal, and X true -> true. Chains of &
// and | are flattened and rebuilt left-nested in first-occurrence order, which
// makes the result canonical with respect to associativity. Beneath G, F, U
// and R only constant folding is applied; operand shape is preserved there.
//
// A formula equivalent to false is not always reduced to false — this is the
// documented syntactic approximation used by every "not equivalent to false"
// test outside the oracle.

#pragma once

#include <string>
#include <vector>

#include "denf/errors.hpp"
#include "denf/formula.hpp"

namespace denf {

namespace detail {

inline Formula simplify_rec(const Formula& f, bool full);

inline void flatten_chain(Op op, const Formula& f, std::vector<Formula>& out) {
  if (f.op() == op) {
    flatten_chain(op, f.lhs(), out);
    flatten_chain(op, f.rhs(), out);
  } else {
    out.push_back(f);
  }
}

// Rebuild a left-nested chain: [a,b,c] -> And(And(a,b),c).
inline Formula rebuild_chain(Op op, const std::vector<Formula>& items) {
  Formula acc = items.front();
  for (std::size_t i = 1; i < items.size(); ++i)
    acc = op == Op::And ? make_and(acc, items[i]) : make_or(acc, items[i]);
  return acc;
}

inline bool chain_has_complementary_literals(const std::vector<Formula>& items) {
  for (const auto& x : items) {
    if (x.op() != Op::Atom) continue;
    for (const auto& y : items)
      if (y.op() == Op::Not && y.lhs().op() == Op::Atom &&
          y.lhs().atom_name() == x.atom_name())
        return true;
  }
  return false;
}

inline Formula simplify_chain(Op op, const Formula& l, const Formula& r, bool full) {
  const Formula unit = op == Op::And ? make_true() : make_false();
  const Formula absorber = op == Op::And ? make_false() : make_true();
  if (!full) {
    if (l == absorber || r == absorber) return absorber;
    if (l == unit) return r;
    if (r == unit) return l;
    return op == Op::And ? make_and(l, r) : make_or(l, r);
  }
  std::vector<Formula> items;
  flatten_chain(op, l, items);
  flatten_chain(op, r, items);
  std::vector<Formula> kept;
  for (const auto& x : items) {
    if (x == absorber) return absorber;
    if (x == unit) continue;
    bool duplicate = false;
    for (const auto& y : kept)
      if (x == y) { duplicate = true; break; }
    if (!duplicate) kept.push_back(x);
  }
  if (kept.empty()) return unit;
  if (chain_has_complementary_literals(kept)) return absorber;
  return rebuild_chain(op, kept);
}

inline Formula simplify_rec(const Formula& f, bool full) {
  switch (f.op()) {
    case Op::True:
    case Op::False:
    case Op::Atom:
      return f;
    case Op::Not: {
      Formula c = simplify_rec(f.lhs(), full);
      if (c.op() == Op::True) return make_false();
      if (c.op() == Op::False) return make_true();
      return make_not(std::move(c));
    }
    case Op::And:
    case Op::Or:
      return simplify_chain(f.op(), simplify_rec(f.lhs(), full),
                            simplify_rec(f.rhs(), full), full);
    case Op::Implies:
    case Op::Iff: {
      // No dedicated rules; these only occur before normal-form rewriting.
      Formula l = simplify_rec(f.lhs(), full);
      Formula r = simplify_rec(f.rhs(), full);
      return f.op() == Op::Implies ? make_implies(std::move(l), std::move(r))
                                   : make_iff(std::move(l), std::move(r));
    }
    case Op::Next: {
      Formula c = simplify_rec(f.lhs(), full);
      if (full && c.op() == Op::True) return make_true();
      return make_next(std::move(c));
    }
    case Op::Globally:
      return make_globally(simplify_rec(f.lhs(), false));
    case Op::Eventually:
      return make_eventually(simplify_rec(f.lhs(), false));
    case Op::Until:
      return make_until(simplify_rec(f.lhs(), false), simplify_rec(f.rhs(), false));
    case Op::Release:
      return make_release(simplify_rec(f.lhs(), false), simplify_rec(f.rhs(), false));
  }
  return f;
}

}  // namespace detail

inline Formula simplify(const Formula& f) {
  Formula cur = f;
  for (int round = 0; round < 64; ++round) {
    Formula next = detail::simplify_rec(cur, true);
    if (next == cur) return cur;
    cur = std::move(next);
  }
  throw InternalError("simplify did not reach a fixpoint");
}

inline bool simplifies_to_false(const Formula& f) {
  return simplify(f).op() == Op::False;
}

}  // namespace denf
