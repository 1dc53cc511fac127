// Rewriting pipeline: expansion of temporal operators, negation pushing,
// normal form, DNF test, distribution, and the combined transformation to
// (temporal) disjunctive normal form.
//
// rwt applies the expansion laws (G p = p & X G p, F p = p | X F p,
// p U q = q | (p & X(p U q)), p R q = q & (p | X(p R q))), after which every
// temporal operator other than X sits below an X. to_dnf then normalizes and
// distributes & over | until the formula is a disjunction of monomials. For a
// formula coming out of rwt the result is in TDNF: each monomial is a
// conjunction of literals and X-guarded subformulas.

#pragma once

#include "denf/errors.hpp"
#include "denf/formula.hpp"

namespace denf {

inline Formula rwt(const Formula& f) {
  switch (f.op()) {
    case Op::True:
    case Op::False:
    case Op::Atom:
    case Op::Next:  // X operands are left for the next timestamp
      return f;
    case Op::Not:
      return make_not(rwt(f.lhs()));
    case Op::And:
      return make_and(rwt(f.lhs()), rwt(f.rhs()));
    case Op::Or:
      return make_or(rwt(f.lhs()), rwt(f.rhs()));
    case Op::Implies:
      return make_implies(rwt(f.lhs()), rwt(f.rhs()));
    case Op::Iff:
      return make_iff(rwt(f.lhs()), rwt(f.rhs()));
    case Op::Globally:
      return make_and(rwt(f.lhs()), make_next(f));
    case Op::Eventually:
      return make_or(rwt(f.lhs()), make_next(f));
    case Op::Until:
      return make_or(rwt(f.rhs()), make_and(rwt(f.lhs()), make_next(f)));
    case Op::Release:
      return make_and(rwt(f.rhs()), make_or(rwt(f.lhs()), make_next(f)));
  }
  return f;
}

// Negation of a formula: pushes the negation one level, dualizing operators.
inline Formula neg_f(const Formula& f) {
  switch (f.op()) {
    case Op::True:
      return make_false();
    case Op::False:
      return make_true();
    case Op::Atom:
      return make_not(f);
    case Op::Not:
      return f.lhs();
    case Op::And:
      return make_or(neg_f(f.lhs()), neg_f(f.rhs()));
    case Op::Or:
      return make_and(neg_f(f.lhs()), neg_f(f.rhs()));
    case Op::Implies:
      return make_and(f.lhs(), neg_f(f.rhs()));
    case Op::Iff:
      return make_or(make_and(neg_f(f.lhs()), f.rhs()),
                     make_and(f.lhs(), neg_f(f.rhs())));
    case Op::Next:
      return make_next(neg_f(f.lhs()));
    case Op::Globally:
      return make_eventually(neg_f(f.lhs()));
    case Op::Eventually:
      return make_globally(neg_f(f.lhs()));
    case Op::Until:
      return make_release(neg_f(f.lhs()), neg_f(f.rhs()));
    case Op::Release:
      return make_until(neg_f(f.lhs()), neg_f(f.rhs()));
  }
  return f;
}

// Normal form: no -> or <->, negation only on atoms (outside temporal
// operators; temporal operands are left untouched and get normalized when
// they surface as a later obligation).
inline Formula nf(const Formula& f) {
  switch (f.op()) {
    case Op::True:
    case Op::False:
    case Op::Atom:
    case Op::Next:
    case Op::Globally:
    case Op::Eventually:
    case Op::Until:
    case Op::Release:
      return f;
    case Op::Not:
      if (f.lhs().op() == Op::Atom) return f;
      return nf(neg_f(f.lhs()));
    case Op::And:
      return make_and(nf(f.lhs()), nf(f.rhs()));
    case Op::Or:
      return make_or(nf(f.lhs()), nf(f.rhs()));
    case Op::Implies:
      return make_or(nf(make_not(f.lhs())), nf(f.rhs()));
    case Op::Iff:
      return make_or(make_and(nf(f.lhs()), nf(f.rhs())),
                     make_and(nf(make_not(f.lhs())), nf(make_not(f.rhs()))));
  }
  return f;
}

// DNF test. `in_monomial` is set while scanning below a conjunction: a
// disjunction there means the formula is not in DNF. Temporal operators are
// opaque (a monomial may conjoin them), and constants count as literals.
inline bool is_dnf(const Formula& f, bool in_monomial) {
  switch (f.op()) {
    case Op::Or:
      if (in_monomial) return false;
      return is_dnf(f.lhs(), false) && is_dnf(f.rhs(), false);
    case Op::And:
      return is_dnf(f.lhs(), true) && is_dnf(f.rhs(), true);
    case Op::Not:
      return f.lhs().op() == Op::Atom;
    case Op::Implies:
    case Op::Iff:
      return false;
    default:
      return true;
  }
}

// One pass of distributing & over |. Operand order is preserved so monomials
// stay in source order.
inline Formula distrib(const Formula& f) {
  switch (f.op()) {
    case Op::And: {
      const Formula& l = f.lhs();
      const Formula& r = f.rhs();
      if (r.op() == Op::Or)
        return make_or(distrib(make_and(l, r.lhs())), distrib(make_and(l, r.rhs())));
      if (l.op() == Op::Or)
        return make_or(distrib(make_and(l.lhs(), r)), distrib(make_and(l.rhs(), r)));
      return make_and(distrib(l), distrib(r));
    }
    case Op::Or:
      return make_or(distrib(f.lhs()), distrib(f.rhs()));
    default:
      return f;
  }
}

inline Formula to_dnf(const Formula& f) {
  Formula g = nf(f);
  while (!is_dnf(g, false)) {
    Formula next = distrib(g);
    if (next == g)
      throw InternalError("distribution stalled on a formula not in DNF");
    g = std::move(next);
  }
  return g;
}

// True when every temporal operator other than X has an X ancestor.
inline bool non_next_temporals_guarded(const Formula& f) {
  if (f.op() == Op::Next) return true;
  if (is_temporal(f.op())) return false;
  switch (arity(f.op())) {
    case 0:
      return true;
    case 1:
      return non_next_temporals_guarded(f.lhs());
    default:
      return non_next_temporals_guarded(f.lhs()) && non_next_temporals_guarded(f.rhs());
  }
}

}  // namespace denf
