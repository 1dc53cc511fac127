// Temporal obligation pairs and the temporal correction log.
//
// A Top splits one TDNF monomial into its present obligation (a propositional
// constraint on the current event) and its future obligation (the conjunction
// of X-stripped subformulas to carry into the next timestamp). A TopSet is an
// insertion-ordered, deduplicated set of pairs and stands for the disjunction
// of its monomials. The Tcl maps candidate output events to the TopSet that
// would remain if that event were emitted, together with its edit distance
// from the observed event.

#pragma once

#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "denf/errors.hpp"
#include "denf/event.hpp"
#include "denf/formula.hpp"
#include "denf/formula_text.hpp"
#include "denf/simplify.hpp"

namespace denf {

struct Top {
  Formula present;
  Formula future;

  friend bool operator==(const Top& a, const Top& b) {
    return a.present == b.present && a.future == b.future;
  }
  friend bool operator!=(const Top& a, const Top& b) { return !(a == b); }
};

class TopSet {
 public:
  TopSet() = default;

  void insert(Top t) {
    for (const auto& existing : items_)
      if (existing == t) return;
    items_.push_back(std::move(t));
  }

  bool has_top_top() const {
    for (const auto& t : items_)
      if (t.present.op() == Op::True && t.future.op() == Op::True) return true;
    return false;
  }

  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  auto begin() const { return items_.begin(); }
  auto end() const { return items_.end(); }
  const Top& operator[](std::size_t i) const { return items_[i]; }

  friend bool operator==(const TopSet& a, const TopSet& b) { return a.items_ == b.items_; }
  friend bool operator!=(const TopSet& a, const TopSet& b) { return !(a == b); }

 private:
  std::vector<Top> items_;
};

namespace detail {

inline void encode_rec(const Formula& f, TopSet& out);

// A monomial encodes to exactly one pair.
inline Top encode_monomial(const Formula& f) {
  switch (f.op()) {
    case Op::True:
    case Op::False:
    case Op::Atom:
      return Top{f, make_true()};
    case Op::Not:
      if (f.lhs().op() != Op::Atom)
        throw EncodeError("negation of a non-atom in a TDNF monomial: " +
                          print_formula(f));
      return Top{f, make_true()};
    case Op::Next:
      return Top{make_true(), simplify(f.lhs())};
    case Op::And: {
      if (f.lhs().op() == Op::Or || f.rhs().op() == Op::Or)
        throw EncodeError("disjunction inside a monomial: " + print_formula(f));
      Top l = encode_monomial(f.lhs());
      Top r = encode_monomial(f.rhs());
      return Top{simplify(make_and(l.present, r.present)),
                 simplify(make_and(l.future, r.future))};
    }
    default:
      throw EncodeError("operator not allowed in a TDNF monomial: " + print_formula(f));
  }
}

inline void encode_rec(const Formula& f, TopSet& out) {
  if (f.op() == Op::Or) {
    encode_rec(f.lhs(), out);
    encode_rec(f.rhs(), out);
    return;
  }
  out.insert(encode_monomial(f));
}

}  // namespace detail

// Requires a formula in TDNF (the output of to_dnf over rwt output).
inline TopSet encode(const Formula& f) {
  TopSet out;
  detail::encode_rec(f, out);
  return out;
}

struct TclImage {
  TopSet tops;
  std::uint64_t dist = 0;

  friend bool operator==(const TclImage& a, const TclImage& b) {
    return a.dist == b.dist && a.tops == b.tops;
  }
  friend bool operator!=(const TclImage& a, const TclImage& b) { return !(a == b); }
};

// Partial map Event -> (TopSet, distance). Iteration is deterministic
// (canonical event order).
class Tcl {
 public:
  Tcl() = default;

  void insert(Event e, TclImage image) {
    auto [it, fresh] = entries_.emplace(std::move(e), std::move(image));
    if (!fresh)
      throw InternalError("duplicate TCL entry for event " + event_text(it->first));
  }

  bool contains(const Event& e) const { return entries_.count(e) != 0; }
  const TclImage& at(const Event& e) const {
    auto it = entries_.find(e);
    if (it == entries_.end())
      throw InternalError("TCL has no entry for event " + event_text(e));
    return it->second;
  }

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  friend bool operator==(const Tcl& a, const Tcl& b) { return a.entries_ == b.entries_; }
  friend bool operator!=(const Tcl& a, const Tcl& b) { return !(a == b); }

  static std::string event_text(const Event& e) {
    std::string out = "{";
    bool first = true;
    for (const auto& name : e) {
      if (!first) out += ',';
      out += name;
      first = false;
    }
    out += '}';
    return out;
  }

 private:
  std::map<Event, TclImage> entries_;
};

// Atomic propositions not yet evaluated in any present obligation.
inline Event apr(const Tcl& tcl) {
  Event out;
  for (const auto& [event, image] : tcl)
    for (const auto& top : image.tops) out = set_union(out, ap_formula(top.present));
  return out;
}

// Rewriting of a present obligation with a local observation: atoms the
// enforcer owns become constants, everything else is left for later; the
// result is constant-folded.
inline Formula rw_local(const Formula& present, const Event& obs, const Event& local_ap) {
  struct Sub {
    const Event& obs;
    const Event& local_ap;
    Formula operator()(const Formula& f) const {
      switch (f.op()) {
        case Op::True:
        case Op::False:
          return f;
        case Op::Atom:
          if (obs.contains(f.atom_name())) return make_true();
          if (local_ap.contains(f.atom_name())) return make_false();
          return f;
        case Op::Not:
          return make_not((*this)(f.lhs()));
        case Op::And:
          return make_and((*this)(f.lhs()), (*this)(f.rhs()));
        case Op::Or:
          return make_or((*this)(f.lhs()), (*this)(f.rhs()));
        default:
          throw InternalError("present obligation contains a non-propositional operator: " +
                              print_formula(f));
      }
    }
  };
  return simplify(Sub{obs, local_ap}(present));
}

// One evaluation step: every entry is replaced by one entry per local
// observation candidate over scope = local_ap ∩ apr(tcl), with presents
// rewritten and the distance increased by the disagreement with sigma_local
// on that scope. Futures are never rewritten here. The scope is fixed at
// entry, before any rewriting.
inline Tcl update_tcl(const Tcl& tcl, const Event& sigma_local, const Event& local_ap) {
  const Event scope = set_intersect(local_ap, apr(tcl));
  const std::vector<Event> candidates = subsets_by_size_lex(scope);
  Tcl out;
  for (const auto& [event, image] : tcl) {
    for (const auto& candidate : candidates) {
      TopSet tops;
      for (const auto& top : image.tops)
        tops.insert(Top{rw_local(top.present, candidate, local_ap), top.future});
      out.insert(set_union(event, candidate),
                 TclImage{std::move(tops),
                          image.dist + distance(candidate, sigma_local, scope)});
    }
  }
  return out;
}

// Drops pairs whose present or future obligation simplifies to false, then
// drops events whose TopSet became empty: those satisfy no present obligation
// and would extend the output into a bad prefix.
inline Tcl reduce(const Tcl& tcl) {
  Tcl out;
  for (const auto& [event, image] : tcl) {
    TopSet kept;
    for (const auto& top : image.tops) {
      if (simplify(top.present).op() == Op::False) continue;
      if (simplify(top.future).op() == Op::False) continue;
      kept.insert(top);
    }
    if (!kept.empty()) out.insert(event, TclImage{std::move(kept), image.dist});
  }
  return out;
}

// Canonical text: one line per entry, sorted by (distance, event).
inline std::string entry_line(const Event& event, const TclImage& image) {
  std::string out = Tcl::event_text(event) + " -> dist=" + std::to_string(image.dist);
  for (const auto& top : image.tops)
    out += " ; (" + print_formula(top.present) + " | " + print_formula(top.future) + ")";
  return out;
}

inline std::string to_text(const Tcl& tcl) {
  std::vector<std::pair<Event, TclImage>> rows(tcl.begin(), tcl.end());
  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    if (a.second.dist != b.second.dist) return a.second.dist < b.second.dist;
    return a.first < b.first;
  });
  std::string out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i) out += '\n';
    out += entry_line(rows[i].first, rows[i].second);
  }
  return out;
}

}  // namespace denf
