// Independent reference machinery: LTL evaluation on lasso traces, bad-prefix
// checking by bounded extension enumeration, and a centralized brute-force
// enforcer used as the soundness/transparency/optimality yardstick.
//
// Evaluation compiles the formula into an indexed DAG of subformulas and
// labels every position of prefix·loop^ω with one bit per subformula. Loop
// positions are resolved bottom-up with a per-subformula fixpoint (greatest
// for G/R, least for F/U); prefix positions then follow from one backward
// pass over the exact expansion laws. None of this shares code with the
// simplify/rewrite path it is used to check — only the AST type.
//
// Capacity: at most 64 distinct subformulas and 20 distinct atoms per compiled
// formula. bad_prefix enumerates extensions u·v·w^ω with |v| <= loop_bound-1
// and |w| <= loop_bound over the formula's own alphabet; it is exact for
// formulas whose distinguishing extensions fit the bound.

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "denf/encoding.hpp"
#include "denf/errors.hpp"
#include "denf/event.hpp"
#include "denf/formula.hpp"
#include "denf/rewrite.hpp"
#include "denf/simplify.hpp"

namespace denf {

struct Lasso {
  Trace prefix;
  Trace loop;  // nonempty
};

enum class PrefixVerdict { Bad, NotBad };

namespace detail {

class CompiledFormula {
 public:
  explicit CompiledFormula(const Formula& f) {
    root_ = intern(f);
    if (atom_names_.size() > 32)
      throw OracleError("oracle supports at most 32 distinct atoms");
  }

  struct CNode {
    Op op;
    int lhs = -1, rhs = -1, atom = -1;
  };

  const std::vector<std::string>& atom_names() const { return atom_names_; }
  std::size_t node_count() const { return nodes_.size(); }
  const CNode& node(std::size_t i) const { return nodes_[i]; }
  int root() const { return root_; }

  std::uint32_t event_bits(const Event& e) const {
    std::uint32_t bits = 0;
    for (std::size_t a = 0; a < atom_names_.size(); ++a)
      if (e.contains(atom_names_[a])) bits |= 1u << a;
    return bits;
  }

  // Valuation at one position, given the valuation at the successor position.
  // Exact expansion laws; valid wherever the successor is fully resolved.
  std::uint64_t step(std::uint64_t next, std::uint32_t event) const {
    std::uint64_t cur = 0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      const CNode& n = nodes_[i];
      std::uint64_t bit = 0;
      switch (n.op) {
        case Op::True: bit = 1; break;
        case Op::False: bit = 0; break;
        case Op::Atom: bit = (event >> n.atom) & 1u; break;
        case Op::Not: bit = 1 ^ get(cur, n.lhs); break;
        case Op::And: bit = get(cur, n.lhs) & get(cur, n.rhs); break;
        case Op::Or: bit = get(cur, n.lhs) | get(cur, n.rhs); break;
        case Op::Implies: bit = (1 ^ get(cur, n.lhs)) | get(cur, n.rhs); break;
        case Op::Iff: bit = 1 ^ (get(cur, n.lhs) ^ get(cur, n.rhs)); break;
        case Op::Next: bit = get(next, n.lhs); break;
        case Op::Globally: bit = get(cur, n.lhs) & get(next, i); break;
        case Op::Eventually: bit = get(cur, n.lhs) | get(next, i); break;
        case Op::Until:
          bit = get(cur, n.rhs) | (get(cur, n.lhs) & get(next, i));
          break;
        case Op::Release:
          bit = get(cur, n.rhs) & (get(cur, n.lhs) | get(next, i));
          break;
      }
      cur |= bit << i;
    }
    return cur;
  }

  // Subformula valuations on the loop positions of prefix·loop^ω.
  std::vector<std::uint64_t> resolve_loop(const std::vector<std::uint32_t>& loop) const {
    const std::size_t k = loop.size();
    if (k == 0) throw OracleError("lasso loop must be nonempty");
    // vals[i] has bit p = value of subformula i at loop position p.
    std::vector<std::uint32_t> vals(nodes_.size(), 0);
    auto at = [&](int node, std::size_t p) -> std::uint32_t {
      return (vals[node] >> p) & 1u;
    };
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      const CNode& n = nodes_[i];
      std::uint32_t v = 0;
      switch (n.op) {
        case Op::True:
          v = (1u << k) - 1;
          break;
        case Op::False:
          v = 0;
          break;
        case Op::Atom:
          for (std::size_t p = 0; p < k; ++p) v |= ((loop[p] >> n.atom) & 1u) << p;
          break;
        case Op::Not:
          v = ~vals[n.lhs] & ((1u << k) - 1);
          break;
        case Op::And:
          v = vals[n.lhs] & vals[n.rhs];
          break;
        case Op::Or:
          v = vals[n.lhs] | vals[n.rhs];
          break;
        case Op::Implies:
          v = (~vals[n.lhs] | vals[n.rhs]) & ((1u << k) - 1);
          break;
        case Op::Iff:
          v = ~(vals[n.lhs] ^ vals[n.rhs]) & ((1u << k) - 1);
          break;
        case Op::Next:
          for (std::size_t p = 0; p < k; ++p) v |= at(n.lhs, (p + 1) % k) << p;
          break;
        default: {
          // G/R start from all-true (greatest fixpoint), F/U from all-false.
          const bool greatest = n.op == Op::Globally || n.op == Op::Release;
          v = greatest ? (1u << k) - 1 : 0;
          for (std::size_t sweep = 0; sweep <= k + 1; ++sweep) {
            std::uint32_t before = v;
            for (std::size_t pi = k; pi-- > 0;) {
              std::uint32_t self_next = (v >> ((pi + 1) % k)) & 1u;
              std::uint32_t bit = 0;
              switch (n.op) {
                case Op::Globally: bit = at(n.lhs, pi) & self_next; break;
                case Op::Eventually: bit = at(n.lhs, pi) | self_next; break;
                case Op::Until:
                  bit = at(n.rhs, pi) | (at(n.lhs, pi) & self_next);
                  break;
                default:  // Release
                  bit = at(n.rhs, pi) & (at(n.lhs, pi) | self_next);
                  break;
              }
              v = (v & ~(1u << pi)) | (bit << pi);
            }
            if (v == before) break;
          }
          break;
        }
      }
      vals[i] = v;
    }
    std::vector<std::uint64_t> masks(k, 0);
    for (std::size_t p = 0; p < k; ++p)
      for (std::size_t i = 0; i < nodes_.size(); ++i)
        masks[p] |= static_cast<std::uint64_t>(at(static_cast<int>(i), p)) << i;
    return masks;
  }

 private:
  static std::uint64_t get(std::uint64_t mask, int i) { return (mask >> i) & 1u; }

  int intern(const Formula& f) {
    int l = -1, r = -1, a = -1;
    if (arity(f.op()) >= 1) l = intern(f.lhs());
    if (arity(f.op()) == 2) r = intern(f.rhs());
    if (f.op() == Op::Atom) {
      auto [it, fresh] = atom_index_.emplace(f.atom_name(), atom_names_.size());
      if (fresh) atom_names_.push_back(f.atom_name());
      a = static_cast<int>(it->second);
    }
    auto key = std::make_tuple(f.op(), l, r, a);
    auto [it, fresh] = index_.emplace(key, nodes_.size());
    if (fresh) nodes_.push_back(CNode{f.op(), l, r, a});
    return static_cast<int>(it->second);
  }

  std::vector<CNode> nodes_;
  std::map<std::tuple<Op, int, int, int>, std::size_t> index_;
  std::map<std::string, std::size_t> atom_index_;
  std::vector<std::string> atom_names_;
  int root_ = -1;
};

}  // namespace detail

// Standard infinite-trace semantics on prefix·loop^ω. Full per-position
// labeling table; no limit on the number of subformulas or positions.
inline bool eval_lasso(const Formula& f, const Lasso& w) {
  if (w.loop.empty()) throw OracleError("lasso loop must be nonempty");
  detail::CompiledFormula cf(f);
  const std::size_t m = w.prefix.size();
  const std::size_t k = w.loop.size();
  const std::size_t n = m + k;
  auto succ = [&](std::size_t p) { return p + 1 < n ? p + 1 : m; };
  std::vector<std::uint32_t> ev(n);
  for (std::size_t p = 0; p < m; ++p) ev[p] = cf.event_bits(w.prefix[p]);
  for (std::size_t p = 0; p < k; ++p) ev[m + p] = cf.event_bits(w.loop[p]);

  std::vector<std::vector<std::uint8_t>> val(cf.node_count(),
                                             std::vector<std::uint8_t>(n, 0));
  for (std::size_t i = 0; i < cf.node_count(); ++i) {
    const auto& node = cf.node(i);
    auto expand = [&](std::size_t p, std::uint8_t self_next) -> std::uint8_t {
      switch (node.op) {
        case Op::Globally: return val[node.lhs][p] & self_next;
        case Op::Eventually: return val[node.lhs][p] | self_next;
        case Op::Until: return val[node.rhs][p] | (val[node.lhs][p] & self_next);
        default: return val[node.rhs][p] & (val[node.lhs][p] | self_next);  // Release
      }
    };
    switch (node.op) {
      case Op::True:
        for (std::size_t p = 0; p < n; ++p) val[i][p] = 1;
        break;
      case Op::False:
        break;
      case Op::Atom:
        for (std::size_t p = 0; p < n; ++p) val[i][p] = (ev[p] >> node.atom) & 1u;
        break;
      case Op::Not:
        for (std::size_t p = 0; p < n; ++p) val[i][p] = 1 ^ val[node.lhs][p];
        break;
      case Op::And:
        for (std::size_t p = 0; p < n; ++p)
          val[i][p] = val[node.lhs][p] & val[node.rhs][p];
        break;
      case Op::Or:
        for (std::size_t p = 0; p < n; ++p)
          val[i][p] = val[node.lhs][p] | val[node.rhs][p];
        break;
      case Op::Implies:
        for (std::size_t p = 0; p < n; ++p)
          val[i][p] = (1 ^ val[node.lhs][p]) | val[node.rhs][p];
        break;
      case Op::Iff:
        for (std::size_t p = 0; p < n; ++p)
          val[i][p] = 1 ^ (val[node.lhs][p] ^ val[node.rhs][p]);
        break;
      case Op::Next:
        for (std::size_t p = n; p-- > 0;) val[i][p] = val[node.lhs][succ(p)];
        break;
      default: {
        // Loop fixpoint first (greatest for G/R, least for F/U), then one
        // backward pass over the prefix.
        const bool greatest = node.op == Op::Globally || node.op == Op::Release;
        for (std::size_t p = m; p < n; ++p) val[i][p] = greatest ? 1 : 0;
        for (std::size_t sweep = 0; sweep <= k + 1; ++sweep) {
          bool changed = false;
          for (std::size_t p = n; p-- > m;) {
            std::uint8_t next = expand(p, val[i][succ(p)]);
            if (next != val[i][p]) {
              val[i][p] = next;
              changed = true;
            }
          }
          if (!changed) break;
        }
        for (std::size_t p = m; p-- > 0;) val[i][p] = expand(p, val[i][p + 1]);
        break;
      }
    }
  }
  return val[cf.root()][0] != 0;
}

// Bad iff no extension u·v·w^ω with |v| <= loop_bound-1, |w| <= loop_bound over
// 2^{ap_formula(f)} satisfies f.
inline PrefixVerdict bad_prefix(const Formula& f, const Trace& u, unsigned loop_bound = 3) {
  if (loop_bound < 1) throw std::invalid_argument("loop_bound must be >= 1");
  detail::CompiledFormula cf(f);
  if (cf.node_count() > 64)
    throw OracleError("bad_prefix supports at most 64 distinct subformulas");
  if (cf.atom_names().size() > 20)
    throw OracleError("bad_prefix supports at most 20 distinct atoms");
  const std::size_t n_atoms = cf.atom_names().size();
  std::vector<std::uint32_t> alphabet;
  for (std::uint32_t bits = 0; bits < (1u << n_atoms); ++bits) alphabet.push_back(bits);

  std::vector<std::uint32_t> prefix_bits;
  for (const auto& e : u) prefix_bits.push_back(cf.event_bits(e));

  std::unordered_map<std::uint64_t, bool> memo;
  auto satisfied_through_prefix = [&](std::uint64_t mask) {
    auto it = memo.find(mask);
    if (it != memo.end()) return it->second;
    std::uint64_t m = mask;
    for (std::size_t p = prefix_bits.size(); p-- > 0;) m = cf.step(m, prefix_bits[p]);
    bool ok = (m >> cf.root()) & 1u;
    memo.emplace(mask, ok);
    return ok;
  };

  std::vector<std::uint32_t> loop;
  std::vector<std::uint64_t> level, next_level;
  for (unsigned k = 1; k <= loop_bound; ++k) {
    loop.assign(k, 0);
    // Odometer over alphabet^k.
    while (true) {
      std::vector<std::uint32_t> loop_events(k);
      for (unsigned p = 0; p < k; ++p) loop_events[p] = alphabet[loop[p]];
      std::uint64_t entry = cf.resolve_loop(loop_events)[0];
      // All extensions v of length 0..loop_bound-1 in front of this loop.
      level.assign(1, entry);
      for (unsigned depth = 0;; ++depth) {
        for (std::uint64_t m : level)
          if (satisfied_through_prefix(m)) return PrefixVerdict::NotBad;
        if (depth + 1 >= loop_bound) break;
        next_level.clear();
        for (std::uint64_t m : level)
          for (std::uint32_t e : alphabet) next_level.push_back(cf.step(m, e));
        std::sort(next_level.begin(), next_level.end());
        next_level.erase(std::unique(next_level.begin(), next_level.end()),
                         next_level.end());
        level.swap(next_level);
      }
      // Advance the odometer.
      unsigned pos = 0;
      while (pos < k && ++loop[pos] == alphabet.size()) loop[pos++] = 0;
      if (pos == k) break;
    }
  }
  return PrefixVerdict::Bad;
}

inline bool satisfiable(const Formula& f, unsigned loop_bound = 3) {
  return bad_prefix(f, Trace{}, loop_bound) == PrefixVerdict::NotBad;
}

namespace detail {

inline bool eval_present(const Formula& p, const Event& e) {
  switch (p.op()) {
    case Op::True: return true;
    case Op::False: return false;
    case Op::Atom: return e.contains(p.atom_name());
    case Op::Not: return !eval_present(p.lhs(), e);
    case Op::And: return eval_present(p.lhs(), e) && eval_present(p.rhs(), e);
    case Op::Or: return eval_present(p.lhs(), e) || eval_present(p.rhs(), e);
    default:
      throw InternalError("present obligation is not propositional");
  }
}

}  // namespace detail

// Centralized brute-force enforcer: per timestamp it enumerates every event
// over the current obligation's atoms (other observed atoms pass through),
// keeps those that do not extend the output into a bad prefix of the original
// specification, and picks the minimum-distance one, preferring candidates
// whose remaining obligation collapses to true, with the lexicographic
// tie-break. Safety checking never touches the simplify/reduce path.
inline Trace reference_enforcer(const Formula& phi_init, const Trace& input,
                                unsigned loop_bound = 3) {
  if (simplifies_to_false(phi_init))
    throw SpecificationError("specification is equivalent to false");
  Formula phi = phi_init;
  Trace output;
  for (const Event& sigma : input) {
    const TopSet pairs = encode(to_dnf(rwt(phi)));
    const Event apf = ap_formula(phi);
    const Event passthrough = set_minus(sigma, apf);

    std::vector<Event> safe;
    for (const Event& x : subsets_by_size_lex(apf)) {
      Event candidate = set_union(x, passthrough);
      Trace extended = output;
      extended.push_back(candidate);
      if (bad_prefix(phi_init, extended, loop_bound) == PrefixVerdict::NotBad)
        safe.push_back(std::move(candidate));
    }
    if (safe.empty())
      throw OracleError("no safe candidate event within the oracle bounds");

    std::uint64_t best = UINT64_MAX;
    for (const Event& e : safe) best = std::min(best, distance(sigma, e, apf));
    std::vector<Event> candidates;
    for (const Event& e : safe)
      if (distance(sigma, e, apf) == best) candidates.push_back(e);

    auto collapses_to_true = [&](const Event& e) {
      for (const auto& top : pairs)
        if (top.future.op() == Op::True && detail::eval_present(top.present, e))
          return true;
      return false;
    };
    bool any_true = false;
    for (const Event& e : candidates) any_true |= collapses_to_true(e);
    if (any_true)
      std::erase_if(candidates, [&](const Event& e) { return !collapses_to_true(e); });

    Event chosen = *std::min_element(candidates.begin(), candidates.end());
    output.push_back(chosen);

    Formula next = make_false();
    for (const auto& top : pairs)
      if (detail::eval_present(top.present, chosen) && !simplifies_to_false(top.future))
        next = make_or(std::move(next), top.future);
    phi = simplify(next);
    if (phi.op() == Op::False)
      throw OracleError("remaining obligation collapsed to false");
  }
  return output;
}

}  // namespace denf
