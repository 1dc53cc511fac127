// Events, alphabets and traces.
//
// An Event is a finite set of atomic-proposition names; a name that is absent
// is false at that timestamp. The same type doubles as a plain set of names
// (component alphabets, rewriting scopes). Names are kept sorted, so the
// default vector ordering is the canonical lexicographic event order used for
// all deterministic tie-breaking.

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include "denf/errors.hpp"
#include "denf/formula.hpp"

namespace denf {

class Event {
 public:
  Event() = default;
  Event(std::initializer_list<std::string> names)
      : Event(std::vector<std::string>(names)) {}
  explicit Event(std::vector<std::string> names) : names_(std::move(names)) {
    std::sort(names_.begin(), names_.end());
    names_.erase(std::unique(names_.begin(), names_.end()), names_.end());
  }

  bool contains(std::string_view name) const {
    return std::binary_search(names_.begin(), names_.end(), name);
  }
  std::size_t size() const { return names_.size(); }
  bool empty() const { return names_.empty(); }
  auto begin() const { return names_.begin(); }
  auto end() const { return names_.end(); }
  const std::vector<std::string>& names() const { return names_; }

  friend bool operator==(const Event& a, const Event& b) { return a.names_ == b.names_; }
  friend bool operator!=(const Event& a, const Event& b) { return !(a == b); }
  // Canonical order: lexicographic over the sorted name sequences.
  friend bool operator<(const Event& a, const Event& b) { return a.names_ < b.names_; }

 private:
  std::vector<std::string> names_;  // sorted, unique
};

inline Event set_union(const Event& a, const Event& b) {
  std::vector<std::string> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return Event(std::move(out));
}

inline Event set_intersect(const Event& a, const Event& b) {
  std::vector<std::string> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return Event(std::move(out));
}

inline Event set_minus(const Event& a, const Event& b) {
  std::vector<std::string> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return Event(std::move(out));
}

inline bool is_subset(const Event& a, const Event& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

inline std::size_t hash_value(const Event& e) {
  std::size_t h = 0x811c9dc5;
  for (const auto& n : e) h = detail::hash_mix(h, std::hash<std::string>{}(n));
  return h;
}

// Number of propositions in `scope` whose value differs between the events.
inline std::uint64_t distance(const Event& a, const Event& b, const Event& scope) {
  std::uint64_t n = 0;
  for (const auto& p : scope)
    if (a.contains(p) != b.contains(p)) ++n;
  return n;
}

// All subsets of `scope`, ordered by (size, lexicographic) — the deterministic
// enumeration order of local observation candidates.
inline std::vector<Event> subsets_by_size_lex(const Event& scope) {
  const auto& names = scope.names();
  if (names.size() > 20) throw InternalError("subset enumeration scope too large");
  std::vector<Event> out;
  out.reserve(std::size_t{1} << names.size());
  for (std::uint32_t mask = 0; mask < (1u << names.size()); ++mask) {
    std::vector<std::string> subset;
    for (std::size_t i = 0; i < names.size(); ++i)
      if (mask & (1u << i)) subset.push_back(names[i]);
    out.push_back(Event(std::move(subset)));
  }
  std::sort(out.begin(), out.end(), [](const Event& a, const Event& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  return out;
}

using Trace = std::vector<Event>;

// The free atomic propositions occurring in a formula.
inline void collect_atoms(const Formula& f, std::vector<std::string>& out) {
  switch (arity(f.op())) {
    case 0:
      if (f.op() == Op::Atom) out.push_back(f.atom_name());
      return;
    case 1:
      collect_atoms(f.lhs(), out);
      return;
    default:
      collect_atoms(f.lhs(), out);
      collect_atoms(f.rhs(), out);
      return;
  }
}

inline Event ap_formula(const Formula& f) {
  std::vector<std::string> atoms;
  collect_atoms(f, atoms);
  return Event(std::move(atoms));
}

// Ordered list of pairwise-disjoint, nonempty component alphabets AP_1..AP_n.
class AlphabetPartition {
 public:
  explicit AlphabetPartition(std::vector<Event> components)
      : components_(std::move(components)) {
    if (components_.empty())
      throw std::invalid_argument("partition needs at least one component");
    for (std::size_t i = 0; i < components_.size(); ++i) {
      if (components_[i].empty())
        throw std::invalid_argument("partition component " + std::to_string(i + 1) +
                                    " is empty");
      global_ = set_union(global_, components_[i]);
    }
    std::size_t total = 0;
    for (const auto& c : components_) total += c.size();
    if (total != global_.size())
      throw std::invalid_argument("partition components are not pairwise disjoint");
  }

  std::size_t size() const { return components_.size(); }
  // Components are addressed 1-based, matching enforcer indices.
  const Event& component(std::size_t index) const {
    if (index < 1 || index > components_.size())
      throw std::out_of_range("component index out of range");
    return components_[index - 1];
  }
  const Event& global() const { return global_; }

 private:
  std::vector<Event> components_;
  Event global_;
};

}  // namespace denf
