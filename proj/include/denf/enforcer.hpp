// Enforcer state machines for the two protocols.
//
// Global exploration: the correction log travels along the enforcers that can
// still evaluate something, each one branching its domain over its own local
// observation candidates; the last one broadcasts the final log and every
// enforcer applies the same deterministic decision rule.
//
// Local exploration: after its own update each enforcer immediately commits to
// one candidate event and forwards only that single entry; the last enforcer
// decides, builds the next formula and broadcasts it.

#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "denf/encoding.hpp"
#include "denf/errors.hpp"
#include "denf/event.hpp"
#include "denf/formula.hpp"
#include "denf/formula_text.hpp"
#include "denf/rewrite.hpp"
#include "denf/simplify.hpp"

namespace denf {

enum class Algorithm { Global, Local };

struct EnforcerConfig {
  std::size_t index;  // 1-based; enforcer 1 initiates every round
  AlphabetPartition partition;
  Algorithm algorithm;

  const Event& local_ap() const { return partition.component(index); }
};

// Inter-enforcer payloads. TclEntry and NextFormula belong to the local
// protocol, FinalBroadcast to the global one.
struct TclTransfer {
  Tcl tcl;
};
struct TclEntry {
  Event event;
  TopSet tops;
  std::uint64_t dist = 0;
};
struct FinalBroadcast {
  Tcl tcl;
};
struct NextFormula {
  Formula formula;
};
using Message = std::variant<TclTransfer, TclEntry, FinalBroadcast, NextFormula>;

inline std::string serialize(const Message& m) {
  struct V {
    std::string operator()(const TclTransfer& t) const { return "TCL\n" + to_text(t.tcl); }
    std::string operator()(const TclEntry& e) const {
      return "ENTRY\n" + entry_line(e.event, TclImage{e.tops, e.dist});
    }
    std::string operator()(const FinalBroadcast& t) const {
      return "FINAL\n" + to_text(t.tcl);
    }
    std::string operator()(const NextFormula& n) const {
      return "NEXT\n" + print_formula(n.formula);
    }
  };
  return std::visit(V{}, m);
}

inline std::size_t entry_count(const Message& m) {
  struct V {
    std::size_t operator()(const TclTransfer& t) const { return t.tcl.size(); }
    std::size_t operator()(const TclEntry&) const { return 1; }
    std::size_t operator()(const FinalBroadcast& t) const { return t.tcl.size(); }
    std::size_t operator()(const NextFormula&) const { return 0; }
  };
  return std::visit(V{}, m);
}

struct RoundStats {
  std::uint64_t messages_sent = 0;
  std::size_t max_message_entries = 0;
  std::size_t max_domain_size = 0;
};

struct RoundOutcome {
  Event chosen_event;                // includes pass-through atoms
  std::vector<Event> local_outputs;  // local_outputs[i-1] = chosen_event ∩ AP_i
  Formula next_formula;
  RoundStats stats;
};

// tcl(∅) = (encode(DNF(rwT(φ))), 0). Rejects specifications that already
// simplify to false.
inline Tcl init_state(const Formula& phi) {
  if (simplifies_to_false(phi))
    throw SpecificationError("specification is equivalent to false");
  Tcl tcl;
  tcl.insert(Event{}, TclImage{encode(to_dnf(rwt(phi))), 0});
  return tcl;
}

// Next hop: the smallest-index enforcer (other than self) that can observe a
// remaining atom. Empty optional means the evaluation is complete.
inline std::optional<std::size_t> route_next(const Tcl& tcl, std::size_t self,
                                             const AlphabetPartition& partition) {
  const Event remaining = apr(tcl);
  if (remaining.empty()) return std::nullopt;
  for (std::size_t k = 1; k <= partition.size(); ++k) {
    if (k == self) continue;
    if (!set_intersect(partition.component(k), remaining).empty()) return k;
  }
  throw InternalError("no enforcer can observe remaining atoms " +
                      Tcl::event_text(remaining));
}

// Disjunction of the future obligations of a TopSet, simplified.
inline Formula next_formula_from(const TopSet& tops) {
  Formula acc = make_false();
  for (const auto& top : tops) acc = make_or(std::move(acc), top.future);
  return simplify(acc);
}

namespace detail {

// Shared decision core: minimal distance first, then either the (true, true)
// restriction (final decisions: the next formula can be collapsed to true) or
// the most-models restriction (local forwarding), then the lexicographically
// smallest event. Tcl iteration order is already the canonical event order.
inline Event decide_event(const Tcl& tcl, bool forwarding) {
  if (tcl.empty()) throw InternalError("decision on an empty TCL domain");
  std::uint64_t min_dist = UINT64_MAX;
  for (const auto& [event, image] : tcl) min_dist = std::min(min_dist, image.dist);
  std::vector<const std::pair<const Event, TclImage>*> candidates;
  for (const auto& entry : tcl)
    if (entry.second.dist == min_dist) candidates.push_back(&entry);
  if (forwarding) {
    std::size_t most = 0;
    for (const auto* c : candidates) most = std::max(most, c->second.tops.size());
    std::erase_if(candidates, [&](const auto* c) { return c->second.tops.size() != most; });
  } else {
    bool any_top_top = false;
    for (const auto* c : candidates) any_top_top |= c->second.tops.has_top_top();
    if (any_top_top)
      std::erase_if(candidates, [](const auto* c) { return !c->second.tops.has_top_top(); });
  }
  return candidates.front()->first;
}

}  // namespace detail

// Final decision rule of the global algorithm. sigma is the global input
// event; it is only needed to check the transparency invariant that a
// distance-0 entry can only be sigma itself restricted to the evaluated atoms.
inline std::pair<Event, Formula> global_decision(const Tcl& t_final, const Event& sigma) {
  for (const auto& [event, image] : t_final)
    if (image.dist == 0 && !is_subset(event, sigma))
      throw InternalError("distance-0 entry " + Tcl::event_text(event) +
                          " is not part of the observed event");
  Event chosen = detail::decide_event(t_final, /*forwarding=*/false);
  return {chosen, next_formula_from(t_final.at(chosen).tops)};
}

// Local decision rule: forwarding decisions keep the entry with the most
// models; the final decision applies the (true, true) restriction.
inline Event local_decision(const Tcl& tcl, bool remaining_ap_nonempty) {
  return detail::decide_event(tcl, /*forwarding=*/remaining_ap_nonempty);
}

struct LocalObservation {
  Event sigma_local;
};
struct Incoming {
  std::size_t from;
  Message msg;
};
using EnforcerInput = std::variant<LocalObservation, Incoming>;

struct Outgoing {
  std::size_t dest;
  Message msg;
};

// Domain sizes recorded around an update, for logs and bound checks.
struct StepRecord {
  std::size_t domain_after_update = 0;
  std::size_t domain_after_reduce = 0;
};

class Enforcer {
 public:
  Enforcer(EnforcerConfig cfg, Formula phi_init)
      : cfg_(std::move(cfg)), phi_(std::move(phi_init)) {}

  std::size_t index() const { return cfg_.index; }
  const EnforcerConfig& config() const { return cfg_; }
  const Formula& current_formula() const { return phi_; }

  std::vector<Outgoing> step(const EnforcerInput& input) {
    if (const auto* obs = std::get_if<LocalObservation>(&input))
      return on_observation(*obs);
    const auto& incoming = std::get<Incoming>(input);
    return std::visit([&](const auto& msg) { return on_message(msg); }, incoming.msg);
  }

  bool decided() const { return phase_ == Phase::Done; }

  // The event this enforcer committed to, over evaluated atoms only. In local
  // mode a forwarder's choice agrees with the final decision on its own atoms.
  const Event& chosen_core() const {
    require_decided();
    static const Event empty;
    return chosen_ ? *chosen_ : empty;
  }

  // False for an enforcer that only learned the next formula (local mode,
  // never visited): it committed to nothing.
  bool has_choice() const {
    require_decided();
    return chosen_.has_value();
  }

  const Formula& next_formula() const {
    require_decided();
    if (!next_) throw InternalError("enforcer finished without a next formula");
    return *next_;
  }

  // True when this enforcer ran the final decision itself (global: always;
  // local: only the last enforcer of the chain).
  bool computed_decision() const {
    require_decided();
    return final_computed_;
  }

  // Local view of the corrected event: the decided atoms this enforcer owns
  // plus its unevaluated observations passed through untouched.
  Event local_output() const {
    require_decided();
    Event core = chosen_ ? set_intersect(*chosen_, cfg_.local_ap()) : Event{};
    Event passthrough = scope_ ? set_minus(sigma(), *scope_) : sigma();
    return set_union(core, passthrough);
  }

  const std::vector<StepRecord>& step_records() const { return records_; }
  const std::optional<Event>& update_scope() const { return scope_; }
  bool transfer_carried_final() const { return transfer_was_final_; }

  // Adopt the agreed next formula and reset for the next round.
  void commit_round(const Formula& next_phi) {
    require_decided();
    if (next_ && *next_ != next_phi)
      throw InternalError("enforcer " + std::to_string(cfg_.index) +
                          " disagrees on the next formula");
    phi_ = next_phi;
    phase_ = Phase::AwaitObservation;
    sigma_local_.reset();
    scope_.reset();
    chosen_.reset();
    next_.reset();
    final_computed_ = false;
    transfer_was_final_ = false;
    records_.clear();
  }

 private:
  enum class Phase {
    AwaitObservation,
    AwaitTcl,          // global, not yet visited
    AwaitFinal,        // global, forwarded, waiting for the final broadcast
    AwaitEntryOrNext,  // local, not yet visited
    AwaitNext,         // local, forwarded, waiting for the next formula
    Done,
  };

  void require_decided() const {
    if (phase_ != Phase::Done) throw InternalError("round is not finished");
  }

  const Event& sigma() const {
    if (!sigma_local_) throw InternalError("no observation for this round");
    return *sigma_local_;
  }

  std::vector<Outgoing> on_observation(const LocalObservation& obs) {
    if (phase_ != Phase::AwaitObservation)
      throw ProtocolError("unexpected observation mid-round");
    if (!is_subset(obs.sigma_local, cfg_.local_ap()))
      throw ProtocolError("observation contains atoms outside the local alphabet");
    sigma_local_ = obs.sigma_local;
    if (cfg_.index != 1) {
      phase_ = cfg_.algorithm == Algorithm::Global ? Phase::AwaitTcl
                                                   : Phase::AwaitEntryOrNext;
      return {};
    }
    Tcl tcl = init_state(phi_);
    return cfg_.algorithm == Algorithm::Global
               ? continue_global(std::move(tcl), /*initiator=*/true)
               : continue_local(std::move(tcl), /*initiator=*/true);
  }

  std::vector<Outgoing> on_message(const TclTransfer& msg) {
    if (cfg_.algorithm != Algorithm::Global)
      throw ProtocolError("TCL transfer received by a local-exploration enforcer");
    if (phase_ != Phase::AwaitTcl)
      throw ProtocolError("TCL transfer received in the wrong state");
    if (apr(msg.tcl).empty()) {
      // The sender should have marked this final; treat it as such and note it.
      transfer_was_final_ = true;
      finalize_global(msg.tcl);
      return {};
    }
    return continue_global(msg.tcl, /*initiator=*/false);
  }

  std::vector<Outgoing> on_message(const FinalBroadcast& msg) {
    if (cfg_.algorithm != Algorithm::Global)
      throw ProtocolError("final broadcast received by a local-exploration enforcer");
    if (phase_ != Phase::AwaitTcl && phase_ != Phase::AwaitFinal)
      throw ProtocolError("final broadcast received in the wrong state");
    finalize_global(msg.tcl);
    return {};
  }

  std::vector<Outgoing> on_message(const TclEntry& msg) {
    if (cfg_.algorithm != Algorithm::Local)
      throw ProtocolError("TCL entry received by a global-exploration enforcer");
    if (phase_ != Phase::AwaitEntryOrNext)
      throw ProtocolError("TCL entry received in the wrong state");
    Tcl tcl;
    tcl.insert(msg.event, TclImage{msg.tops, msg.dist});
    return continue_local(std::move(tcl), /*initiator=*/false);
  }

  std::vector<Outgoing> on_message(const NextFormula& msg) {
    if (cfg_.algorithm != Algorithm::Local)
      throw ProtocolError("next formula received by a global-exploration enforcer");
    if (phase_ != Phase::AwaitEntryOrNext && phase_ != Phase::AwaitNext)
      throw ProtocolError("next formula received in the wrong state");
    next_ = msg.formula;
    phase_ = Phase::Done;
    return {};
  }

  // Evaluation + reduction, shared by both protocols. The initiator skips the
  // update when none of its atoms occur; anyone else being routed a state it
  // cannot evaluate is a protocol violation.
  Tcl evaluate(Tcl tcl, bool initiator) {
    const Event scope = set_intersect(cfg_.local_ap(), apr(tcl));
    if (scope.empty()) {
      if (!initiator)
        throw ProtocolError("enforcer " + std::to_string(cfg_.index) +
                            " cannot evaluate any remaining atom");
      // The reduction step still applies: monomials that already collapsed
      // must not survive into the decision or the next formula.
      scope_ = scope;
      return reduce(tcl);
    }
    Tcl updated = update_tcl(tcl, sigma(), cfg_.local_ap());
    StepRecord rec;
    rec.domain_after_update = updated.size();
    Tcl reduced = reduce(updated);
    rec.domain_after_reduce = reduced.size();
    records_.push_back(rec);
    scope_ = scope;
    return reduced;
  }

  std::vector<Outgoing> continue_global(Tcl tcl, bool initiator) {
    tcl = evaluate(std::move(tcl), initiator);
    if (apr(tcl).empty()) {
      finalize_global(tcl);
      std::vector<Outgoing> out;
      for (std::size_t k = 1; k <= cfg_.partition.size(); ++k)
        if (k != cfg_.index) out.push_back({k, FinalBroadcast{tcl}});
      return out;
    }
    auto dest = route_next(tcl, cfg_.index, cfg_.partition);
    phase_ = Phase::AwaitFinal;
    return {Outgoing{*dest, TclTransfer{std::move(tcl)}}};
  }

  void finalize_global(const Tcl& t_final) {
    Event chosen = detail::decide_event(t_final, /*forwarding=*/false);
    chosen_ = chosen;
    next_ = next_formula_from(t_final.at(chosen).tops);
    final_computed_ = true;
    phase_ = Phase::Done;
  }

  std::vector<Outgoing> continue_local(Tcl tcl, bool initiator) {
    tcl = evaluate(std::move(tcl), initiator);
    if (apr(tcl).empty()) {
      finalize_local(tcl, local_decision(tcl, false));
      return next_formula_broadcast();
    }
    Event chosen = local_decision(tcl, true);
    const TclImage& image = tcl.at(chosen);
    // All other events leave the domain; the remaining atoms are those of the
    // kept entry. When nothing is left to evaluate, this enforcer decides.
    Tcl kept;
    kept.insert(chosen, image);
    if (apr(kept).empty()) {
      finalize_local(kept, chosen);
      return next_formula_broadcast();
    }
    chosen_ = chosen;
    auto dest = route_next(kept, cfg_.index, cfg_.partition);
    phase_ = Phase::AwaitNext;
    return {Outgoing{*dest, TclEntry{std::move(chosen), image.tops, image.dist}}};
  }

  void finalize_local(const Tcl& tcl, Event chosen) {
    next_ = next_formula_from(tcl.at(chosen).tops);
    chosen_ = std::move(chosen);
    final_computed_ = true;
    phase_ = Phase::Done;
  }

  std::vector<Outgoing> next_formula_broadcast() {
    std::vector<Outgoing> out;
    for (std::size_t k = 1; k <= cfg_.partition.size(); ++k)
      if (k != cfg_.index) out.push_back({k, NextFormula{*next_}});
    return out;
  }

  EnforcerConfig cfg_;
  Formula phi_;

  Phase phase_ = Phase::AwaitObservation;
  std::optional<Event> sigma_local_;
  std::optional<Event> scope_;
  std::optional<Event> chosen_;
  std::optional<Formula> next_;
  bool final_computed_ = false;
  bool transfer_was_final_ = false;
  std::vector<StepRecord> records_;
};

}  // namespace denf
