// Deterministic simulated transport and round driver.
//
// Messages go through a single queue delivered oldest-first; per-channel FIFO,
// no loss, no duplication. An optional fixed per-channel delay can hold
// messages back without ever reordering a channel. The event source is
// blocked: run_round drives one global event to quiescence before returning.

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <variant>
#include <vector>

#include "denf/enforcer.hpp"
#include "denf/errors.hpp"

namespace denf {

struct NetConfig {
  // Extra delivery delay in ticks per (from, to) channel; absent means 0.
  std::map<std::pair<std::size_t, std::size_t>, std::uint64_t> channel_delay;

  std::uint64_t delay(std::size_t from, std::size_t to) const {
    auto it = channel_delay.find({from, to});
    return it == channel_delay.end() ? 0 : it->second;
  }
};

struct ObserveRecord {
  std::size_t enforcer;
  Event sigma_local;
};
struct UpdateRecord {
  std::size_t enforcer;
  std::size_t scope_size;
  StepRecord sizes;
};
struct SendRecord {
  std::size_t from, to, seq;
  Message msg;
};
struct DeliverRecord {
  std::size_t from, to, seq;
};
struct NoteRecord {
  std::string text;
};
using LogEvent =
    std::variant<ObserveRecord, UpdateRecord, SendRecord, DeliverRecord, NoteRecord>;

// Replayable journal of one round: identical inputs reproduce it byte for byte.
struct RoundLog {
  std::size_t round = 0;  // 1-based timestamp
  Formula formula;        // formula enforced this round
  Event input;            // global event
  std::vector<LogEvent> events;
  RoundOutcome outcome;

  std::string to_text() const {
    std::string out = "round " + std::to_string(round) + "\n";
    out += "formula: " + print_formula(formula) + "\n";
    out += "input: " + Tcl::event_text(input) + "\n";
    for (const auto& ev : events) {
      struct V {
        std::string operator()(const ObserveRecord& r) const {
          return "observe M" + std::to_string(r.enforcer) + " " +
                 Tcl::event_text(r.sigma_local);
        }
        std::string operator()(const UpdateRecord& r) const {
          return "update M" + std::to_string(r.enforcer) +
                 " scope=" + std::to_string(r.scope_size) + " domain " +
                 std::to_string(r.sizes.domain_after_update) + " -> " +
                 std::to_string(r.sizes.domain_after_reduce);
        }
        std::string operator()(const SendRecord& r) const {
          std::string text = serialize(r.msg);
          auto nl = text.find('\n');
          std::string head = text.substr(0, nl);
          std::string body = nl == std::string::npos ? "" : text.substr(nl + 1);
          std::string line = "send M" + std::to_string(r.from) + " -> M" +
                             std::to_string(r.to) + " " + head;
          if (!body.empty()) {
            line += "\n  ";
            for (char c : body) {
              line += c;
              if (c == '\n') line += "  ";
            }
          }
          return line;
        }
        std::string operator()(const DeliverRecord& r) const {
          return "deliver M" + std::to_string(r.from) + " -> M" + std::to_string(r.to) +
                 " #" + std::to_string(r.seq);
        }
        std::string operator()(const NoteRecord& r) const { return "note: " + r.text; }
      };
      out += std::visit(V{}, ev) + "\n";
    }
    out += "output: " + Tcl::event_text(outcome.chosen_event) + "\n";
    for (std::size_t i = 0; i < outcome.local_outputs.size(); ++i)
      out += "local M" + std::to_string(i + 1) + " " +
             Tcl::event_text(outcome.local_outputs[i]) + "\n";
    out += "next: " + print_formula(outcome.next_formula) + "\n";
    out += "messages: " + std::to_string(outcome.stats.messages_sent) + "\n";
    return out;
  }
};

namespace detail {

struct QueuedMessage {
  std::size_t from, to, seq;
  std::uint64_t ready;
  Message msg;
};

}  // namespace detail

// Drives one global event through the enforcers until quiescence.
inline RoundOutcome run_round(std::vector<Enforcer>& enforcers, const Event& sigma,
                              const NetConfig& net = {}, RoundLog* log = nullptr) {
  if (enforcers.empty()) throw InternalError("no enforcers");
  const std::size_t n = enforcers.size();
  const AlphabetPartition& partition = enforcers.front().config().partition;
  const Formula phi = enforcers.front().current_formula();
  for (const auto& m : enforcers)
    if (m.current_formula() != phi)
      throw InternalError("enforcers disagree on the formula at round start");
  if (!is_subset(sigma, partition.global()))
    throw ProtocolError("input event contains atoms outside the global alphabet");

  if (log) {
    log->formula = phi;
    log->input = sigma;
    log->events.clear();
  }

  std::vector<detail::QueuedMessage> queue;
  std::size_t send_seq = 0;
  std::uint64_t sends = 0;
  RoundStats stats;

  auto record_update = [&](const Enforcer& m, std::size_t before) {
    for (std::size_t r = before; r < m.step_records().size(); ++r) {
      const StepRecord& rec = m.step_records()[r];
      stats.max_domain_size = std::max(stats.max_domain_size, rec.domain_after_update);
      if (log)
        log->events.push_back(UpdateRecord{
            m.index(), m.update_scope() ? m.update_scope()->size() : 0, rec});
    }
    if (log && m.transfer_carried_final())
      log->events.push_back(
          NoteRecord{"M" + std::to_string(m.index()) + " received an already-final TCL"});
  };

  auto enqueue = [&](std::size_t from, const std::vector<Outgoing>& outs) {
    for (const auto& out : outs) {
      if (out.dest < 1 || out.dest > n || out.dest == from)
        throw InternalError("message routed to an invalid enforcer");
      ++send_seq;
      ++sends;
      stats.max_message_entries = std::max(stats.max_message_entries, entry_count(out.msg));
      if (log) log->events.push_back(SendRecord{from, out.dest, send_seq, out.msg});
      queue.push_back(detail::QueuedMessage{from, out.dest, send_seq,
                                            send_seq + net.delay(from, out.dest), out.msg});
    }
  };

  for (std::size_t i = 1; i <= n; ++i) {
    Enforcer& m = enforcers[i - 1];
    Event local = set_intersect(sigma, partition.component(i));
    if (log) log->events.push_back(ObserveRecord{i, local});
    std::size_t before = m.step_records().size();
    auto outs = m.step(LocalObservation{local});
    record_update(m, before);
    enqueue(i, outs);
  }

  std::uint64_t deliveries = 0;
  while (!queue.empty()) {
    auto it = std::min_element(queue.begin(), queue.end(),
                               [](const auto& a, const auto& b) {
                                 return std::tie(a.ready, a.seq) < std::tie(b.ready, b.seq);
                               });
    detail::QueuedMessage qm = std::move(*it);
    queue.erase(it);
    if (++deliveries > 2 * static_cast<std::uint64_t>(n))
      throw InternalError("round exceeded its delivery bound");
    if (log) log->events.push_back(DeliverRecord{qm.from, qm.to, qm.seq});
    Enforcer& m = enforcers[qm.to - 1];
    std::size_t before = m.step_records().size();
    auto outs = m.step(Incoming{qm.from, std::move(qm.msg)});
    record_update(m, before);
    enqueue(qm.to, outs);
  }
  stats.messages_sent = sends;

  for (const auto& m : enforcers)
    if (!m.decided())
      throw InternalError("quiescence reached but enforcer " +
                          std::to_string(m.index()) + " has no decision");

  // Locate the decided event and next formula, and check agreement.
  std::optional<Event> final_core;
  std::optional<Formula> next;
  for (const auto& m : enforcers) {
    if (!m.computed_decision()) continue;
    if (enforcers.front().config().algorithm == Algorithm::Local && final_core)
      throw InternalError("multiple deciders in a local-exploration round");
    if (final_core && (*final_core != m.chosen_core() || *next != m.next_formula()))
      throw InternalError("global-exploration enforcers disagree on the decision");
    final_core = m.chosen_core();
    next = m.next_formula();
  }
  if (!final_core) throw InternalError("no enforcer computed a decision");
  for (const auto& m : enforcers) {
    if (m.next_formula() != *next)
      throw InternalError("enforcers disagree on the next formula");
    Event own = set_intersect(m.chosen_core(), m.config().local_ap());
    Event from_final = set_intersect(*final_core, m.config().local_ap());
    if (m.has_choice() && own != from_final)
      throw InternalError("local choice of enforcer " + std::to_string(m.index()) +
                          " contradicts the final decision");
  }

  RoundOutcome outcome;
  outcome.next_formula = *next;
  outcome.stats = stats;
  for (std::size_t i = 1; i <= n; ++i)
    outcome.local_outputs.push_back(enforcers[i - 1].local_output());
  for (const auto& local : outcome.local_outputs)
    outcome.chosen_event = set_union(outcome.chosen_event, local);
  if (!is_subset(*final_core, outcome.chosen_event))
    throw InternalError("decided event lost atoms in the local outputs");
  if (log) log->outcome = outcome;
  return outcome;
}

// Hard checks on a finished round: message and domain bounds, message kinds,
// per-channel FIFO with exactly-once delivery.
inline void validate_round_log(const RoundLog& log, std::size_t n_enforcers,
                               Algorithm algorithm) {
  const std::uint64_t messages = log.outcome.stats.messages_sent;
  if (n_enforcers > 1 && messages > 2 * (n_enforcers - 1))
    throw InternalError("message bound exceeded: " + std::to_string(messages));
  if (n_enforcers == 1 && messages != 0)
    throw InternalError("single-enforcer round sent messages");

  const std::size_t n_ap = ap_formula(log.formula).size();
  if (n_ap > 62) throw InternalError("formula alphabet too large to bound-check");
  const std::uint64_t global_bound = std::uint64_t{1} << n_ap;

  std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> sent, delivered;
  for (const auto& ev : log.events) {
    if (const auto* u = std::get_if<UpdateRecord>(&ev)) {
      const std::uint64_t scope_bound = std::uint64_t{1} << u->scope_size;
      if (algorithm == Algorithm::Local) {
        if (u->sizes.domain_after_update != scope_bound)
          throw InternalError("local-exploration domain is not 2^scope after update");
      } else if (u->sizes.domain_after_update > global_bound) {
        throw InternalError("TCL domain exceeded 2^n_AP");
      }
    } else if (const auto* s = std::get_if<SendRecord>(&ev)) {
      sent[{s->from, s->to}].push_back(s->seq);
      const bool global_kind = std::holds_alternative<TclTransfer>(s->msg) ||
                               std::holds_alternative<FinalBroadcast>(s->msg);
      if ((algorithm == Algorithm::Global) != global_kind)
        throw InternalError("message kind does not match the algorithm");
      if (algorithm == Algorithm::Local && std::holds_alternative<TclEntry>(s->msg) &&
          entry_count(s->msg) != 1)
        throw InternalError("TCL entry message must carry exactly one entry");
      if (entry_count(s->msg) > global_bound)
        throw InternalError("message carries more entries than 2^n_AP");
    } else if (const auto* d = std::get_if<DeliverRecord>(&ev)) {
      delivered[{d->from, d->to}].push_back(d->seq);
    }
  }
  if (sent != delivered)
    throw InternalError("per-channel delivery does not match sends in order");
}

// Enforce a whole trace: round t enforces the formula produced by round t-1.
inline std::pair<Trace, std::vector<RoundLog>> run_trace(std::vector<Enforcer>& enforcers,
                                                         const Trace& input,
                                                         const NetConfig& net = {}) {
  Trace output;
  std::vector<RoundLog> logs;
  for (std::size_t t = 0; t < input.size(); ++t) {
    RoundLog log;
    log.round = t + 1;
    RoundOutcome outcome;
    try {
      outcome = run_round(enforcers, input[t], net, &log);
      validate_round_log(log, enforcers.size(), enforcers.front().config().algorithm);
    } catch (const SpecificationError&) {
      throw;
    } catch (const std::exception& e) {
      throw InternalError("round " + std::to_string(t + 1) + ": " + e.what());
    }
    // The next formula may never collapse to false while the current one has not.
    if (simplifies_to_false(outcome.next_formula))
      throw InternalError("round " + std::to_string(t + 1) +
                          ": next formula simplifies to false");
    for (auto& m : enforcers) m.commit_round(outcome.next_formula);
    output.push_back(outcome.chosen_event);
    logs.push_back(std::move(log));
  }
  return {std::move(output), std::move(logs)};
}

inline std::vector<Enforcer> make_enforcers(const Formula& phi,
                                            const AlphabetPartition& partition,
                                            Algorithm algorithm) {
  std::vector<Enforcer> out;
  for (std::size_t i = 1; i <= partition.size(); ++i)
    out.emplace_back(EnforcerConfig{i, partition, algorithm}, phi);
  return out;
}

}  // namespace denf
