// Random enforcement instances for the soundness/transparency/optimality
// suites, plus the shared suite runners used by both the unit property tests
// and the acceptance binary.
//
// Instance filter: the enforcement algorithms assume (per the underlying
// construction) that no stored future obligation is semantically equivalent
// to false — the syntactic reduce test cannot see through, say, G b & G !b.
// An instance whose run ever keeps such a future is outside the algorithms'
// assumptions and is skipped (and counted); everything else must satisfy the
// oracle checks exactly.

#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "gen.hpp"

namespace denf::testgen {

struct FormulaHash {
  std::size_t operator()(const Formula& f) const { return f.hash(); }
};
using SatCache = std::unordered_map<Formula, bool, FormulaHash>;

inline bool sat_cached(SatCache& cache, const Formula& f) {
  auto it = cache.find(f);
  if (it != cache.end()) return it->second;
  bool s = satisfiable(f);
  cache.emplace(f, s);
  return s;
}

inline void collect_or_disjuncts(const Formula& f, std::vector<Formula>& out) {
  if (f.op() == Op::Or) {
    collect_or_disjuncts(f.lhs(), out);
    collect_or_disjuncts(f.rhs(), out);
  } else {
    out.push_back(f);
  }
}

// Every future obligation inside the message payloads of one round.
inline std::vector<Formula> logged_futures(const RoundLog& log) {
  std::vector<Formula> out;
  auto add_tcl = [&](const Tcl& tcl) {
    for (const auto& [event, image] : tcl)
      for (const auto& top : image.tops) out.push_back(top.future);
  };
  for (const auto& ev : log.events) {
    const auto* s = std::get_if<SendRecord>(&ev);
    if (!s) continue;
    if (const auto* t = std::get_if<TclTransfer>(&s->msg)) add_tcl(t->tcl);
    if (const auto* t = std::get_if<FinalBroadcast>(&s->msg)) add_tcl(t->tcl);
    if (const auto* e = std::get_if<TclEntry>(&s->msg))
      for (const auto& top : e->tops) out.push_back(top.future);
  }
  return out;
}

struct Instance {
  Formula phi;
  std::vector<Event> components;
  Trace trace;

  AlphabetPartition partition() const { return AlphabetPartition(components); }
};

struct FilteredRun {
  Trace output;
  std::vector<RoundLog> logs;
};

// Runs one algorithm over the instance. Returns nullopt when the run violates
// the no-false-future assumption; rethrows anything not explained by it.
inline std::optional<FilteredRun> run_filtered(const Instance& inst, Algorithm algorithm,
                                               SatCache& cache) {
  auto enforcers = make_enforcers(inst.phi, inst.partition(), algorithm);
  FilteredRun run;
  auto round_futures_ok = [&](const RoundLog& log) {
    for (const auto& f : logged_futures(log))
      if (!sat_cached(cache, f)) return false;
    return true;
  };
  for (std::size_t t = 0; t < inst.trace.size(); ++t) {
    RoundLog log;
    log.round = t + 1;
    RoundOutcome outcome;
    try {
      outcome = run_round(enforcers, inst.trace[t], {}, &log);
      validate_round_log(log, enforcers.size(), algorithm);
    } catch (const InternalError&) {
      if (!round_futures_ok(log)) return std::nullopt;
      throw;
    }
    run.logs.push_back(log);
    if (!round_futures_ok(log)) return std::nullopt;
    std::vector<Formula> disjuncts;
    collect_or_disjuncts(outcome.next_formula, disjuncts);
    for (const auto& d : disjuncts)
      if (!sat_cached(cache, d)) return std::nullopt;
    if (simplifies_to_false(outcome.next_formula))
      throw InternalError("next formula simplifies to false");
    for (auto& m : enforcers) m.commit_round(outcome.next_formula);
    run.output.push_back(outcome.chosen_event);
  }
  return run;
}

struct ValidInstance {
  Instance inst;
  FilteredRun global_run;
  FilteredRun local_run;
};

inline std::optional<ValidInstance> try_instance(std::mt19937_64& rng, SatCache& cache) {
  static const std::vector<std::string> pool{"a", "b", "c", "d"};
  std::size_t n_atoms = 2 + rng() % 3;  // 2..4
  std::vector<std::string> atoms(pool.begin(), pool.begin() + n_atoms);
  Formula phi = random_formula(rng, 1 + static_cast<int>(rng() % 4), atoms);
  if (simplifies_to_false(phi)) return std::nullopt;
  if (!sat_cached(cache, phi)) return std::nullopt;

  std::vector<std::string> alphabet(atoms);
  if (rng() % 3 == 0) alphabet.push_back("p");  // an unconstrained observable
  std::size_t n_components = 2;
  if (alphabet.size() >= 3 && rng() % 2) n_components = 3;

  Instance inst{phi, {}, random_trace(rng, alphabet, 5)};
  AlphabetPartition partition = random_partition(rng, alphabet, n_components);
  for (std::size_t i = 1; i <= partition.size(); ++i)
    inst.components.push_back(partition.component(i));

  auto global_run = run_filtered(inst, Algorithm::Global, cache);
  if (!global_run) return std::nullopt;
  auto local_run = run_filtered(inst, Algorithm::Local, cache);
  if (!local_run) return std::nullopt;
  return ValidInstance{std::move(inst), std::move(*global_run), std::move(*local_run)};
}

struct SuiteResult {
  std::size_t instances = 0;
  std::size_t skipped = 0;
  std::size_t soundness_transparency_violations = 0;
  std::size_t optimality_mismatches = 0;       // global vs oracle minimum
  std::size_t reference_mismatches = 0;        // global vs reference trajectory
  std::size_t local_below_optimal = 0;         // would contradict the oracle
  std::size_t local_strictly_worse_steps = 0;  // local > optimal (expected to occur)
  std::vector<std::string> failures;

  bool ok() const {
    return soundness_transparency_violations == 0 && optimality_mismatches == 0 &&
           reference_mismatches == 0 && local_below_optimal == 0 && failures.empty();
  }
};

inline std::uint64_t step_distance(const Formula& phi, const Event& input,
                                   const Event& output) {
  Event scope = set_union(set_union(input, output), ap_formula(phi));
  return distance(input, output, scope);
}

inline SuiteResult run_enforcement_suite(std::uint64_t seed, std::size_t n_instances) {
  std::mt19937_64 rng(seed);
  SatCache cache;
  SuiteResult result;
  while (result.instances < n_instances) {
    auto vi = try_instance(rng, cache);
    if (!vi) {
      ++result.skipped;
      continue;
    }
    ++result.instances;
    const Instance& inst = vi->inst;
    const std::string label = print_formula(inst.phi);

    for (const auto* run : {&vi->global_run, &vi->local_run}) {
      bool global = run == &vi->global_run;
      auto violations =
          verify_enforcement(inst.phi, inst.trace, run->output, /*optimality=*/false);
      for (const auto& v : violations) {
        ++result.soundness_transparency_violations;
        result.failures.push_back((global ? "global " : "local ") + label + " round " +
                                  std::to_string(v.round) + ": " + v.what);
      }
    }

    // Optimality: the global output sits exactly at the oracle minimum.
    Trace prefix;
    for (std::size_t t = 0; t < inst.trace.size(); ++t) {
      auto minimum = min_safe_distance(inst.phi, prefix, inst.trace[t]);
      std::uint64_t got = step_distance(inst.phi, inst.trace[t], vi->global_run.output[t]);
      if (!minimum || got != *minimum) {
        ++result.optimality_mismatches;
        result.failures.push_back("global optimality " + label + " round " +
                                  std::to_string(t + 1));
      }
      prefix.push_back(vi->global_run.output[t]);
    }

    // The centralized reference walks the same trajectory as the global mode.
    try {
      Trace ref = reference_enforcer(inst.phi, inst.trace);
      for (std::size_t t = 0; t < inst.trace.size(); ++t) {
        std::uint64_t got =
            step_distance(inst.phi, inst.trace[t], vi->global_run.output[t]);
        std::uint64_t want = step_distance(inst.phi, inst.trace[t], ref[t]);
        if (got != want) {
          ++result.reference_mismatches;
          result.failures.push_back("reference distance " + label + " round " +
                                    std::to_string(t + 1));
        }
      }
    } catch (const OracleError& e) {
      result.failures.push_back("reference enforcer failed on " + label + ": " + e.what());
    }

    // Local exploration: never below the oracle minimum on its own trajectory,
    // strictly above it at least somewhere across the suite.
    prefix.clear();
    for (std::size_t t = 0; t < inst.trace.size(); ++t) {
      auto minimum = min_safe_distance(inst.phi, prefix, inst.trace[t]);
      std::uint64_t got = step_distance(inst.phi, inst.trace[t], vi->local_run.output[t]);
      if (!minimum || got < *minimum) {
        ++result.local_below_optimal;
        result.failures.push_back("local below optimal " + label + " round " +
                                  std::to_string(t + 1));
      } else if (got > *minimum) {
        ++result.local_strictly_worse_steps;
      }
      prefix.push_back(vi->local_run.output[t]);
    }
  }
  return result;
}

struct RewriteSuiteResult {
  std::size_t pairs = 0;
  std::size_t disagreements = 0;
  std::size_t tdnf_failures = 0;
};

inline RewriteSuiteResult run_rewrite_suite(std::uint64_t seed, std::size_t n_pairs) {
  std::mt19937_64 rng(seed);
  std::vector<std::string> atoms{"a", "b", "c", "d"};
  RewriteSuiteResult result;
  while (result.pairs < n_pairs) {
    Formula f = random_formula(rng, 1 + static_cast<int>(rng() % 5), atoms);
    Formula expanded = rwt(f);
    Formula tdnf = to_dnf(expanded);
    Formula simplified = simplify(f);
    Formula rebuilt = make_false();
    for (const auto& top : encode(tdnf))
      rebuilt = make_or(rebuilt, make_and(top.present, make_next(top.future)));
    if (!(is_dnf(tdnf, false) && non_next_temporals_guarded(expanded) &&
          non_next_temporals_guarded(tdnf) && to_dnf(tdnf) == tdnf))
      ++result.tdnf_failures;
    Lasso w = random_lasso(rng, atoms);
    bool base = eval_lasso(f, w);
    if (eval_lasso(expanded, w) != base || eval_lasso(tdnf, w) != base ||
        eval_lasso(simplified, w) != base || eval_lasso(rebuilt, w) != base)
      ++result.disagreements;
    ++result.pairs;
  }
  return result;
}

}  // namespace denf::testgen
