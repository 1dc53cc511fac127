// Per-step verification of an enforcement run against the oracle: soundness
// (no output prefix is bad), transparency (the input is only modified when
// keeping it would have formed a bad prefix), and optimality (the output is at
// the minimum distance among safe corrections).

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "denf/oracle.hpp"

namespace denf {

// Minimum distance from sigma to an event that safely extends out_prefix, or
// nullopt when no candidate within the oracle bounds is safe. Only atoms of
// the specification can matter; everything else is kept as observed.
inline std::optional<std::uint64_t> min_safe_distance(const Formula& phi_init,
                                                      const Trace& out_prefix,
                                                      const Event& sigma,
                                                      unsigned loop_bound = 3) {
  const Event apf = ap_formula(phi_init);
  const Event passthrough = set_minus(sigma, apf);
  std::optional<std::uint64_t> best;
  for (const Event& x : subsets_by_size_lex(apf)) {
    Event candidate = set_union(x, passthrough);
    std::uint64_t d = distance(sigma, candidate, apf);
    if (best && *best <= d) continue;
    Trace extended = out_prefix;
    extended.push_back(std::move(candidate));
    if (bad_prefix(phi_init, extended, loop_bound) == PrefixVerdict::NotBad) best = d;
  }
  return best;
}

struct Violation {
  std::size_t round;  // 1-based
  std::string what;
};

inline std::vector<Violation> verify_enforcement(const Formula& phi_init,
                                                 const Trace& input, const Trace& output,
                                                 bool check_optimality,
                                                 unsigned loop_bound = 3) {
  std::vector<Violation> out;
  if (input.size() != output.size()) {
    out.push_back({0, "output length differs from input length"});
    return out;
  }
  Trace prefix;
  for (std::size_t t = 0; t < input.size(); ++t) {
    Trace with_output = prefix;
    with_output.push_back(output[t]);
    if (bad_prefix(phi_init, with_output, loop_bound) == PrefixVerdict::Bad)
      out.push_back({t + 1, "soundness: output prefix is a bad prefix"});
    if (output[t] != input[t]) {
      Trace with_input = prefix;
      with_input.push_back(input[t]);
      if (bad_prefix(phi_init, with_input, loop_bound) == PrefixVerdict::NotBad)
        out.push_back({t + 1, "transparency: input event was modified although it was safe"});
    }
    if (check_optimality) {
      Event scope = set_union(set_union(input[t], output[t]), ap_formula(phi_init));
      std::uint64_t produced = distance(input[t], output[t], scope);
      auto minimum = min_safe_distance(phi_init, prefix, input[t], loop_bound);
      if (!minimum)
        out.push_back({t + 1, "optimality: oracle found no safe candidate"});
      else if (produced != *minimum)
        out.push_back({t + 1, "optimality: output at distance " + std::to_string(produced) +
                                  ", oracle minimum is " + std::to_string(*minimum)});
    }
    prefix = std::move(with_output);
  }
  return out;
}

}  // namespace denf
