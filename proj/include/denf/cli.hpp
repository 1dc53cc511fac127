// Command-line front end: load a formula and a partition, replay a recorded
// trace through the simulated network, and emit the corrected trace, logs and
// statistics.

#pragma once

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "denf/enforcer.hpp"
#include "denf/errors.hpp"
#include "denf/formula_text.hpp"
#include "denf/netsim.hpp"
#include "denf/trace_io.hpp"
#include "denf/verify.hpp"

namespace denf {

struct RunConfig {
  std::string formula;  // formula text, or @path to read it from a file
  std::string partition_path;
  std::string trace_path;
  Algorithm algorithm = Algorithm::Global;
  std::string out_path;    // corrected global trace; locals go to <out>.M<i>
  std::string log_path;    // round logs
  std::string stats_path;  // machine-readable key=value stats
  bool check_oracle = false;
  unsigned loop_bound = 3;
};

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int usage = 1;           // bad flags, unreadable/malformed inputs
inline constexpr int unsatisfiable = 2;   // specification equivalent to false
inline constexpr int oracle_mismatch = 3;
inline constexpr int protocol_error = 4;
}  // namespace exit_code

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file " + path, 0);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write file " + path, 0);
  out << content;
}

}  // namespace detail

inline int run(const RunConfig& config, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  Formula phi;
  Trace input;
  std::vector<Event> components;
  try {
    std::string formula_text = config.formula;
    if (!formula_text.empty() && formula_text.front() == '@')
      formula_text = detail::read_file(formula_text.substr(1));
    AlphabetPartition partition = parse_partition(config.partition_path);
    phi = parse_formula(formula_text);
    for (const auto& atom : ap_formula(phi))
      if (!partition.global().contains(atom))
        throw UnknownAtomError("partition does not cover formula atom '" + atom + "'");
    input = parse_trace(config.trace_path, &partition.global());
    for (std::size_t i = 1; i <= partition.size(); ++i)
      components.push_back(partition.component(i));
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::usage;
  }

  AlphabetPartition partition{components};
  Trace output;
  std::vector<RoundLog> logs;
  try {
    auto enforcers = make_enforcers(phi, partition, config.algorithm);
    std::tie(output, logs) = run_trace(enforcers, input);
  } catch (const SpecificationError& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::unsatisfiable;
  } catch (const std::exception& e) {
    err << "protocol error: " << e.what() << "\n";
    return exit_code::protocol_error;
  }

  try {
    if (!config.out_path.empty()) {
      detail::write_file(config.out_path, trace_text(output));
      for (std::size_t i = 1; i <= partition.size(); ++i) {
        Trace local;
        for (const auto& log : logs) local.push_back(log.outcome.local_outputs[i - 1]);
        detail::write_file(config.out_path + ".M" + std::to_string(i), trace_text(local));
      }
    }
    if (!config.log_path.empty()) {
      std::string text;
      for (const auto& log : logs) text += log.to_text() + "\n";
      detail::write_file(config.log_path, text);
    }

    std::uint64_t total_messages = 0;
    for (const auto& log : logs) total_messages += log.outcome.stats.messages_sent;
    std::string algo = config.algorithm == Algorithm::Global ? "global" : "local";
    out << "algorithm: " << algo << "\n";
    out << "enforcers: " << partition.size() << "\n";
    out << "rounds: " << logs.size() << "\n";
    for (std::size_t t = 0; t < logs.size(); ++t) {
      const auto& log = logs[t];
      Event scope = set_union(set_union(log.input, output[t]), ap_formula(phi));
      out << "round " << t + 1 << ": input " << event_text(log.input) << " -> output "
          << event_text(output[t]) << "  distance " << distance(log.input, output[t], scope)
          << "  messages " << log.outcome.stats.messages_sent << "\n";
    }
    out << "total messages: " << total_messages << "\n";

    if (!config.stats_path.empty()) {
      std::ostringstream s;
      s << "algorithm=" << algo << "\n";
      s << "enforcers=" << partition.size() << "\n";
      s << "rounds=" << logs.size() << "\n";
      s << "total_messages=" << total_messages << "\n";
      for (std::size_t t = 0; t < logs.size(); ++t) {
        const auto& log = logs[t];
        Event scope = set_union(set_union(log.input, output[t]), ap_formula(phi));
        std::string p = "round_" + std::to_string(t + 1) + "_";
        s << p << "input=" << event_text(log.input) << "\n";
        s << p << "output=" << event_text(output[t]) << "\n";
        s << p << "distance=" << distance(log.input, output[t], scope) << "\n";
        s << p << "messages=" << log.outcome.stats.messages_sent << "\n";
        s << p << "max_message_entries=" << log.outcome.stats.max_message_entries << "\n";
        s << p << "max_domain_size=" << log.outcome.stats.max_domain_size << "\n";
      }
      detail::write_file(config.stats_path, s.str());
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::usage;
  }

  if (config.check_oracle) {
    auto violations = verify_enforcement(phi, input, output,
                                         config.algorithm == Algorithm::Global,
                                         config.loop_bound);
    if (!violations.empty()) {
      for (const auto& v : violations)
        err << "oracle check failed at round " << v.round << ": " << v.what << "\n";
      return exit_code::oracle_mismatch;
    }
    out << "oracle check: ok\n";
  }
  return exit_code::ok;
}

}  // namespace denf
