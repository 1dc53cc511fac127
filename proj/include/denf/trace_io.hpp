// Text formats for events, traces and alphabet partitions.
//
// Trace files carry one event per line, `{p,q}` with atoms comma-separated and
// `{}` for the empty event. Partition files carry one component per line,
// `M<i>: a, b, c`, with indices starting at 1 in order.

#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "denf/encoding.hpp"
#include "denf/errors.hpp"
#include "denf/event.hpp"

namespace denf {

namespace detail {

inline std::string strip(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  return std::string(s.substr(b, e - b));
}

inline bool valid_atom_name(std::string_view name) {
  if (name.empty()) return false;
  auto alpha = [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
  };
  if (!alpha(name[0])) return false;
  for (char c : name.substr(1))
    if (!alpha(c) && !(c >= '0' && c <= '9')) return false;
  return true;
}

}  // namespace detail

inline Event parse_event(std::string_view text, std::size_t line_no = 0) {
  std::string s = detail::strip(text);
  if (s.size() < 2 || s.front() != '{' || s.back() != '}')
    throw ParseError("event must be of the form {a,b}", line_no);
  std::string inner = s.substr(1, s.size() - 2);
  std::vector<std::string> names;
  std::stringstream ss(inner);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::string name = detail::strip(item);
    if (name.empty() && inner.find(',') == std::string::npos) continue;  // "{}"
    if (!detail::valid_atom_name(name))
      throw ParseError("bad atom name '" + name + "'", line_no);
    names.push_back(std::move(name));
  }
  return Event(std::move(names));
}

inline std::string event_text(const Event& e) { return Tcl::event_text(e); }

// One event per line; atoms must belong to `alphabet` when provided.
inline Trace parse_trace_text(const std::string& text, const Event* alphabet = nullptr) {
  Trace trace;
  std::stringstream ss(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    std::string s = detail::strip(line);
    if (s.empty()) continue;
    Event e = parse_event(s, line_no);
    if (alphabet)
      for (const auto& name : e)
        if (!alphabet->contains(name))
          throw UnknownAtomError("trace line " + std::to_string(line_no) + ": atom '" +
                                 name + "' is not in the alphabet");
    trace.push_back(std::move(e));
  }
  return trace;
}

inline Trace parse_trace(const std::string& path, const Event* alphabet = nullptr) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open trace file " + path, 0);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_trace_text(buf.str(), alphabet);
}

inline std::string trace_text(const Trace& trace) {
  std::string out;
  for (const auto& e : trace) out += event_text(e) + "\n";
  return out;
}

inline AlphabetPartition parse_partition_text(const std::string& text) {
  std::vector<Event> components;
  std::stringstream ss(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    std::string s = detail::strip(line);
    if (s.empty()) continue;
    std::size_t colon = s.find(':');
    if (colon == std::string::npos || s[0] != 'M')
      throw ParseError("partition line must be 'M<i>: a, b'", line_no);
    std::string index_text = detail::strip(s.substr(1, colon - 1));
    std::size_t expected = components.size() + 1;
    if (index_text != std::to_string(expected))
      throw ParseError("expected component M" + std::to_string(expected), line_no);
    std::vector<std::string> names;
    std::stringstream items(s.substr(colon + 1));
    std::string item;
    while (std::getline(items, item, ',')) {
      std::string name = detail::strip(item);
      if (!detail::valid_atom_name(name))
        throw ParseError("bad atom name '" + name + "'", line_no);
      names.push_back(std::move(name));
    }
    components.push_back(Event(std::move(names)));
  }
  try {
    return AlphabetPartition(std::move(components));
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what(), line_no);
  }
}

inline AlphabetPartition parse_partition(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open partition file " + path, 0);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_partition_text(buf.str());
}

}  // namespace denf
