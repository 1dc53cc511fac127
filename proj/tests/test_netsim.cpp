#include <catch2/catch_amalgamated.hpp>

#include "denf/formula_text.hpp"
#include "denf/netsim.hpp"

using namespace denf;

namespace {

const char* kTrafficFormula =
    "G ((g1 & g3 & !(g2 | g4)) | (!(g1 | g3) & g2 & g4))";
const char* kTrafficPrinted =
    "G (g1 & g3 & !(g2 | g4) | !(g1 | g3) & g2 & g4)";

AlphabetPartition two_components() {
  return AlphabetPartition({Event{"a"}, Event{"b"}});
}

AlphabetPartition traffic_partition() {
  return AlphabetPartition({Event{"g1", "y1", "r1"}, Event{"g2", "y2", "r2"},
                            Event{"g3", "y3", "r3"}, Event{"g4", "y4", "r4"}});
}

std::vector<SendRecord> sends_of(const RoundLog& log) {
  std::vector<SendRecord> out;
  for (const auto& ev : log.events)
    if (const auto* s = std::get_if<SendRecord>(&ev)) out.push_back(*s);
  return out;
}

}  // namespace

TEST_CASE("global round on the running example") {
  auto enforcers =
      make_enforcers(parse_formula("!(G a | F b)"), two_components(), Algorithm::Global);
  RoundLog log;
  log.round = 1;
  RoundOutcome outcome = run_round(enforcers, Event{"a"}, {}, &log);

  CHECK(outcome.chosen_event == Event{"a"});
  CHECK(outcome.local_outputs == std::vector<Event>{Event{"a"}, Event{}});
  CHECK(outcome.next_formula == parse_formula("F !a & G !b"));
  CHECK(outcome.stats.messages_sent == 2);

  auto sends = sends_of(log);
  REQUIRE(sends.size() == 2);
  CHECK(sends[0].from == 1);
  CHECK(sends[0].to == 2);
  CHECK(serialize(sends[0].msg) ==
        "TCL\n"
        "{a} -> dist=0 ; (!b | F !a & G !b)\n"
        "{} -> dist=1 ; (!b | G !b) ; (!b | F !a & G !b)");
  CHECK(sends[1].from == 2);
  CHECK(sends[1].to == 1);
  CHECK(std::holds_alternative<FinalBroadcast>(sends[1].msg));
  validate_round_log(log, enforcers.size(), Algorithm::Global);
}

TEST_CASE("global traffic-lights round reproduces every hop") {
  auto enforcers = make_enforcers(parse_formula(kTrafficFormula), traffic_partition(),
                                  Algorithm::Global);
  RoundLog log;
  log.round = 1;
  RoundOutcome outcome = run_round(enforcers, Event{"g1", "g2", "g3"}, {}, &log);

  CHECK(outcome.chosen_event == Event{"g1", "g3"});
  CHECK(outcome.next_formula == parse_formula(kTrafficFormula));
  CHECK(outcome.stats.messages_sent == 6);  // 3 transfers + 3 broadcasts

  auto sends = sends_of(log);
  REQUIRE(sends.size() == 6);
  const std::string phi = kTrafficPrinted;
  CHECK(serialize(sends[0].msg) ==
        "TCL\n"
        "{g1} -> dist=0 ; (g3 & !g2 & !g4 | " + phi + ")\n" +
        "{} -> dist=1 ; (!g3 & g2 & g4 | " + phi + ")");
  CHECK(serialize(sends[1].msg) ==
        "TCL\n"
        "{g1} -> dist=1 ; (g3 & !g4 | " + phi + ")\n" +
        "{g2} -> dist=1 ; (!g3 & g4 | " + phi + ")");
  CHECK(serialize(sends[2].msg) ==
        "TCL\n"
        "{g1,g3} -> dist=1 ; (!g4 | " + phi + ")\n" +
        "{g2} -> dist=2 ; (g4 | " + phi + ")");
  for (int i = 3; i < 6; ++i) {
    CHECK(std::holds_alternative<FinalBroadcast>(sends[i].msg));
    CHECK(serialize(sends[i].msg) ==
          "FINAL\n"
          "{g1,g3} -> dist=1 ; (true | " + phi + ")\n" +
          "{g2,g4} -> dist=3 ; (true | " + phi + ")");
  }
  CHECK(sends[0].to == 2);
  CHECK(sends[1].to == 3);
  CHECK(sends[2].to == 4);
  validate_round_log(log, enforcers.size(), Algorithm::Global);

  // Local outputs recombine into the global output.
  Event recombined;
  for (const auto& local : outcome.local_outputs) recombined = set_union(recombined, local);
  CHECK(recombined == outcome.chosen_event);
}

TEST_CASE("local traffic-lights round forwards single entries") {
  auto enforcers = make_enforcers(parse_formula(kTrafficFormula), traffic_partition(),
                                  Algorithm::Local);
  RoundLog log;
  log.round = 1;
  RoundOutcome outcome = run_round(enforcers, Event{"g1", "g2", "g3"}, {}, &log);

  CHECK(outcome.chosen_event == Event{"g1", "g3"});
  CHECK(outcome.next_formula == parse_formula(kTrafficFormula));
  CHECK(outcome.stats.messages_sent == 6);  // 3 entries + 3 next-formula broadcasts

  auto sends = sends_of(log);
  REQUIRE(sends.size() == 6);
  const std::string phi = kTrafficPrinted;
  CHECK(serialize(sends[0].msg) ==
        "ENTRY\n{g1} -> dist=0 ; (g3 & !g2 & !g4 | " + phi + ")");
  CHECK(serialize(sends[1].msg) ==
        "ENTRY\n{g1} -> dist=1 ; (g3 & !g4 | " + phi + ")");
  CHECK(serialize(sends[2].msg) ==
        "ENTRY\n{g1,g3} -> dist=1 ; (!g4 | " + phi + ")");
  for (int i = 0; i < 3; ++i) CHECK(entry_count(sends[i].msg) == 1);
  for (int i = 3; i < 6; ++i)
    CHECK(serialize(sends[i].msg) == std::string("NEXT\n") + phi);
  validate_round_log(log, enforcers.size(), Algorithm::Local);
}

TEST_CASE("single enforcer sends no messages") {
  AlphabetPartition solo({Event{"a", "b"}});
  for (Algorithm algorithm : {Algorithm::Global, Algorithm::Local}) {
    auto enforcers = make_enforcers(parse_formula("G a"), solo, algorithm);
    RoundLog log;
    RoundOutcome outcome = run_round(enforcers, Event{"b"}, {}, &log);
    CHECK(outcome.stats.messages_sent == 0);
    CHECK(outcome.chosen_event == Event{"a", "b"});
    validate_round_log(log, 1, algorithm);
  }
}

TEST_CASE("formula confined to the initiator needs only the broadcast") {
  auto enforcers = make_enforcers(parse_formula("G a"), two_components(), Algorithm::Global);
  RoundLog log;
  RoundOutcome outcome = run_round(enforcers, Event{"a", "b"}, {}, &log);
  CHECK(outcome.chosen_event == Event{"a", "b"});
  auto sends = sends_of(log);
  REQUIRE(sends.size() == 1);
  CHECK(std::holds_alternative<FinalBroadcast>(sends[0].msg));
}

TEST_CASE("run_trace progresses the formula between rounds") {
  auto enforcers =
      make_enforcers(parse_formula("!(G a | F b)"), two_components(), Algorithm::Global);
  auto [output, logs] = run_trace(enforcers, {Event{"a"}});
  CHECK(output == Trace{Event{"a"}});
  REQUIRE(logs.size() == 1);
  CHECK(logs[0].outcome.next_formula == parse_formula("F !a & G !b"));
  CHECK(enforcers[0].current_formula() == parse_formula("F !a & G !b"));

  auto traffic = make_enforcers(parse_formula(kTrafficFormula), traffic_partition(),
                                Algorithm::Global);
  auto [out2, logs2] =
      run_trace(traffic, {Event{"g1", "g2", "g3"}, Event{"g1", "g2", "g3"}});
  CHECK(out2 == Trace{Event{"g1", "g3"}, Event{"g1", "g3"}});
}

TEST_CASE("runs are deterministic and logs replay byte for byte") {
  for (Algorithm algorithm : {Algorithm::Global, Algorithm::Local}) {
    std::string first, second;
    for (std::string* target : {&first, &second}) {
      auto enforcers = make_enforcers(parse_formula(kTrafficFormula),
                                      traffic_partition(), algorithm);
      auto [output, logs] =
          run_trace(enforcers, {Event{"g1", "g2", "g3"}, Event{"g2", "g4"}});
      for (const auto& log : logs) *target += log.to_text();
    }
    CHECK(first == second);
  }
}

TEST_CASE("channel delays never change the outcome") {
  NetConfig slow;
  slow.channel_delay[{1, 2}] = 5;
  slow.channel_delay[{4, 2}] = 3;
  auto fast_enforcers = make_enforcers(parse_formula(kTrafficFormula),
                                       traffic_partition(), Algorithm::Global);
  auto slow_enforcers = make_enforcers(parse_formula(kTrafficFormula),
                                       traffic_partition(), Algorithm::Global);
  RoundOutcome fast = run_round(fast_enforcers, Event{"g1", "g2", "g3"});
  RoundOutcome with_delay = run_round(slow_enforcers, Event{"g1", "g2", "g3"}, slow);
  CHECK(fast.chosen_event == with_delay.chosen_event);
  CHECK(fast.next_formula == with_delay.next_formula);
  CHECK(fast.stats.messages_sent == with_delay.stats.messages_sent);
}

TEST_CASE("deadlock and disagreement are surfaced as errors") {
  // A partition that cannot cover the formula's atoms trips routing.
  AlphabetPartition bad({Event{"a"}, Event{"z"}});
  auto enforcers = make_enforcers(parse_formula("!(G a | F b)"), bad, Algorithm::Global);
  CHECK_THROWS_AS(run_round(enforcers, Event{"a"}), InternalError);
}
