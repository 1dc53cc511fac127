#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "denf/event.hpp"
#include "denf/formula.hpp"
#include "denf/formula_text.hpp"
#include "support/gen.hpp"

using namespace denf;

TEST_CASE("parse_formula handles the documented grammar") {
  Formula expected = make_not(
      make_or(make_globally(make_atom("a")), make_eventually(make_atom("b"))));
  CHECK(parse_formula("!(G a | F b)") == expected);
  CHECK(parse_formula("true") == make_true());
  CHECK(parse_formula("a U b") == make_until(make_atom("a"), make_atom("b")));
}

TEST_CASE("parser precedence and associativity") {
  auto a = make_atom("a");
  auto b = make_atom("b");
  auto c = make_atom("c");
  CHECK(parse_formula("a U b & c") == make_and(make_until(a, b), c));
  CHECK(parse_formula("G a U b") == make_until(make_globally(a), b));
  CHECK(parse_formula("a & b & c") == make_and(make_and(a, b), c));
  CHECK(parse_formula("a | b & c") == make_or(a, make_and(b, c)));
  CHECK(parse_formula("a -> b -> c") == make_implies(a, make_implies(b, c)));
  CHECK(parse_formula("a <-> b") == make_iff(a, b));
  CHECK(parse_formula("a U b U c") == make_until(a, make_until(b, c)));
  CHECK(parse_formula("!a") == make_not(a));
  CHECK(parse_formula("X(G a)") == parse_formula("X (G a)"));
  CHECK(parse_formula("!(a&b)") == make_not(make_and(a, b)));
}

TEST_CASE("parse errors carry a position") {
  CHECK_THROWS_AS(parse_formula("a &"), ParseError);
  CHECK_THROWS_AS(parse_formula("(a | b"), ParseError);
  CHECK_THROWS_AS(parse_formula("a ^ b"), ParseError);
  CHECK_THROWS_AS(parse_formula("U"), ParseError);
  try {
    parse_formula("a & @");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.position() == 4);
  }
}

TEST_CASE("parse_formula rejects atoms outside the alphabet") {
  Event alphabet{"a", "b"};
  CHECK_NOTHROW(parse_formula("G (a & b)", alphabet));
  CHECK_THROWS_AS(parse_formula("G (a & c)", alphabet), UnknownAtomError);
}

TEST_CASE("print_formula canonical forms") {
  Formula f = make_not(
      make_or(make_globally(make_atom("a")), make_eventually(make_atom("b"))));
  CHECK(print_formula(f) == "!(G a | F b)");
  CHECK(print_formula(make_true()) == "true");
  CHECK(print_formula(make_and(make_atom("a"), make_next(make_globally(make_atom("a"))))) ==
        "a & X (G a)");
}

TEST_CASE("parse after print is the identity") {
  std::mt19937_64 rng(20240811);
  std::vector<std::string> atoms{"a", "b", "c", "d"};
  for (int i = 0; i < 300; ++i) {
    Formula f = testgen::random_formula(rng, 5, atoms);
    std::string text = print_formula(f);
    INFO(text);
    CHECK(parse_formula(text) == f);
  }
}

TEST_CASE("ap_formula collects exactly the occurring atoms") {
  CHECK(ap_formula(parse_formula("!a & !b")) == Event{"a", "b"});
  CHECK(ap_formula(make_true()) == Event{});
  CHECK(ap_formula(parse_formula("F a")) == Event{"a"});
}
