#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "denf/formula_text.hpp"
#include "denf/oracle.hpp"
#include "denf/simplify.hpp"
#include "support/gen.hpp"

using namespace denf;

TEST_CASE("simplify rule set") {
  CHECK(simplify(parse_formula("a & !a")) == make_false());
  CHECK(simplify(parse_formula("true & X a")) == parse_formula("X a"));
  CHECK(simplify(parse_formula("false & G !b | !b & F !a")) == parse_formula("!b & F !a"));
  CHECK(simplify(parse_formula("a | !a")) == make_true());
  CHECK(simplify(parse_formula("a & a")) == parse_formula("a"));
  CHECK(simplify(parse_formula("a | b | a")) == parse_formula("a | b"));
  CHECK(simplify(parse_formula("X true")) == make_true());
  CHECK(simplify(parse_formula("!true")) == make_false());
  CHECK(simplify(parse_formula("a | false")) == parse_formula("a"));
}

TEST_CASE("simplify canonicalizes chain associativity") {
  CHECK(simplify(parse_formula("a & (b & c)")) == parse_formula("a & b & c"));
  CHECK(simplify(parse_formula("(a | b) | (c | a)")) == parse_formula("a | b | c"));
}

TEST_CASE("no simplification below G/F/U/R beyond constant folding") {
  // Contradictions survive under temporal operators...
  CHECK(simplify(parse_formula("G (a & !a)")) == parse_formula("G (a & !a)"));
  CHECK(simplify(parse_formula("F (a & (b & c))")) == parse_formula("F (a & (b & c))"));
  // ...but constants fold there.
  CHECK(simplify(parse_formula("G (true & a)")) == parse_formula("G a"));
  CHECK(simplify(parse_formula("a U (b | false)")) == parse_formula("a U b"));
  // Below X the full rule set applies.
  CHECK(simplify(parse_formula("X (a & !a)")) == parse_formula("X false"));
}

TEST_CASE("simplify is idempotent and preserves semantics") {
  std::mt19937_64 rng(20240812);
  std::vector<std::string> atoms{"a", "b", "c"};
  for (int i = 0; i < 120; ++i) {
    Formula f = testgen::random_formula(rng, 4, atoms);
    Formula s = simplify(f);
    INFO(print_formula(f) << "  ->  " << print_formula(s));
    CHECK(simplify(s) == s);
    for (int j = 0; j < 12; ++j) {
      Lasso w = testgen::random_lasso(rng, atoms);
      CHECK(eval_lasso(f, w) == eval_lasso(s, w));
    }
  }
}
