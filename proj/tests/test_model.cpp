#include "loopterm/loop_spec.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <fstream>
#include <sstream>

using namespace loopterm;

namespace {

std::string read_data(const std::string& name) {
  std::ifstream in(std::string(LOOPTERM_TEST_DATA) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("parse the five-variable example") {
  LoopSpec s = parse_loop(read_data("example1.loop"));
  CHECK(s.num_vars() == 5);
  CHECK(s.guards.size() == 1);
  CHECK(s.update == testing::example_matrix());
  CHECK(to_string(s.guards[0], s.vars) == "x1^2 + x1*x2 - x3^2 - 2*x3*x4 - x4^2 + x5");
}

TEST_CASE("parse the identity loop") {
  LoopSpec s = parse_loop(read_data("identity.loop"));
  CHECK(s.num_vars() == 1);
  CHECK(s.update == RationalMatrix::identity(1));
  LoopSpec h = parse_loop(read_data("halving.loop"));
  CHECK(h.update(0, 0) == Rational(1, 2));
}

TEST_CASE("parse errors carry positions") {
  auto error_at = [](const std::string& src) -> std::pair<int, int> {
    try {
      parse_loop(src);
    } catch (const ParseError& e) {
      return {e.line(), e.column()};
    }
    return {0, 0};
  };
  CHECK(error_at("vars x y;\nwhile (x9 > 0) { x := x; y := y; }") == std::pair{2, 8});
  CHECK(error_at("vars x;\nwhile (x >= 0) { x := x; }") == std::pair{2, 10});
  CHECK(error_at("vars x;\nwhile (x > 0) { x := 0.5*x; }") == std::pair{2, 22});
  CHECK(error_at("vars x y;\nwhile (x > 0) { x := y; }") == std::pair{2, 25});
  CHECK(error_at("vars x;\nwhile (x > 0) { x := x*x; }") == std::pair{2, 22});
  CHECK(error_at("vars x;\nwhile (x > 0) { x := x + 1; }") == std::pair{2, 22});
  CHECK(error_at("vars x;\nwhile (x > 0) { x := x; x := x; }") == std::pair{2, 25});
  CHECK(error_at("vars x;\nwhile (x > 0) { x := x/0; }") == std::pair{2, 23});
  CHECK(error_at("vars x;\nwhile (x > 0) { x := x; ") == std::pair{2, 25});
}

TEST_CASE("guards with both sides and several conjuncts") {
  LoopSpec s = parse_loop("vars a b; # comment\nwhile (a > b, b^2 < 4 && a > 0) { a := a; b := -b; }");
  REQUIRE(s.guards.size() == 3);
  CHECK(to_string(s.guards[0], s.vars) == "a - b");
  CHECK(to_string(s.guards[1], s.vars) == "-b^2 + 4");
  CHECK(s.update(1, 1) == -1);
}

TEST_CASE("print then parse is the identity") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    int n = 1 + static_cast<int>(rng() % 4);
    LoopSpec s;
    for (int i = 0; i < n; ++i) s.vars.push_back("x" + std::to_string(i + 1));
    s.update = testing::random_matrix(rng, n, 9);
    int m = 1 + static_cast<int>(rng() % 2);
    for (int j = 0; j < m; ++j) {
      QPoly g = qpoly_constant(n, testing::random_rational(rng, 5));
      for (int t = 0; t < 4; ++t) {
        QPoly mono = qpoly_constant(n, testing::random_rational(rng, 7));
        for (int k = 0; k < 2; ++k) mono = mono * qpoly_var(n, static_cast<int>(rng() % static_cast<unsigned>(n)));
        g = g + mono;
      }
      if (g.is_zero()) g = qpoly_var(n, 0);
      s.guards.push_back(g);
    }
    s.validate();
    std::string text = print_loop(s);
    LoopSpec back = parse_loop(text);
    CHECK(back == s);
    CHECK(print_loop(back) == text);
  }
}

TEST_CASE("polynomial parser") {
  QPoly f = parse_polynomial("(x1 - 3)^2");
  CHECK(f.nvars == 1);
  CHECK(to_string(f, {"x1"}) == "x1^2 - 6*x1 + 9");
  CHECK(parse_polynomial("x2", 3).nvars == 3);
  CHECK_THROWS_AS(parse_polynomial("y + 1"), ParseError);
  CHECK_THROWS_AS(parse_polynomial("x3", 2), ParseError);
}

TEST_CASE("diophantine gadget shape") {
  LoopSpec s = diophantine_gadget(gadget_input(parse_polynomial("x1 - 3")));
  CHECK(s.num_vars() == 2);
  CHECK(s.update == RationalMatrix::from_rows({{1, 0}, {0, Rational(1, 2)}}));
  CHECK(to_string(s.guards[0], s.vars) == "-x1^2 + 6*x1 + x2 - 9");

  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    int m = 1 + static_cast<int>(rng() % 3);
    QPoly f = qpoly_constant(m, static_cast<int>(rng() % 7) - 3);
    for (int i = 0; i < m; ++i) f = f + qpoly_var(m, i) * Rational(static_cast<int>(rng() % 5) + 1);
    LoopSpec g = diophantine_gadget(gadget_input(f));
    REQUIRE(g.num_vars() == m + 1);
    int halves = 0;
    for (int i = 0; i <= m; ++i)
      for (int j = 0; j <= m; ++j) {
        if (i != j) CHECK(g.update(i, j) == 0);
        if (i == j && g.update(i, i) == Rational(1, 2)) ++halves;
      }
    CHECK(halves == 1);
    CHECK(g.update(m, m) == Rational(1, 2));
  }
  CHECK_THROWS(gadget_input(parse_polynomial("x1/2")));
  CHECK_THROWS(gadget_input(QPoly(1)));
}
