#include "loopterm/guard.hpp"
#include "test_support.hpp"

#include <doctest.h>

using namespace loopterm;

namespace {

LoopSpec example_spec() {
  LoopSpec s;
  s.vars = {"x1", "x2", "x3", "x4", "x5"};
  s.update = testing::example_matrix();
  s.guards = {parse_polynomial("x5 + x1^2 + x1*x2 - x3^2 - 2*x3*x4 - x4^2", 5)};
  return s;
}

// Rational view of an APoly; fails the test if a coefficient is irrational.
QPoly rational_part(const APoly& p) {
  QPoly q(p.nvars);
  for (const auto& [e, c] : p.terms) {
    REQUIRE(c.is_rational());
    q.terms[e] = c.rational_value();
  }
  return q;
}

Rational guard_at(const LoopSpec& s, const RationalVector& x, long n) {
  return eval(s.guards[0], mat_apply_iter(s.update, x, static_cast<unsigned long>(n)));
}

struct Analysis {
  ClosedForm cf;
  std::unique_ptr<ExpansionContext> ctx;
  std::unique_ptr<GuardAnalysis> ga;
};

Analysis run(const LoopSpec& s, long cap = 30) {
  Analysis a;
  a.cf = closed_form(s.update);
  a.ctx = std::make_unique<ExpansionContext>(a.cf);
  a.ga = analyze_guards(s, *a.ctx, cap);
  return a;
}

}  // namespace

TEST_CASE("example tables match the worked decomposition") {
  LoopSpec s = example_spec();
  Analysis a = run(s);
  REQUIRE(a.ga->failure.empty());
  REQUIRE(a.ga->periods == std::vector<unsigned long>{3});
  REQUIRE(a.ga->tables.size() == 3);
  const GuardTermTable& g1 = a.ga->tables[0];
  REQUIRE(g1.moduli.size() == 2);
  CHECK(g1.moduli[0] == AlgebraicNumber(Rational(1, 2)));
  CHECK(g1.moduli[1] == AlgebraicNumber(1));

  const Coefficient& c = g1.terms.at({1, 0});
  CHECK(rational_part(c.c0) == parse_polynomial("-(x3^2 + 2*x3*x4 + 4*x4^2)/2 + (5*x1^2 + x2^2 - 2*x1*x2)/4", 5));
  CHECK(rational_part(c.c1) == parse_polynomial("(2*x4^2 - 2*x3*x4 - x3^2)/2", 5));
  REQUIRE(c.c2.parts.size() == 1);
  const auto& [key, part] = *c.c2.parts.begin();
  CHECK_FALSE(key.parity);
  REQUIRE(key.freq.size() == 1);
  CHECK(key.freq[0].second == 1);
  CHECK(rational_part(part.cos) == parse_polynomial("-(x1^2 + x2^2 - 6*x1*x2)/4", 5));
  CHECK(rational_part(part.sin) == parse_polynomial("(7*x1^2 - x2^2 - 2*x1*x2)/4", 5));
  // the torus angle is 3 times the argument of xi1^2
  const TorusAngle& ang = a.ga->torus.angles()[static_cast<size_t>(key.freq[0].first)];
  CHECK(ang.multiplier == 3);
  CHECK(ang.base.minpoly() == Poly({Rational(1), Rational(14, 25), Rational(1)}));
  CHECK(ang.base.box().im_lo > 0);

  // (-1)^{3n} x5 r1^{3n}
  const Coefficient& low = g1.terms.at({0, 0});
  CHECK(low.c0.is_zero());
  CHECK(low.c1.is_zero());
  REQUIRE(low.c2.parts.size() == 1);
  CHECK(low.c2.parts.begin()->first.parity);
  CHECK(rational_part(low.c2.parts.begin()->second.cos) == parse_polynomial("x5", 5));

  // C0 + C1 of the second and third residues
  CHECK(rational_part(a.ga->tables[1].terms.at({1, 0}).c0) + rational_part(a.ga->tables[1].terms.at({1, 0}).c1) ==
        parse_polynomial("-(x4 - x3/2)^2 + (5*x1^2 + x2^2 - 2*x1*x2)/4", 5));
  CHECK(rational_part(a.ga->tables[2].terms.at({1, 0}).c0) + rational_part(a.ga->tables[2].terms.at({1, 0}).c1) ==
        parse_polynomial("-(x3/2 + 2*x4)^2 + (5*x1^2 + x2^2 - 2*x1*x2)/4", 5));
}

TEST_CASE("example eta terms and moduli before specialization") {
  LoopSpec s = example_spec();
  ClosedForm cf = closed_form(s.update);
  ExpansionContext ctx(cf);
  GuardExpansion ge = substitute_guard(s.guards[0], 0, ctx);
  REQUIRE(ge.classes.size() == 2);
  CHECK(ge.classes[0].modulus == AlgebraicNumber(Rational(1, 2)));
  CHECK(ge.classes[1].modulus == AlgebraicNumber(1));
  CHECK(ge.terms.size() == 6);
  decompose_phases(ge, ctx, 30);
  CHECK(ge.decomposed);
  CHECK(compute_period(ge) == 3);
}

TEST_CASE("diagonal and trivial tables") {
  LoopSpec s;
  s.vars = {"x1"};
  s.update = RationalMatrix::from_rows({{Rational(1, 3)}});
  s.guards = {parse_polynomial("x1", 1)};
  Analysis a = run(s);
  REQUIRE(a.ga->tables.size() == 1);
  const auto& t = a.ga->tables[0];
  CHECK(t.period == 1);
  REQUIRE(t.terms.size() == 1);
  CHECK(t.moduli[0] == AlgebraicNumber(Rational(1, 3)));
  CHECK(rational_part(t.terms.begin()->second.c0) == parse_polynomial("x1", 1));
  CHECK(leading_candidates(t).size() == 1);

  LoopSpec d;
  d.vars = {"x1", "x2"};
  d.update = RationalMatrix::from_rows({{2, 0}, {0, Rational(1, 5)}});
  d.guards = {parse_polynomial("x1^2 - x1*x2 + 3*x2", 2)};
  Analysis b = run(d);
  for (const auto& tab : b.ga->tables)
    for (const auto& [ti, c] : tab.terms) {
      CHECK(c.c1.is_zero());
      CHECK(c.c2.is_zero());
    }
}

TEST_CASE("periods combine by lcm") {
  // rotation by 90 degrees and by 60 degrees
  LoopSpec s;
  s.vars = {"x1", "x2", "x3", "x4"};
  s.update = RationalMatrix::from_rows({{0, -1, 0, 0}, {1, 0, 0, 0}, {0, 0, 1, -1}, {0, 0, 1, 0}});
  s.guards = {parse_polynomial("x1 + x3", 4)};
  Analysis a = run(s);
  REQUIRE(a.ga->failure.empty());
  CHECK(a.ga->periods[0] == 12);
  CHECK(a.ga->tables.size() == 12);
}

TEST_CASE("table reconstruction against iteration") {
  std::mt19937_64 rng(5);
  int checked = 0;
  for (int trial = 0; trial < 14; ++trial) {
    int n = 2 + trial % 3;
    LoopSpec s;
    for (int i = 0; i < n; ++i) s.vars.push_back("x" + std::to_string(i + 1));
    s.update = testing::random_matrix(rng, n, 5);
    if (trial % 4 == 0) s.update(0, 0) = 0, s.update(1, 0) = 0;
    QPoly g = qpoly_constant(n, testing::random_rational(rng, 3));
    for (int t = 0; t < 3; ++t) {
      QPoly mono = qpoly_constant(n, testing::random_rational(rng, 4));
      int deg = 1 + static_cast<int>(rng() % 2);
      for (int k = 0; k < deg; ++k) mono = mono * qpoly_var(n, static_cast<int>(rng() % static_cast<unsigned>(n)));
      g = g + mono;
    }
    s.guards = {g};
    Analysis a = run(s, 12);
    if (!a.ga->failure.empty()) continue;
    ++checked;
    RationalVector x = testing::random_vector(rng, n, 4);
    for (const auto& tab : a.ga->tables)
      for (long k = 0; k <= 10; ++k) {
        long step = tab.period * k + tab.residue - 1 + a.cf.shift;
        Interval v = eval_table(tab, a.ga->torus, x, k, 320);
        CHECK(v.contains(guard_at(s, x, step)));
      }
  }
  CHECK(checked >= 8);
}

TEST_CASE("term order is total") {
  std::vector<TermIndex> idx;
  for (int k = 0; k < 3; ++k)
    for (int l = 0; l < 3; ++l) idx.push_back({k, l});
  for (const auto& a : idx)
    for (const auto& b : idx) {
      CHECK(term_compare(a, b) == -term_compare(b, a));
      CHECK((term_compare(a, b) == 0) == (a == b));
      for (const auto& c : idx)
        if (term_compare(a, b) < 0 && term_compare(b, c) < 0) CHECK(term_compare(a, c) < 0);
    }
  CHECK(term_compare({0, 0}, {1, 0}) < 0);
  CHECK(term_compare({1, 1}, {1, 2}) < 0);
}

TEST_CASE("leading candidates of the example") {
  Analysis a = run(example_spec());
  auto cand = leading_candidates(a.ga->tables[0]);
  REQUIRE(cand.size() == 2);
  CHECK(cand[0] == TermIndex{1, 0});
  CHECK(cand[1] == TermIndex{0, 0});
}

TEST_CASE("zero conditions of the oscillating part") {
  Analysis a = run(example_spec());
  const TrigPolynomial& c2 = a.ga->tables[0].terms.at({1, 0}).c2;
  auto conds = c2_zero_conditions(c2);
  REQUIRE(conds.size() == 2);
  // Both are binary quadratic forms; their only common real zero is the origin.
  QPoly q1 = rational_part(conds[0]), q2 = rational_part(conds[1]);
  auto dehomogenize = [](const QPoly& q) {
    std::vector<Rational> c(3);
    for (const auto& [e, v] : q.terms) c[static_cast<size_t>(e[0])] = v;
    return Poly(c);
  };
  Poly p1 = dehomogenize(q1), p2 = dehomogenize(q2);
  CHECK(gcd(p1, p2).degree() == 0);
  CHECK((p1.lc() != 0 || p2.lc() != 0));
  CHECK(c2_zero_conditions(TrigPolynomial{}).empty());

  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    RationalVector x = testing::random_vector(rng, 5, 9);
    x[0] = x[1] = 0;
    for (const auto& p : conds) CHECK(eval_enclosure(p, x, 64).contains(Rational(0)));
    for (long n = 1; n <= 50; n += 7) {
      Coefficient only;
      only.c2 = c2;
      CHECK(eval_coefficient(only, a.ga->torus, x, n, 128).contains(Rational(0)));
    }
  }
}
