#include "loopterm/sas.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <regex>

using namespace loopterm;

namespace {

struct Example {
  ClosedForm cf;
  std::unique_ptr<ExpansionContext> ctx;
  std::unique_ptr<GuardAnalysis> ga;
};

const Example& example() {
  static Example* e = [] {
    auto* a = new Example;
    LoopSpec s;
    s.vars = {"x1", "x2", "x3", "x4", "x5"};
    s.update = testing::example_matrix();
    s.guards = {parse_polynomial("x5 + x1^2 + x1*x2 - x3^2 - 2*x3*x4 - x4^2", 5)};
    a->cf = closed_form(s.update);
    a->ctx = std::make_unique<ExpansionContext>(a->cf);
    a->ga = analyze_guards(s, *a->ctx, 30);
    return a;
  }();
  return *e;
}

std::vector<std::string> z3() {
#ifdef LOOPTERM_Z3
  if (std::string(LOOPTERM_Z3).size()) return solver_command(LOOPTERM_Z3);
#endif
  return default_solver_command();
}

Rational rq(std::mt19937_64& rng, int bound) {
  Rational q = testing::random_rational(rng, bound);
  q.canonicalize();
  return q;
}

QPoly at(const std::string& text, int nx, int n) { return lift(parse_polynomial(text, nx), n); }

// Parses text written with the layout's names (y1_1, z, ...).
QPoly tp(const std::string& text, const Layout& L) {
  std::string s = text;
  for (int v = L.size() - 1; v >= L.nx; --v)
    s = std::regex_replace(s, std::regex("\\b" + L.name(v) + "\\b"), "x" + std::to_string(v + 1));
  return parse_polynomial(s, L.size());
}

Layout torus_layout(int nx, int ntorus) {
  Layout L;
  L.nx = nx;
  L.ntorus = ntorus;
  return L;
}

APoly algebraic(const QPoly& p) {
  APoly a(p.nvars);
  for (const auto& [e, c] : p.terms) a.terms[e] = AlgebraicNumber(c);
  return a;
}

AlgebraicNumber unit_phase() {
  for (auto& r : isolate_roots(Poly({Rational(1), Rational(-6, 5), Rational(1)})))
    if (r.box().im_lo > 0) return r;
  throw std::logic_error("no root in the upper half-plane");
}

// C0 + a cos + b sin over one angle, x in one variable.
struct Boundary {
  GuardTermTable table;
  TorusRegistry torus;
  Coefficient c;
};

Boundary boundary(const std::string& c0) {
  Boundary b;
  int t = b.torus.find_or_add(unit_phase(), 1);
  b.c.c0 = algebraic(parse_polynomial(c0, 1));
  b.c.c2.parts[FreqKey{false, {{t, 1}}}] =
      TrigPart{algebraic(parse_polynomial("3*x1^2", 1)), algebraic(parse_polynomial("4*x1^2", 1))};
  b.table.nvars = 1;
  b.table.moduli = {AlgebraicNumber(1)};
  b.table.terms[{0, 0}] = b.c;
  return b;
}

TorusFormula single_angle(const QPoly& p, Rel r, bool forall, int nx) {
  TorusFormula f;
  f.layout.nx = nx;
  f.layout.ntorus = 1;
  Formula a = Formula::atom(p, r);
  f.formula = forall ? Formula::forall({0}, false, a) : Formula::exists({0}, false, a);
  return f;
}

int count(const std::string& s, const std::string& pat) {
  int k = 0;
  for (size_t i = s.find(pat); i != std::string::npos; i = s.find(pat, i + 1)) ++k;
  return k;
}

}  // namespace

TEST_CASE("positivity of the leading example coefficient") {
  const Example& e = example();
  Layout L = make_layout(e.ga->tables, e.ga->torus, 5);
  Formula f = positivity(e.ga->tables[0].terms.at({1, 0}), true, L);
  REQUIRE(f.kind == Formula::Kind::Forall);
  CHECK(f.torus == std::vector<int>{0});
  CHECK_FALSE(f.parity);
  REQUIRE(f.args[0].kind == Formula::Kind::Atom);
  CHECK(f.args[0].rel == Rel::Gt);
  int n = L.size();
  QPoly want = at("-(x3 + x4)^2 + (5*x1^2 + x2^2 - 2*x1*x2)/4", 5, n) +
               at("-(x1^2 + x2^2 - 6*x1*x2)/4", 5, n) * qpoly_var(n, L.cos_var(0)) +
               at("(7*x1^2 - x2^2 - 2*x1*x2)/4", 5, n) * qpoly_var(n, L.sin_var(0));
  CHECK(lift(f.args[0].poly, n) == want);

  Formula weak = positivity(e.ga->tables[0].terms.at({1, 0}), false, L);
  CHECK(weak.args[0].rel == Rel::Ge);
}

TEST_CASE("positivity agrees with direct evaluation") {
  const Example& e = example();
  Layout L = make_layout(e.ga->tables, e.ga->torus, 5);
  std::mt19937_64 rng(7);
  for (const auto& table : e.ga->tables)
    for (const auto& [idx, c] : table.terms) {
      Formula f = positivity(c, true, L);
      QPoly p = f.is_quantifier() ? f.args[0].poly : f.poly;
      QPoly direct = coefficient_qpoly(c, L);
      for (int trial = 0; trial < 5; ++trial) {
        RationalVector v = testing::random_vector(rng, 5, 5);
        // rational points on the circle and parity
        Rational s = rq(rng, 5);
        Rational cs = (1 - s * s) / (1 + s * s), sn = 2 * s / (1 + s * s);
        v.resize(static_cast<size_t>(L.parity_var() + 1));
        v[static_cast<size_t>(L.cos_var(0))] = cs;
        v[static_cast<size_t>(L.sin_var(0))] = sn;
        v[static_cast<size_t>(L.parity_var())] = trial % 2 ? 1 : -1;
        int n = std::max(p.nvars, direct.nvars);
        if (n > static_cast<int>(v.size())) continue;  // irrational constants present
        CHECK(eval(lift(p, static_cast<int>(v.size())), v) == eval(lift(direct, static_cast<int>(v.size())), v));
      }
    }
}

TEST_CASE("build_system counts one constraint per guessed or higher term") {
  const Example& e = example();
  const auto& tables = e.ga->tables;
  for (int pick = 0; pick < 2; ++pick) {
    std::vector<TermIndex> guess;
    int expected = 0;
    for (const auto& t : tables) {
      auto cands = leading_candidates(t);
      REQUIRE(static_cast<int>(cands.size()) > pick);
      guess.push_back(cands[static_cast<size_t>(pick)]);
      int higher = 0;
      for (const auto& [idx, c] : t.terms)
        if (term_compare(idx, guess.back()) > 0) ++higher;
      expected += 1 + higher;
    }
    Layout L = make_layout(tables, e.ga->torus, 5);
    Formula f = build_system(guess, tables, L);
    CHECK(count_atoms(f) == expected);
  }
}

TEST_CASE("emitted scripts") {
  const Example& e = example();
  TorusFormula f;
  f.layout = make_layout(e.ga->tables, e.ga->torus, 5);
  f.formula = build_system({{1, 0}, {1, 0}, {1, 0}}, e.ga->tables, f.layout);
  std::string s = emit_query(f);
  CHECK(count(s, "(forall ") == 1);
  CHECK(count(s, "(exists ") == 0);
  CHECK(s.find("(forall ((y1_1 Real) (y1_2 Real))") != std::string::npos);
  CHECK(s.find("(set-logic NRA)") != std::string::npos);
  CHECK(emit_query(f) == s);

  TorusFormula back = parse_query(s);
  CHECK(back.formula == f.formula);
  CHECK(emit_query(back) == s);

  TorusFormula qf;
  qf.layout.nx = 1;
  qf.formula = Formula::atom(at("x1", 1, 1), Rel::Gt);
  std::string t = emit_query(qf);
  CHECK(t.find("QF_NRA") != std::string::npos);
  CHECK(t.find("forall") == std::string::npos);
  CHECK(t.find("(assert (> x1 0.0))") != std::string::npos);
}

TEST_CASE("round trip with constants and amplitudes") {
  TorusFormula f = single_angle(tp("1 + x1*y1_1 + x2*y1_2", torus_layout(2, 1)), Rel::Gt, true, 2);
  AlgebraicNumber sqrt2 = isolate_roots(Poly({Rational(-2), Rational(0), Rational(1)})).back();
  REQUIRE(sqrt2.is_real());
  int k = f.layout.constant_var(f.layout.constant_index(sqrt2));
  TorusFormula g = eliminate(f);
  g.formula = Formula::conj({g.formula, Formula::atom(qpoly_var(g.layout.size(), k) - at("x1", 2, g.layout.size()),
                                                      Rel::Ne)});
  std::string s = emit_query(g);
  TorusFormula back = parse_query(s);
  CHECK(back.formula == g.formula);
  CHECK(emit_query(back) == s);
  REQUIRE(back.layout.constants.size() == 1);
  CHECK(back.layout.constants[0] == sqrt2);
  REQUIRE(back.layout.amplitudes.size() == 1);
  CHECK(lift(back.layout.amplitudes[0], 7) == lift(g.layout.amplitudes[0], 7));
}

TEST_CASE("simplest rationals and solver models") {
  CHECK(simplest_rational(Rational(1, 3), Rational(1, 2)) == Rational(1, 2));
  CHECK(simplest_rational(Rational(3, 10), Rational(17, 50)) == Rational(1, 3));
  CHECK(simplest_rational(Rational(-12, 5), Rational(-11, 5)) == Rational(-7, 3));
  CHECK(simplest_rational(Rational(-1), Rational(2)) == 0);
  CHECK(simplest_rational(Rational(7, 2), Rational(7, 2)) == Rational(7, 2));

  auto m = parse_model(
      "(\n  (define-fun x1 () Real\n    (/ 1.0 4.0))\n  (define-fun x2 () Real (root-obj (+ (^ x 2) (- 2)) 1))\n"
      "  (define-fun x3 () Real (- 3.0))\n  (define-fun b () Bool true)\n)");
  REQUIRE(m.size() == 3);
  CHECK(m.at("x1") == AlgebraicNumber(Rational(1, 4)));
  CHECK(m.at("x3") == AlgebraicNumber(-3));
  CHECK(m.at("x2").minpoly() == Poly({Rational(-2), Rational(0), Rational(1)}));
  CHECK(m.at("x2").box().re_hi < 0);
  CHECK_THROWS(parse_sexprs("(a (b)"));
  CHECK_THROWS(parse_model("(define-fun x () Real 1.5?)"));
}

TEST_CASE("torus minimum of a single phase") {
  Rational eps(1, 1000000000);
  TorusFormula f = single_angle(tp("3*y1_1 + 4*y1_2", torus_layout(0, 1)), Rel::Gt, true, 0);
  f.layout.nx = 0;
  Interval m = torus_min_certify(tp("3*y1_1 + 4*y1_2", torus_layout(0, 1)), f.layout, {}, eps);
  CHECK(m.contains(Rational(-5)));
  CHECK(m.width() <= eps);

  std::mt19937_64 rng(11);
  Layout L;
  L.ntorus = 1;
  for (int trial = 0; trial < 50; ++trial) {
    Rational a = rq(rng, 9), b = rq(rng, 9),
             c = rq(rng, 9);
    QPoly p = qpoly_constant(2, c) + qpoly_var(2, 0) * a + qpoly_var(2, 1) * b;
    Interval got = torus_min_certify(p, L, {}, eps);
    Interval want = Interval(c, 256) - (Interval(a * a + b * b, 256)).sqrt();
    CHECK(got.width() <= eps);
    CHECK(got.lower() <= want.upper() + eps);
    CHECK(got.upper() >= want.lower() - eps);
  }
}

TEST_CASE("torus minimum at the example point") {
  const Example& e = example();
  Rational eps(1, 1000000000);
  RationalVector x0 = {1, 0, 0, 0, 0};
  Interval got = torus_min_certify(e.ga->tables[0].terms.at({1, 0}), e.ga->torus, x0, eps);
  // 5/4 - sqrt(50)/4: C0 + C1 = 5/4 and the phase amplitude is sqrt(1/16 + 49/16)
  Interval want = Interval(Rational(5, 4), 256) - Interval(Rational(50), 256).sqrt() * Interval(Rational(1, 4), 256);
  CHECK(got.width() <= eps);
  CHECK(got.lower() <= want.upper() + eps);
  CHECK(got.upper() >= want.lower() - eps);
  CHECK(got.upper() < Rational(-1, 2));
}

TEST_CASE("torus minimum against a grid") {
  std::mt19937_64 rng(3);
  Layout L;
  L.ntorus = 2;
  Rational eps(1, 1000000);
  for (int trial = 0; trial < 6; ++trial) {
    QPoly p(4);
    for (int i = 0; i < 6; ++i) {
      Exponents ex(4, 0);
      for (int v = 0; v < 4; ++v) ex[static_cast<size_t>(v)] = static_cast<int>(rng() % 2);
      p.terms[ex] += rq(rng, 5);
    }
    Interval got = torus_min_certify(p, L, {}, eps);
    double grid = INFINITY;
    for (int i = 0; i < 100; ++i)
      for (int j = 0; j < 100; ++j) {
        double th = 2 * M_PI * i / 100, ph = 2 * M_PI * j / 100;
        double y[4] = {std::cos(th), std::sin(th), std::cos(ph), std::sin(ph)};
        double s = 0;
        for (const auto& [ex, c] : p.terms) {
          double t = c.get_d();
          for (int v = 0; v < 4; ++v) t *= std::pow(y[v], ex[static_cast<size_t>(v)]);
          s += t;
        }
        grid = std::min(grid, s);
      }
    CHECK(got.lower_d() <= grid + 1e-9);
    CHECK(got.upper_d() <= grid + 1e-5);
    CHECK(got.width() <= eps);
  }
}

TEST_CASE("elimination of linear torus atoms and parity") {
  TorusFormula f = single_angle(tp("3 + x1*y1_1", torus_layout(1, 1)), Rel::Gt, true, 1);
  TorusFormula g = eliminate(f);
  CHECK_FALSE(has_quantifier(g.formula));
  REQUIRE(g.layout.amplitudes.size() == 1);
  CHECK(lift(g.layout.amplitudes[0], 5) == at("x1^2", 1, 5));
  REQUIRE(g.formula.kind == Formula::Kind::Atom);
  int n = g.layout.size();
  CHECK(lift(g.formula.poly, n) == qpoly_constant(n, 3) - qpoly_var(n, g.layout.amplitude_var(0)));

  TorusFormula h;
  h.layout.nx = 1;
  h.formula = Formula::forall({}, true, Formula::atom(tp("x1*z", torus_layout(1, 0)), Rel::Gt));
  h.layout.ntorus = 0;
  TorusFormula hz = eliminate(h);
  CHECK_FALSE(has_quantifier(hz.formula));
  CHECK(count_atoms(hz.formula) == 2);

  // quadratic in the angle stays quantified
  TorusFormula q = single_angle(tp("x1 + y1_1^2", torus_layout(1, 1)), Rel::Gt, true, 1);
  CHECK(has_quantifier(eliminate(q).formula));
}

TEST_CASE("certification of fixed points") {
  Rational eps(1, 1000000000);
  TorusFormula f = single_angle(tp("x1 - 2*y1_1", torus_layout(1, 1)), Rel::Gt, true, 1);
  CHECK(certify_model(f, {3}, eps) == Truth::True);
  CHECK(certify_model(f, {1}, eps) == Truth::False);
  TorusFormula e = single_angle(tp("x1 - 2*y1_1", torus_layout(1, 1)), Rel::Lt, false, 1);
  CHECK(certify_model(e, {1}, eps) == Truth::True);
  CHECK(certify_model(e, {3}, eps) == Truth::False);
}

TEST_CASE("solving without an external solver") {
  SolverConfig cfg;
  TorusFormula pos;
  pos.layout.nx = 1;
  pos.formula = Formula::atom(at("x1", 1, 1), Rel::Gt);
  SolverOutcome r = solve(pos, cfg);
  REQUIRE(r.tag == SolverOutcome::Tag::Sat);
  CHECK(r.model[0] > 0);

  TorusFormula hard;
  hard.layout.nx = 1;
  hard.formula = Formula::atom(at("x1^2 + 1", 1, 1), Rel::Lt);
  SolverOutcome u = solve(hard, cfg);
  CHECK(u.tag == SolverOutcome::Tag::Unknown);
  CHECK(u.reason.find("no external solver") != std::string::npos);

  TorusFormula ground = single_angle(tp("1 + y1_1", torus_layout(0, 1)), Rel::Gt, true, 0);
  CHECK(solve(ground, cfg).tag == SolverOutcome::Tag::Unsat);
  TorusFormula ground2 = single_angle(tp("1 + y1_1", torus_layout(0, 1)), Rel::Ge, true, 0);
  CHECK(solve(ground2, cfg).tag == SolverOutcome::Tag::Sat);
}

TEST_CASE("subprocess handling") {
  ProcessResult missing = run_process({"/nonexistent/solver"}, "", 2000);
  CHECK_FALSE(missing.launched);
  ProcessResult slow = run_process({"sleep", "5"}, "", 200);
  CHECK(slow.launched);
  CHECK(slow.timed_out);
  ProcessResult echo = run_process({"cat"}, "hello", 2000);
  CHECK(echo.out == "hello");
  CHECK(echo.exit_code == 0);

  SolverConfig cfg;
  cfg.command = {"/nonexistent/solver"};
  TorusFormula hard;
  hard.layout.nx = 1;
  hard.formula = Formula::atom(at("x1^2 + 1", 1, 1), Rel::Lt);
  SolverOutcome r = solve(hard, cfg);
  CHECK(r.tag == SolverOutcome::Tag::Unknown);
  CHECK(r.reason.find("could not be started") != std::string::npos);
  CHECK(solver_command("z3") == std::vector<std::string>{"z3", "-in", "-smt2"});
  CHECK(solver_command("none").empty());
}

TEST_CASE("boundary instance violates the assumption") {
  Rational eps(1, 1000000000);
  Boundary b = boundary("5*x1^2");
  TorusFormula f;
  f.layout = make_layout({b.table}, b.torus, 1);
  f.formula = assumption_violation(b.c, f.layout);
  // minimum 5x^2 - 5x^2 = 0 is attained everywhere
  Interval m = torus_min_certify(b.c, b.torus, {1}, eps);
  CHECK(m.contains(Rational(0)));
  SolverOutcome r = solve(f, SolverConfig{});
  REQUIRE(r.tag == SolverOutcome::Tag::Sat);
  CHECK(r.model[0] != 0);

  Boundary ok = boundary("6*x1^2");
  TorusFormula g;
  g.layout = make_layout({ok.table}, ok.torus, 1);
  g.formula = assumption_violation(ok.c, g.layout);
  auto cmd = z3();
  if (cmd.empty()) return;
  SolverConfig cfg;
  cfg.command = cmd;
  CHECK(solve(g, cfg).tag == SolverOutcome::Tag::Unsat);
}

TEST_CASE("example systems with the external solver") {
  auto cmd = z3();
  if (cmd.empty()) {
    MESSAGE("z3 not found; skipping");
    return;
  }
  SolverConfig cfg;
  cfg.command = cmd;
  const Example& e = example();

  TorusFormula pos;
  pos.layout.nx = 1;
  pos.formula = Formula::atom(at("x1", 1, 1), Rel::Gt);
  SolverOutcome p = solve(pos, cfg);
  REQUIRE(p.tag == SolverOutcome::Tag::Sat);
  CHECK(p.model[0] > 0);

  TorusFormula f;
  f.layout = make_layout(e.ga->tables, e.ga->torus, 5);
  f.formula = build_system({{1, 0}, {1, 0}, {1, 0}}, e.ga->tables, f.layout);
  SolverOutcome r = solve(f, cfg);
  CHECK_MESSAGE(r.tag == SolverOutcome::Tag::Unsat, r.reason);

  for (const auto& table : e.ga->tables)
    for (const auto& [idx, c] : table.terms) {
      TorusFormula v;
      v.layout = make_layout(e.ga->tables, e.ga->torus, 5);
      v.formula = assumption_violation(c, v.layout);
      SolverOutcome a = solve(v, cfg);
      CHECK_MESSAGE(a.tag == SolverOutcome::Tag::Unsat, "residue ", table.residue, " term ", idx.k, ",", idx.l,
                    " ", a.reason);
    }
}

TEST_CASE("systems built around a witness are satisfiable") {
  auto cmd = z3();
  SolverConfig cfg;
  cfg.command = cmd;
  std::mt19937_64 rng(5);
  Rational eps(1, 1000000000);
  for (int trial = 0; trial < 8; ++trial) {
    RationalVector w = testing::random_vector(rng, 2, 4);
    QPoly a = qpoly_constant(4, rq(rng, 4)) + qpoly_var(4, 0) * rq(rng, 4);
    QPoly b = qpoly_var(4, 1) * rq(rng, 4);
    QPoly c = qpoly_var(4, 0) * qpoly_var(4, 1) * rq(rng, 4);
    Rational va = eval(a, {w[0], w[1], 0, 0}), vb = eval(b, {w[0], w[1], 0, 0}), vc = eval(c, {w[0], w[1], 0, 0});
    Rational shift = abs(va) + abs(vb) + abs(vc) + 1;
    QPoly p = c - qpoly_constant(4, vc) + qpoly_constant(4, shift) + a * qpoly_var(4, 2) + b * qpoly_var(4, 3);
    TorusFormula f = single_angle(p, Rel::Gt, true, 2);
    REQUIRE(certify_model(f, w, eps) == Truth::True);
    SolverOutcome r = solve(f, cfg);
    REQUIRE(r.tag == SolverOutcome::Tag::Sat);
    CHECK(certify_model(f, r.model, eps) == Truth::True);
  }
}
