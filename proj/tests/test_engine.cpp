#include "loopterm/engine.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <fstream>
#include <sstream>

using namespace loopterm;

namespace {

LoopSpec load(const std::string& name) {
  std::ifstream in(std::string(LOOPTERM_TEST_DATA) + "/" + name);
  REQUIRE(in);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_loop(ss.str());
}

std::vector<std::string> z3() {
#ifdef LOOPTERM_Z3
  if (std::string(LOOPTERM_Z3).size()) return solver_command(LOOPTERM_Z3);
#endif
  return default_solver_command();
}

EngineConfig with_solver() {
  EngineConfig c;
  c.solver = z3();
  return c;
}

LoopSpec rotation_square() {
  return parse_loop("vars x1 x2;\nwhile (x1^2 > 0) { x1 := 3/5*x1 - 4/5*x2; x2 := 4/5*x1 + 3/5*x2; }");
}

}  // namespace

TEST_CASE("example loop terminates") {
  EngineConfig cfg = with_solver();
  if (cfg.solver.empty()) {
    MESSAGE("z3 not found; skipping");
    return;
  }
  Report r = analyze(load("example1.loop"), cfg);
  CHECK_MESSAGE(r.verdict == Verdict::Terminating, r.reason);
  CHECK(r.assumption.aggregate == AssumptionStatus::Holds);
  CHECK(r.guesses_total == 1);
  REQUIRE(r.tables.size() == 3);
  for (const auto& t : r.tables) CHECK(t.candidates.size() == 1);
  for (const auto& g : r.guesses) CHECK(g.outcome.tag == SolverOutcome::Tag::Unsat);
  CHECK_FALSE(r.witness);
}

TEST_CASE("example loop without a solver is unknown") {
  EngineConfig cfg;
  Report r = analyze(load("example1.loop"), cfg);
  CHECK(r.verdict == Verdict::Unknown);
  CHECK(r.reason.find("no external solver") != std::string::npos);
}

TEST_CASE("unpruned guesses give the same verdict") {
  EngineConfig cfg = with_solver();
  if (cfg.solver.empty()) return;
  cfg.prune_mean_zero = false;
  Report r = analyze(load("example1.loop"), cfg);
  CHECK(r.verdict == Verdict::Terminating);
  CHECK(r.guesses_total == 8);
}

TEST_CASE("identity loop is nonterminating") {
  EngineConfig cfg;
  cfg.max_iter = 100;
  Report r = analyze(load("identity.loop"), cfg);
  REQUIRE(r.verdict == Verdict::Nonterminating);
  REQUIRE(r.witness);
  CHECK(r.witness->x0[0] > 0);
  CHECK_FALSE(r.witness->discrepancy);
}

TEST_CASE("halving loop is nonterminating") {
  EngineConfig cfg;
  cfg.max_iter = 200;
  Report r = analyze(load("halving.loop"), cfg);
  REQUIRE(r.verdict == Verdict::Nonterminating);
  CHECK_FALSE(r.witness->discrepancy);
}

TEST_CASE("gadget with an integer root") {
  EngineConfig cfg = with_solver();
  cfg.max_iter = 10000;
  LoopSpec spec = diophantine_gadget(gadget_input(parse_polynomial("x1 - 3")));
  Report r = analyze(spec, cfg);
  REQUIRE(r.verdict == Verdict::Nonterminating);
  CHECK(r.witness->x0[0] == 3);
  CHECK(r.witness->x0[1] > 0);
  CHECK_FALSE(r.witness->discrepancy);
}

TEST_CASE("nilpotent updates") {
  EngineConfig cfg;
  cfg.max_iter = 50;
  Report a = analyze(parse_loop("vars x y;\nwhile (x + 1 > 0) { x := y; y := 0*y; }"), cfg);
  CHECK(a.verdict == Verdict::Nonterminating);
  Report b = analyze(parse_loop("vars x y;\nwhile (x > 0) { x := y; y := 0*y; }"), cfg);
  CHECK(b.verdict == Verdict::Terminating);
}

TEST_CASE("boundary assumption violation") {
  LoopSpec spec = rotation_square();
  ClosedForm cf = closed_form(spec.update);
  ExpansionContext ctx(cf);
  auto ga = analyze_guards(spec, ctx, 30);
  REQUIRE(ga->failure.empty());
  AssumptionCheck a = check_assumption(*ga, 2, EngineConfig{});
  CHECK(a.aggregate == AssumptionStatus::Violated);

  EngineConfig cfg;
  cfg.solver = z3();
  Report r = analyze(spec, cfg);
  if (!cfg.solver.empty()) {
    CHECK(r.verdict == Verdict::Unknown);
    CHECK(r.reason.find("violated") != std::string::npos);
  }
  CHECK(r.verdict != Verdict::Terminating);
}

TEST_CASE("assumption holds vacuously without oscillation") {
  LoopSpec spec = load("halving.loop");
  ClosedForm cf = closed_form(spec.update);
  ExpansionContext ctx(cf);
  auto ga = analyze_guards(spec, ctx, 30);
  CHECK(check_assumption(*ga, 1, EngineConfig{}).aggregate == AssumptionStatus::Vacuous);
}

TEST_CASE("witness packages flag late positivity") {
  LoopSpec spec = parse_loop("vars x y;\nwhile (x > 0) { x := x + y; y := y; }");
  EngineConfig cfg;
  cfg.max_iter = 50;
  WitnessRecord w = witness_package({-4, 1}, {}, spec, cfg);
  CHECK(w.discrepancy);
  CHECK(w.first_failure == 0);
  CHECK(w.shift == 5);
  CHECK(w.shifted_survives);
  WitnessRecord ok = witness_package({1, 1}, {}, spec, cfg);
  CHECK_FALSE(ok.discrepancy);
}

TEST_CASE("reports are deterministic") {
  EngineConfig cfg = with_solver();
  LoopSpec spec = diophantine_gadget(gadget_input(parse_polynomial("x1^2 - 4")));
  cfg.max_iter = 200;
  Report a = analyze(spec, cfg), b = analyze(spec, cfg);
  CHECK(render_json(a, false) == render_json(b, false));
  CHECK(render_human(a, false) == render_human(b, false));
  CHECK(render_json(a, false).find("timings") == std::string::npos);
  CHECK(render_json(a, true).find("timings") != std::string::npos);
}

TEST_CASE("simulation") {
  RunResult ex = simulate(load("example1.loop"), {1, 1, 1, 1, 1}, 10000);
  CHECK(ex.tag == RunResult::Tag::Terminated);
  CHECK(ex.steps == 0);  // guard value -1 at the start
  RunResult ex2 = simulate(load("example1.loop"), {1, 0, 0, 0, 1}, 10000);
  CHECK(ex2.tag == RunResult::Tag::Terminated);
  CHECK(ex2.steps == 3);

  LoopSpec g = diophantine_gadget(gadget_input(parse_polynomial("x1^2 - 4")));
  RunResult gr = simulate(g, {2, 1}, 2000, true);
  CHECK(gr.tag == RunResult::Tag::BudgetExceeded);
  CHECK(gr.trace.size() == 2000);
  CHECK(gr.trace[3][0] == Rational(1, 8));

  RunResult h = simulate(load("halving.loop"), {1}, 500);
  CHECK(h.tag == RunResult::Tag::BudgetExceeded);

  RunResult zero = simulate(load("halving.loop"), {0}, 500);
  CHECK(zero.tag == RunResult::Tag::Terminated);
  CHECK(zero.steps == 0);
}

TEST_CASE("simulation agrees with the closed form") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    int n = 1 + static_cast<int>(rng() % 3);
    LoopSpec s;
    for (int i = 0; i < n; ++i) s.vars.push_back("x" + std::to_string(i + 1));
    s.update = testing::random_matrix(rng, n, 4);
    QPoly g = qpoly_constant(n, 1);
    for (int i = 0; i < n; ++i) g = g + qpoly_var(n, i) * qpoly_var(n, i) * Rational(i + 1);
    s.guards = {g};
    RationalVector x0 = testing::random_vector(rng, n, 4);
    ClosedForm cf = closed_form(s.update);
    RunResult r = simulate(s, x0, 26, true);
    REQUIRE(r.tag == RunResult::Tag::BudgetExceeded);
    for (long k = 0; k <= 25; ++k) CHECK(r.trace[static_cast<size_t>(k)][0] == eval(g, eval_closed_form(cf, x0, k)));
  }
}

TEST_CASE("falsification search") {
  SearchBudget b;
  b.samples = 40;
  b.max_iter = 200;
  auto id = falsify_search(load("identity.loop"), b);
  REQUIRE_FALSE(id.empty());
  CHECK(id[0].survived == 200);
  CHECK(id[0].x0[0] > 0);
  auto again = falsify_search(load("identity.loop"), b);
  CHECK(again[0].x0 == id[0].x0);

  auto ex = falsify_search(load("example1.loop"), b);
  for (const auto& c : ex) CHECK(c.survived < 200);

  auto gad = falsify_search(diophantine_gadget(gadget_input(parse_polynomial("x1 - 3"))), b);
  CHECK(gad[0].survived == 200);
  CHECK(gad[0].x0[0] == 3);
}
