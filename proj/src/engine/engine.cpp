#include "loopterm/engine.hpp"

#include <chrono>

namespace loopterm {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Nonterminating: return "Nonterminating";
    case Verdict::Terminating: return "Terminating";
    case Verdict::TerminatingUnderAssumption: return "TerminatingUnderAssumption";
    case Verdict::Unknown: return "Unknown";
  }
  return "?";
}

std::string to_string(AssumptionStatus s) {
  switch (s) {
    case AssumptionStatus::Holds: return "holds";
    case AssumptionStatus::Vacuous: return "vacuous";
    case AssumptionStatus::Violated: return "violated";
    case AssumptionStatus::Unverified: return "unverified";
  }
  return "?";
}

namespace {

SolverConfig solver_config(const EngineConfig& cfg) {
  SolverConfig sc;
  sc.command = cfg.solver;
  sc.timeout_ms = cfg.timeout_ms;
  sc.eps = cfg.eps;
  sc.seed = cfg.seed;
  return sc;
}

class Stopwatch {
 public:
  explicit Stopwatch(std::vector<std::pair<std::string, double>>& out) : out_(out) {}
  void lap(const std::string& name) {
    auto now = std::chrono::steady_clock::now();
    out_.emplace_back(name, std::chrono::duration<double>(now - last_).count());
    last_ = now;
  }

 private:
  std::vector<std::pair<std::string, double>>& out_;
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

bool is_nilpotent(const ClosedForm& cf) { return cf.groups.empty(); }

void summarize_closed_form(const ClosedForm& cf, Report& r) {
  r.charpoly = cf.charpoly.to_string("lambda");
  r.shift = cf.shift;
  for (const auto& g : cf.groups) {
    EigenSummary e;
    e.factor = g.factor.to_string("lambda");
    e.multiplicity = g.multiplicity;
    for (const auto& root : g.roots) {
      e.roots.push_back(display(root));
      e.arguments.push_back(classify_argument(root).to_string());
    }
    r.eigen.push_back(std::move(e));
  }
}

void summarize_guards(const GuardAnalysis& ga, bool prune, Report& r) {
  for (size_t j = 0; j < ga.expansions.size(); ++j) {
    GuardSummary s;
    s.guard = static_cast<int>(j) + 1;
    s.period = j < ga.periods.size() ? ga.periods[j] : 0;
    for (const auto& c : ga.expansions[j].classes) {
      std::string line = "modulus " + display(c.modulus) + ": ";
      if (c.basis.empty()) line += "no phases";
      for (size_t b = 0; b < c.basis.size(); ++b) line += (b ? ", " : "") + display(c.basis[b]);
      s.classes.push_back(line);
    }
    r.guards.push_back(std::move(s));
  }
  for (const auto& t : ga.tables) {
    TableSummary s;
    s.guard = t.guard + 1;
    s.residue = t.residue;
    s.period = t.period;
    for (const auto& m : t.moduli) s.moduli.push_back(display(m));
    s.terms = static_cast<int>(t.terms.size());
    s.candidates = guess_candidates(t, prune);
    s.pruned = static_cast<int>(leading_candidates(t).size() - s.candidates.size());
    r.tables.push_back(std::move(s));
  }
  for (const auto& a : ga.torus.angles())
    r.torus.push_back(std::to_string(a.multiplier) + " * arg " + display(a.base));
}

bool oscillation_only(const Coefficient& c) { return c.c0.is_zero() && c.c1.is_zero(); }

void nilpotent_verdict(const LoopSpec& spec, const EngineConfig& cfg, Report& r) {
  RationalVector zero(static_cast<size_t>(spec.num_vars()), Rational(0));
  bool positive = true;
  for (const auto& g : spec.guards) positive = positive && eval(g, zero) > 0;
  if (positive) {
    r.verdict = Verdict::Nonterminating;
    r.reason = "nilpotent update; every guard is positive at the fixed point 0";
    r.witness = witness_package(zero, {}, spec, cfg);
  } else {
    r.verdict = Verdict::Terminating;
    r.reason = "nilpotent update; every run reaches 0 within " + std::to_string(spec.num_vars()) +
               " steps and some guard is not positive there";
  }
}

}  // namespace

std::vector<TermIndex> guess_candidates(const GuardTermTable& table, bool prune_mean_zero) {
  std::vector<TermIndex> out;
  for (const auto& t : leading_candidates(table))
    if (!prune_mean_zero || !oscillation_only(table.terms.at(t))) out.push_back(t);
  return out;
}

AssumptionCheck check_assumption(const GuardAnalysis& ga, int nvars, const EngineConfig& cfg) {
  AssumptionCheck out;
  SolverConfig sc = solver_config(cfg);
  bool any = false, unverified = false, violated = false;
  for (size_t j = 0; j < ga.tables.size(); ++j)
    for (const auto& [idx, c] : ga.tables[j].terms) {
      if (c.c2.is_zero()) continue;
      any = true;
      AssumptionEntry e;
      e.table = static_cast<int>(j);
      e.term = idx;
      TorusFormula f;
      f.layout = make_layout(ga.tables, ga.torus, nvars);
      f.formula = assumption_violation(c, f.layout);
      SolverOutcome o = solve(f, sc);
      switch (o.tag) {
        case SolverOutcome::Tag::Unsat: e.status = AssumptionStatus::Holds; break;
        case SolverOutcome::Tag::Sat:
          e.status = AssumptionStatus::Violated;
          e.reason = "minimum 0 attained at X = " + to_string(o.model);
          violated = true;
          break;
        case SolverOutcome::Tag::Unknown:
          e.status = AssumptionStatus::Unverified;
          e.reason = o.reason;
          unverified = true;
          break;
      }
      out.entries.push_back(std::move(e));
    }
  out.aggregate = violated     ? AssumptionStatus::Violated
                  : unverified ? AssumptionStatus::Unverified
                  : any        ? AssumptionStatus::Holds
                               : AssumptionStatus::Vacuous;
  return out;
}

WitnessRecord witness_package(const RationalVector& x0, const std::vector<TermIndex>& guess, const LoopSpec& spec,
                              const EngineConfig& cfg) {
  WitnessRecord w;
  w.x0 = x0;
  w.guess = guess;
  w.checked = cfg.max_iter;
  std::vector<long> fails = failing_steps(spec, x0, cfg.max_iter);
  if (fails.empty()) return w;
  w.discrepancy = true;
  w.first_failure = fails.front();
  w.shift = fails.back() + 1;
  RationalVector shifted = mat_apply_iter(spec.update, x0, static_cast<unsigned long>(w.shift));
  w.shifted_survives = simulate(spec, shifted, cfg.max_iter).tag == RunResult::Tag::BudgetExceeded;
  return w;
}

Report analyze(const LoopSpec& spec, const EngineConfig& cfg) {
  spec.validate();
  Report r;
  r.vars = spec.vars;
  Stopwatch clock(r.timings);

  ClosedForm cf = closed_form(spec.update);
  summarize_closed_form(cf, r);
  clock.lap("closed_form");
  if (is_nilpotent(cf)) {
    nilpotent_verdict(spec, cfg, r);
    clock.lap("simulation");
    return r;
  }

  ExpansionContext ctx(cf);
  std::unique_ptr<GuardAnalysis> ga = analyze_guards(spec, ctx, cfg.indep_cap);
  summarize_guards(*ga, cfg.prune_mean_zero, r);
  clock.lap("guard_expansion");
  if (!ga->failure.empty()) {
    r.verdict = Verdict::Unknown;
    r.reason = ga->failure;
    return r;
  }

  std::vector<std::vector<TermIndex>> cands;
  r.guesses_total = 1;
  for (const auto& t : ga->tables) {
    cands.push_back(guess_candidates(t, cfg.prune_mean_zero));
    r.guesses_total *= static_cast<long>(cands.back().size());
    if (r.guesses_total > cfg.max_guesses) break;
  }
  if (r.guesses_total > cfg.max_guesses) {
    r.verdict = Verdict::Unknown;
    r.reason = "more than " + std::to_string(cfg.max_guesses) + " leading-term guesses";
    return r;
  }

  SolverConfig sc = solver_config(cfg);
  std::string unknown;
  std::vector<size_t> pos(cands.size(), 0);
  for (long g = 0; g < r.guesses_total; ++g) {
    GuessRecord rec;
    for (size_t t = 0; t < cands.size(); ++t) rec.guess.push_back(cands[t][pos[t]]);
    TorusFormula f;
    f.layout = make_layout(ga->tables, ga->torus, spec.num_vars());
    f.formula = build_system(rec.guess, ga->tables, f.layout);
    rec.constraints = count_atoms(f.formula);
    rec.outcome = solve(f, sc);
    r.guesses.push_back(rec);
    if (rec.outcome.tag == SolverOutcome::Tag::Sat) {
      clock.lap("guesses");
      r.verdict = Verdict::Nonterminating;
      r.reason = "guess " + std::to_string(g + 1) + " is satisfiable";
      r.witness = witness_package(rec.outcome.model, rec.guess, spec, cfg);
      clock.lap("simulation");
      return r;
    }
    if (rec.outcome.tag == SolverOutcome::Tag::Unknown && unknown.empty())
      unknown = "guess " + std::to_string(g + 1) + ": " + rec.outcome.reason;
    // odometer, last table fastest
    for (size_t t = cands.size(); t-- > 0;) {
      if (++pos[t] < cands[t].size()) break;
      pos[t] = 0;
    }
  }
  clock.lap("guesses");
  if (!unknown.empty()) {
    r.verdict = Verdict::Unknown;
    r.reason = unknown;
    return r;
  }

  r.assumption = check_assumption(*ga, spec.num_vars(), cfg);
  clock.lap("assumption");
  switch (r.assumption.aggregate) {
    case AssumptionStatus::Holds:
    case AssumptionStatus::Vacuous:
      r.verdict = Verdict::Terminating;
      r.reason = "every guess is unsatisfiable and the assumption is verified";
      break;
    case AssumptionStatus::Unverified:
      r.verdict = Verdict::TerminatingUnderAssumption;
      r.reason = "every guess is unsatisfiable; the assumption could not be verified";
      break;
    case AssumptionStatus::Violated:
      r.verdict = Verdict::Unknown;
      r.reason = "every guess is unsatisfiable but the assumption is violated";
      break;
  }
  return r;
}

}  // namespace loopterm
