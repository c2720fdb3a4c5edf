#include "loopterm/engine.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace loopterm;

namespace {

constexpr int kError = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

LoopSpec load(const std::string& path) { return parse_loop(read_file(path)); }

// Accepts p/q, decimals and scientific notation such as 1e-9.
Rational parse_number(const std::string& text) {
  size_t e = text.find_first_of("eE");
  if (e == std::string::npos) {
    size_t dot = text.find('.');
    if (dot == std::string::npos) return parse_rational(text);
    std::string frac = text.substr(dot + 1);
    Integer den = 1;
    for (size_t i = 0; i < frac.size(); ++i) den *= 10;
    Rational q(Integer(text.substr(0, dot) + frac), den);
    q.canonicalize();
    return q;
  }
  Rational m = parse_number(text.substr(0, e));
  long k = std::stol(text.substr(e + 1));
  Rational p = 1;
  for (long i = 0; i < std::labs(k); ++i) p *= 10;
  return k < 0 ? Rational(m / p) : Rational(m * p);
}

RationalVector parse_point(const std::string& text, int n) {
  RationalVector x;
  std::istringstream is(text);
  for (std::string item; std::getline(is, item, ',');) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    x.push_back(parse_number(item));
  }
  if (static_cast<int>(x.size()) != n)
    throw std::invalid_argument("expected " + std::to_string(n) + " values, got " + std::to_string(x.size()));
  return x;
}

struct Options {
  std::string solver;
  long timeout_ms = 20000;
  long indep_cap = 30;
  std::string eps = "1e-9";
  long max_iter = 10000;
  unsigned long seed = 1;
  std::string format = "human";
  bool timings = false;
  bool no_prune = false;
};

EngineConfig engine_config(const Options& o) {
  EngineConfig c;
  c.solver = o.solver.empty() ? default_solver_command() : solver_command(o.solver);
  c.timeout_ms = o.timeout_ms;
  c.indep_cap = o.indep_cap;
  c.eps = parse_number(o.eps);
  if (c.eps <= 0) throw std::invalid_argument("--eps must be positive");
  c.max_iter = o.max_iter;
  c.seed = o.seed;
  c.prune_mean_zero = !o.no_prune;
  return c;
}

void add_engine_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--solver", o.solver, "Solver command line, or 'none' (default: z3 on PATH)");
  cmd->add_option("--timeout-ms", o.timeout_ms, "Solver timeout per query")->check(CLI::PositiveNumber);
  cmd->add_option("--indep-cap", o.indep_cap, "Search cap for multiplicative relations")->check(CLI::PositiveNumber);
  cmd->add_option("--eps", o.eps, "Width of certified torus minima");
  cmd->add_option("--max-iter", o.max_iter, "Simulation budget for witnesses")->check(CLI::NonNegativeNumber);
  cmd->add_option("--seed", o.seed, "Seed for sampling");
  cmd->add_option("--format", o.format, "human or json")->check(CLI::IsMember({"human", "json"}));
  cmd->add_flag("--timings", o.timings, "Include wall-clock timings in the report");
  cmd->add_flag("--no-prune", o.no_prune, "Keep candidate terms that are pure oscillations");
}

int cmd_analyze(const std::string& path, const Options& o) {
  LoopSpec spec = load(path);
  Report r = analyze(spec, engine_config(o));
  std::cout << (o.format == "json" ? render_json(r, o.timings) : render_human(r, o.timings));
  switch (r.verdict) {
    case Verdict::Terminating:
    case Verdict::TerminatingUnderAssumption: return 0;
    case Verdict::Nonterminating: return 1;
    case Verdict::Unknown: return 2;
  }
  return kError;
}

int cmd_simulate(const std::string& path, const std::string& x0, long max_iter, bool trace) {
  LoopSpec spec = load(path);
  RunResult r = simulate(spec, parse_point(x0, spec.num_vars()), max_iter, trace);
  if (r.tag == RunResult::Tag::Terminated)
    std::cout << "terminated at step " << r.steps << "\n";
  else
    std::cout << "budget exceeded after " << r.steps << " steps\n";
  std::cout << "largest coordinate: " << r.max_bits << " bits\n";
  for (size_t n = 0; n < r.trace.size(); ++n) {
    std::cout << n << ":";
    for (const auto& v : r.trace[n]) std::cout << " " << v.get_str();
    std::cout << "\n";
  }
  return 0;
}

int cmd_closed_form(const std::string& path) {
  LoopSpec spec = load(path);
  ClosedForm cf = closed_form(spec.update);
  std::cout << to_string(cf, spec.vars);
  RealForm rf = realify(cf);
  for (int j = 0; j < spec.num_vars(); ++j) std::cout << to_string(rf, j, spec.vars) << "\n";
  return 0;
}

int cmd_gadget(const std::string& poly) {
  std::cout << print_loop(diophantine_gadget(gadget_input(parse_polynomial(poly))));
  return 0;
}

int cmd_emit(const std::string& path, long index, const Options& o) {
  LoopSpec spec = load(path);
  EngineConfig cfg = engine_config(o);
  ClosedForm cf = closed_form(spec.update);
  ExpansionContext ctx(cf);
  auto ga = analyze_guards(spec, ctx, cfg.indep_cap);
  if (!ga->failure.empty()) throw std::runtime_error(ga->failure);
  std::vector<std::vector<TermIndex>> cands;
  long total = 1;
  for (const auto& t : ga->tables) {
    cands.push_back(guess_candidates(t, cfg.prune_mean_zero));
    total *= static_cast<long>(cands.back().size());
  }
  if (index < 1 || index > total)
    throw std::invalid_argument("guess " + std::to_string(index) + " out of range 1.." + std::to_string(total));
  std::vector<TermIndex> guess(cands.size());
  long rest = index - 1;
  for (size_t t = cands.size(); t-- > 0;) {
    guess[t] = cands[t][static_cast<size_t>(rest % static_cast<long>(cands[t].size()))];
    rest /= static_cast<long>(cands[t].size());
  }
  TorusFormula f;
  f.layout = make_layout(ga->tables, ga->torus, spec.num_vars());
  f.formula = build_system(guess, ga->tables, f.layout);
  std::cout << emit_query(f);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Termination analysis for linear loops with polynomial guards"};
  app.require_subcommand(1);
  Options opts;
  std::string path, x0, poly;
  long max_iter = 10000, guess = 1;
  bool trace = false;

  auto* analyze_cmd = app.add_subcommand("analyze", "Decide termination over the reals");
  analyze_cmd->add_option("file", path, "Loop file")->required();
  add_engine_flags(analyze_cmd, opts);

  auto* sim = app.add_subcommand("simulate", "Run the loop exactly from one input");
  sim->add_option("file", path, "Loop file")->required();
  sim->add_option("--x0", x0, "Comma-separated rationals")->required();
  sim->add_option("--max-iter", max_iter, "Step budget")->check(CLI::NonNegativeNumber);
  sim->add_flag("--trace", trace, "Print guard values per step");

  auto* cfc = app.add_subcommand("closed-form", "Print the closed form of the update");
  cfc->add_option("file", path, "Loop file")->required();

  auto* gad = app.add_subcommand("gadget", "Print the loop encoding an integer polynomial");
  gad->add_option("polynomial", poly, "Polynomial in x1, x2, ...")->required();

  auto* emit = app.add_subcommand("emit-smt", "Print the solver script for one guess");
  emit->add_option("file", path, "Loop file")->required();
  emit->add_option("--guess", guess, "1-based guess index in enumeration order");
  add_engine_flags(emit, opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kError;
  }
  try {
    if (*analyze_cmd) return cmd_analyze(path, opts);
    if (*sim) return cmd_simulate(path, x0, max_iter, trace);
    if (*cfc) return cmd_closed_form(path);
    if (*gad) return cmd_gadget(poly);
    if (*emit) return cmd_emit(path, guess, opts);
  } catch (const ParseError& e) {
    std::cerr << path << ":" << e.what() << "\n";
    return kError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
  return kError;
}
