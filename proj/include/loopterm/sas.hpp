#pragma once
// Semi-algebraic systems over free variables X and torus points, their SMT-LIB
// encoding, solver dispatch and a certified torus minimum for fixed X.

#include "loopterm/guard.hpp"

#include <map>
#include <string>
#include <vector>

namespace loopterm {

enum class Rel { Gt, Ge, Lt, Le, Eq, Ne };
// The relation of `not (p rel 0)`.
Rel negate(Rel r);
const char* rel_symbol(Rel r);

// Variable numbering shared by every formula of one analysis: x1..xN, then
// (y{t}_1, y{t}_2) per torus angle t, the parity variable z, pinned real algebraic
// constants k1.., and amplitude variables r1.. with r >= 0, r^2 = definition.
// Polynomials may have fewer variables than size(); missing ones are absent.
struct Layout {
  int nx = 0;
  int ntorus = 0;
  std::vector<AlgebraicNumber> constants;
  std::vector<QPoly> amplitudes;

  int size() const { return amplitude_var(static_cast<int>(amplitudes.size())); }
  int cos_var(int t) const { return nx + 2 * t; }
  int sin_var(int t) const { return nx + 2 * t + 1; }
  int parity_var() const { return nx + 2 * ntorus; }
  int constant_var(int k) const { return parity_var() + 1 + k; }
  int amplitude_var(int k) const { return constant_var(static_cast<int>(constants.size())) + k; }
  bool is_torus_var(int v) const { return v >= nx && v < parity_var(); }
  int torus_of(int v) const { return (v - nx) / 2; }
  std::string name(int v) const;
  // Index of a real irrational constant, added if new. Only valid before amplitudes exist.
  int constant_index(const AlgebraicNumber& c);
};

struct Formula {
  enum class Kind { True, False, Atom, And, Or, Not, Forall, Exists };
  Kind kind = Kind::True;
  QPoly poly;  // Atom: poly rel 0
  Rel rel = Rel::Gt;
  std::vector<Formula> args;
  std::vector<int> torus;  // Forall/Exists: bound angles, ascending
  bool parity = false;     // Forall/Exists: binds z in {-1, 1}

  static Formula truth(bool value);
  static Formula atom(QPoly p, Rel r);
  static Formula conj(std::vector<Formula> fs);
  static Formula disj(std::vector<Formula> fs);
  static Formula negation(Formula f);
  // Angles not occurring in the body are dropped; an empty binder returns the body.
  static Formula forall(std::vector<int> torus, bool parity, Formula body);
  static Formula exists(std::vector<int> torus, bool parity, Formula body);

  bool is_quantifier() const { return kind == Kind::Forall || kind == Kind::Exists; }
};

bool operator==(const Formula& a, const Formula& b);  // structural, ignoring nvars padding

// X is existential at top level; constants and amplitudes are pinned by the layout.
struct TorusFormula {
  Layout layout;
  Formula formula;
};

QPoly lift(const QPoly& p, int nvars);
QPoly padd(const QPoly& a, const QPoly& b);
QPoly pmul(const QPoly& a, const QPoly& b);
bool uses_var(const QPoly& p, int v);
std::vector<int> torus_ids(const QPoly& p, const Layout& layout);
bool uses_parity(const QPoly& p, const Layout& layout);
QPoly substitute_value(const QPoly& p, int v, const Rational& value);
int count_atoms(const Formula& f);
bool has_quantifier(const Formula& f);
Formula to_nnf(const Formula& f);

// Layout with every irrational coefficient of the tables registered in a fixed order.
Layout make_layout(const std::vector<GuardTermTable>& tables, const TorusRegistry& torus, int nx);
QPoly to_qpoly(const APoly& p, Layout& layout);
QPoly trig_qpoly(const TrigPolynomial& t, Layout& layout);
// C0 + C1 + C2 with the torus point (y_t1, y_t2) = (cos, sin) of each angle.
QPoly coefficient_qpoly(const Coefficient& c, Layout& layout);

// forall torus: C > 0 (strict) or C >= 0.
Formula positivity(const Coefficient& c, bool strict, Layout& layout);
// Per table, the guessed term is strictly positive and every greater term nonnegative.
// Universal blocks are merged into one.
Formula build_system(const std::vector<TermIndex>& guess, const std::vector<GuardTermTable>& tables,
                     Layout& layout);
// Satisfiable iff some X has C2 not identically zero in n and min over the torus of C equal to 0.
Formula assumption_violation(const Coefficient& c, Layout& layout);

std::string to_string(const Formula& f, const Layout& layout);

// SMT-LIB 2 over (quantified) nonlinear real arithmetic. Deterministic.
std::string emit_query(const TorusFormula& f);
// Reads back a script produced by emit_query.
TorusFormula parse_query(const std::string& text);

struct SExpr {
  std::string atom;
  std::vector<SExpr> list;
  bool is_list = false;
  std::string to_string() const;
};
// Throws std::runtime_error on malformed input.
std::vector<SExpr> parse_sexprs(const std::string& text);
// Real values of a `(get-model)` response, keyed by name.
std::map<std::string, AlgebraicNumber> parse_model(const std::string& text);
// Smallest-denominator rational in [lo, hi].
Rational simplest_rational(const Rational& lo, const Rational& hi);

// Exact value at X of a polynomial in X, constants and amplitudes.
AlgebraicNumber exact_value(const QPoly& p, const Layout& layout, const RationalVector& x);

// Enclosure of min over torus points and parity of p(X0, ., .), of width <= eps unless the
// branch-and-bound budget runs out.
Interval torus_min_certify(const QPoly& p, const Layout& layout, const RationalVector& x0, const Rational& eps);
Interval torus_min_certify(const Coefficient& c, const TorusRegistry& torus, const RationalVector& x0,
                           const Rational& eps);

enum class Truth { True, False, Undetermined };
// Evaluates the formula at X0: quantifier-free atoms exactly, torus atoms by certified minima.
Truth certify_model(const TorusFormula& f, const RationalVector& x0, const Rational& eps);

// Exact elimination of the parity variable and of torus angles entering an atom linearly,
// introducing amplitude variables. Other quantified parts are kept.
TorusFormula eliminate(const TorusFormula& f);

struct SolverConfig {
  std::vector<std::string> command;  // empty: no external solver
  long timeout_ms = 20000;
  Rational eps = Rational(1, 1000000000);
  unsigned long seed = 1;
  int samples = 64;  // fallback sampling budget
};

struct SolverOutcome {
  enum class Tag { Sat, Unsat, Unknown } tag = Tag::Unknown;
  RationalVector model;
  std::string reason;
  std::string method;  // "exact", "solver", "sampling"
};
std::string to_string(SolverOutcome::Tag t);

SolverOutcome solve(const TorusFormula& f, const SolverConfig& cfg);

struct ProcessResult {
  bool launched = false;
  bool timed_out = false;
  int exit_code = -1;
  std::string out, err;
};
ProcessResult run_process(const std::vector<std::string>& argv, const std::string& input, long timeout_ms);
// z3 on PATH with its stdin flags, or empty.
std::vector<std::string> default_solver_command();
// Adds the stdin flags when the command names z3 without arguments.
std::vector<std::string> solver_command(const std::string& spec);

}  // namespace loopterm
