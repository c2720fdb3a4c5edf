#pragma once
// Guard expansion: substitute the closed form into each guard, group the
// exponential terms, specialize by period and collect term tables
// sum_{k,l} C_kl(X, n) n^l r_k^(T n) with C = C0 + C1 + C2.

#include "loopterm/closed_form.hpp"
#include "loopterm/loop_spec.hpp"
#include "loopterm/phases.hpp"
#include "loopterm/root_expr.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace loopterm {

using APoly = MPoly<AlgebraicNumber>;  // real algebraic coefficients

// Ring and eigenvalue symbols shared by all guards of one analysis.
class ExpansionContext {
 public:
  explicit ExpansionContext(const ClosedForm& cf);
  ExpansionContext(const ExpansionContext&) = delete;
  ExpansionContext& operator=(const ExpansionContext&) = delete;

  const ClosedForm& closed_form() const { return *cf_; }
  ExprRing& ring() { return ring_; }
  const ExprRing& ring() const { return ring_; }
  const EigenSymbols& symbols() const { return *syms_; }
  const RootExpr& imaginary() const { return i_; }
  // Flattened (group, root) list.
  int num_roots() const { return static_cast<int>(roots_.size()); }
  const RootExpr& root_expr(int id) const { return roots_[static_cast<size_t>(id)]; }
  std::pair<int, int> root_index(int id) const { return index_[static_cast<size_t>(id)]; }

 private:
  const ClosedForm* cf_;
  ExprRing ring_;
  std::unique_ptr<EigenSymbols> syms_;
  RootExpr i_;
  std::vector<RootExpr> roots_;
  std::vector<std::pair<int, int>> index_;
};

// One term eta^n * C(X, n) of a guard after substitution, with eta a product of eigenvalues.
struct EtaTerm {
  AlgebraicNumber eta, modulus, unit;
  RootExpr eta_expr;
  ArgumentClass arg;
  int modulus_class = -1;
  std::map<std::pair<int, Exponents>, RootExpr> coeff;  // (n-degree, X-monomial)
  // Phase decomposition unit = zeta * prod basis_b^m_b within the modulus class.
  AlgebraicNumber zeta;
  ArgumentClass zeta_arg;
  std::vector<long> m;
};

struct ModulusClass {
  AlgebraicNumber modulus;
  std::vector<AlgebraicNumber> basis;  // rationally independent unit phases
  std::vector<IndependenceResult> checks;
};

// P(A^(n+s) X) = sum over eta of C_eta(X, n) eta^n.
struct GuardExpansion {
  int guard = 0;
  int nvars = 0;
  std::vector<ModulusClass> classes;  // ascending modulus
  std::vector<EtaTerm> terms;
  bool decomposed = false;
  std::string failure;  // nonempty if the phase decomposition failed
};

GuardExpansion substitute_guard(const QPoly& guard, int index, ExpansionContext& ctx);

// Splits the phases of each modulus class into a rationally independent basis
// times roots of unity. Sets `failure` when independence cannot be settled within cap.
void decompose_phases(GuardExpansion& ge, ExpansionContext& ctx, long cap);

// Smallest T with zeta^T = +-1 for every root-of-unity factor (an odd power of -1
// becomes the parity variable).
unsigned long compute_period(const GuardExpansion& ge);

// Torus angles shared across an analysis: angle t is multiplier_t * arg(base_t).
struct TorusAngle {
  AlgebraicNumber base;
  long multiplier = 1;
};

class TorusRegistry {
 public:
  int find_or_add(const AlgebraicNumber& base, long multiplier);
  const std::vector<TorusAngle>& angles() const { return angles_; }

 private:
  std::vector<TorusAngle> angles_;
};

// (parity, sorted (torus id, multiplier)) with the first multiplier positive.
struct FreqKey {
  bool parity = false;
  std::vector<std::pair<int, long>> freq;
  friend bool operator<(const FreqKey& a, const FreqKey& b) {
    return std::tie(a.parity, a.freq) < std::tie(b.parity, b.freq);
  }
  friend bool operator==(const FreqKey& a, const FreqKey& b) { return a.parity == b.parity && a.freq == b.freq; }
};

struct TrigPart {
  APoly cos, sin;
};

// sum over keys of z^n (cos-part cos(n f) + sin-part sin(n f)), f = sum multiplier * angle.
struct TrigPolynomial {
  std::map<FreqKey, TrigPart> parts;
  bool is_zero() const { return parts.empty(); }
  std::vector<int> torus_ids() const;
  bool has_parity() const;
};

struct Coefficient {
  APoly c0, c1;
  TrigPolynomial c2;
  bool is_zero() const { return c0.is_zero() && c1.is_zero() && c2.is_zero(); }
};

struct TermIndex {
  int k = 0;  // modulus class, ascending
  int l = 0;  // n-degree
  friend auto operator<=>(const TermIndex&, const TermIndex&) = default;
};

// G_j(X, n) = P_guard(X, period * n + residue - 1).
struct GuardTermTable {
  int guard = 0;
  int residue = 1;
  int period = 1;
  int nvars = 0;
  std::vector<AlgebraicNumber> moduli;
  std::map<TermIndex, Coefficient> terms;
};

// Complex coefficients of the specialized guard, before the real split.
struct SpecializedGuard {
  int guard = 0, residue = 1, period = 1, nvars = 0;
  // kind 0: phase-free, 1: constant root-of-unity phase, 2: oscillating.
  struct Key {
    int k = 0, l = 0, kind = 0;
    bool parity = false;
    std::vector<long> m;
    friend auto operator<=>(const Key&, const Key&) = default;
  };
  std::map<Key, std::map<Exponents, RootExpr>> coeff;
};

SpecializedGuard specialize(const GuardExpansion& ge, const ExpansionContext& ctx, unsigned long period,
                            unsigned long residue);
GuardTermTable collect(const SpecializedGuard& sg, const GuardExpansion& ge, ExpansionContext& ctx,
                       TorusRegistry& torus);

// Ordering of term indices: modulus first, then n-degree. Returns -1, 0 or 1.
int term_compare(const TermIndex& a, const TermIndex& b);
// Term indices with a nonzero coefficient, greatest first.
std::vector<TermIndex> leading_candidates(const GuardTermTable& table);
// The polynomial equations equivalent to C2 being identically zero in n.
std::vector<APoly> c2_zero_conditions(const TrigPolynomial& c2);

// Everything the engine needs for one loop.
struct GuardAnalysis {
  std::vector<GuardExpansion> expansions;
  std::vector<unsigned long> periods;     // per guard
  std::vector<GuardTermTable> tables;     // grouped by guard, residues ascending
  TorusRegistry torus;
  std::string failure;
};

std::unique_ptr<GuardAnalysis> analyze_guards(const LoopSpec& spec, ExpansionContext& ctx, long indep_cap);

std::string to_string(const APoly& p, const std::vector<std::string>& names);
std::string to_string(const TrigPolynomial& t, const std::vector<std::string>& names);
std::string to_string(const GuardTermTable& table, const std::vector<std::string>& names);

// Numeric evaluation helpers used by tests and the certifier.
Interval eval_enclosure(const APoly& p, const RationalVector& x, long prec);
// Enclosure of the table at X and n: sum_{k,l} n^l r_k^(T n) C_kl(X, n).
Interval eval_table(const GuardTermTable& table, const TorusRegistry& torus, const RationalVector& x, long n,
                    long prec);
// Enclosure of C_kl(X, n) for one coefficient.
Interval eval_coefficient(const Coefficient& c, const TorusRegistry& torus, const RationalVector& x, long n,
                          long prec);

}  // namespace loopterm
