#pragma once
// Polynomial expressions over Q in symbols bound to algebraic numbers.
// Each symbol's exponent is kept below the degree of its minimal polynomial,
// so expressions live in the tensor product of the symbol fields.

#include "loopterm/algebraic.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

namespace loopterm {

using ExprMonomial = std::vector<std::pair<int, int>>;  // (symbol, exponent), sorted by symbol

class RootExpr {
 public:
  RootExpr() = default;
  RootExpr(const Rational& q);  // NOLINT
  RootExpr(int q) : RootExpr(Rational(q)) {}

  const std::map<ExprMonomial, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }  // syntactic
  bool is_constant() const;
  Rational constant() const;  // coefficient of the empty monomial
  std::vector<int> symbols() const;

  friend bool operator==(const RootExpr& a, const RootExpr& b) { return a.terms_ == b.terms_; }
  friend bool operator<(const RootExpr& a, const RootExpr& b) { return a.terms_ < b.terms_; }

 private:
  friend class ExprRing;
  std::map<ExprMonomial, Rational> terms_;
};

class ExprRing {
 public:
  // Registers a symbol; returns its id. Rational values are not allowed.
  int add_symbol(const AlgebraicNumber& value, std::string name);
  int num_symbols() const { return static_cast<int>(symbols_.size()); }
  const AlgebraicNumber& value(int id) const { return symbols_[static_cast<size_t>(id)].value; }
  const std::string& name(int id) const { return symbols_[static_cast<size_t>(id)].name; }
  // Existing symbol with this exact value, or -1.
  int find_symbol(const AlgebraicNumber& value) const;

  RootExpr symbol(int id) const;
  // Embeds an algebraic number: rationals become constants, others a (possibly new) symbol.
  RootExpr embed(const AlgebraicNumber& value, const std::string& name_hint);
  // Element of Q[y]/(minpoly of symbol id), given as a polynomial in y.
  RootExpr from_poly(const Poly& p, int id) const;

  RootExpr add(const RootExpr& a, const RootExpr& b) const;
  RootExpr sub(const RootExpr& a, const RootExpr& b) const;
  RootExpr neg(const RootExpr& a) const;
  RootExpr mul(const RootExpr& a, const RootExpr& b) const;
  RootExpr scale(const RootExpr& a, const Rational& s) const;
  RootExpr pow(const RootExpr& a, unsigned long e) const;
  RootExpr inverse_symbol(int id) const;
  // Substitutes symbol id -> expression (used for conjugation).
  RootExpr substitute(const RootExpr& a, const std::vector<RootExpr>& images) const;

  CInterval enclose(const RootExpr& a, long bits) const;
  AlgebraicNumber to_algebraic(const RootExpr& a) const;
  bool is_zero(const RootExpr& a) const;
  std::string to_string(const RootExpr& a) const;

 private:
  struct Symbol {
    AlgebraicNumber value;
    Poly minpoly;
    std::string name;
    std::vector<Poly> power_table;  // y^e mod minpoly for e < 2*deg - 1
  };
  void reduce_into(std::map<ExprMonomial, Rational>& out, const ExprMonomial& m, const Rational& c) const;
  CInterval symbol_enclosure(int id, long bits) const;

  std::vector<Symbol> symbols_;
  mutable std::mutex enclosure_mutex_;
  mutable std::map<std::pair<int, long>, CInterval> enclosure_cache_;
};

}  // namespace loopterm
