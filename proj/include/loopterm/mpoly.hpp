#pragma once
// Sparse multivariate polynomials with a fixed number of variables.

#include "loopterm/rational.hpp"

#include <map>
#include <string>
#include <vector>

namespace loopterm {

using Exponents = std::vector<int>;

template <class C>
struct MPoly {
  int nvars = 0;
  std::map<Exponents, C> terms;

  MPoly() = default;
  explicit MPoly(int n) : nvars(n) {}
  bool is_zero() const { return terms.empty(); }
  int total_degree() const {
    int d = -1;
    for (const auto& [e, c] : terms) {
      int s = 0;
      for (int x : e) s += x;
      if (s > d) d = s;
    }
    return d;
  }
  friend bool operator==(const MPoly& a, const MPoly& b) { return a.nvars == b.nvars && a.terms == b.terms; }
};

using QPoly = MPoly<Rational>;

QPoly qpoly_constant(int nvars, const Rational& c);
QPoly qpoly_var(int nvars, int index);
QPoly operator+(const QPoly& a, const QPoly& b);
QPoly operator-(const QPoly& a, const QPoly& b);
QPoly operator-(const QPoly& a);
QPoly operator*(const QPoly& a, const QPoly& b);
QPoly operator*(const QPoly& a, const Rational& s);
QPoly pow(const QPoly& a, unsigned e);
Rational eval(const QPoly& p, const std::vector<Rational>& x);
// Adds extra variables at the end.
QPoly extend_vars(const QPoly& p, int nvars);
// Canonical order: descending total degree, then descending exponent vectors.
std::vector<Exponents> canonical_order(const std::vector<Exponents>& monomials);
std::string to_string(const QPoly& p, const std::vector<std::string>& names);
std::string monomial_string(const Exponents& e, const std::vector<std::string>& names);

}  // namespace loopterm
