#pragma once
// Dense univariate polynomials over Q, coefficients stored low degree first.

#include "loopterm/rational.hpp"

#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

namespace loopterm {

class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<Rational> coeffs);
  Poly(std::initializer_list<int> coeffs) : Poly(std::vector<Rational>(coeffs.begin(), coeffs.end())) {}
  Poly(const Rational& c);  // NOLINT: constants convert implicitly
  Poly(int c) : Poly(Rational(c)) {}

  static Poly x();
  static Poly monomial(const Rational& c, int deg);
  static Poly from_integers(const std::vector<Integer>& coeffs);

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<Rational>& coeffs() const { return c_; }
  Rational coeff(int i) const;
  Rational lc() const;

  Poly operator-() const;
  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly& operator*=(const Poly& o);
  Poly& operator*=(const Rational& s);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(Poly a, const Poly& b) { return a *= b; }
  friend Poly operator*(Poly a, const Rational& s) { return a *= s; }
  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }
  friend bool operator<(const Poly& a, const Poly& b);

  Rational eval(const Rational& v) const;
  Poly derivative() const;
  Poly monic() const;
  Poly compose(const Poly& inner) const;
  Poly pow(unsigned e) const;
  // p(x) -> p(s*x)
  Poly scale_var(const Rational& s) const;

  // Primitive integer polynomial with positive leading coefficient, as integers.
  std::vector<Integer> primitive_integer() const;
  Poly primitive() const;

  std::string to_string(const std::string& var = "x") const;

 private:
  void trim();
  std::vector<Rational> c_;
};

std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b);
Poly operator/(const Poly& a, const Poly& b);
Poly operator%(const Poly& a, const Poly& b);
Poly gcd(const Poly& a, const Poly& b);  // monic, gcd(0,0)=0
// Returns g = s*a + t*b with g monic gcd.
Poly ext_gcd(const Poly& a, const Poly& b, Poly& s, Poly& t);
// Inverse of a modulo m (assumes coprime).
Poly inverse_mod(const Poly& a, const Poly& m);
Poly pow_mod(const Poly& a, unsigned long e, const Poly& m);

// Yun decomposition of a monic polynomial: list of (squarefree factor, multiplicity).
std::vector<std::pair<Poly, int>> squarefree_decomposition(const Poly& p);
Poly squarefree_part(const Poly& p);

// Sturm sequence based count of distinct real roots in (lo, hi].
int count_real_roots(const Poly& p, const Rational& lo, const Rational& hi);
std::vector<Poly> sturm_sequence(const Poly& p);

}  // namespace loopterm
