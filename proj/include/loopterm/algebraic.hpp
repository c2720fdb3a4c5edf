#pragma once
// Exact complex algebraic numbers: minimal polynomial plus isolating box.

#include "loopterm/interval.hpp"
#include "loopterm/poly.hpp"

#include <functional>
#include <string>
#include <vector>

namespace loopterm {

// Closed rational rectangle. Real roots carry a degenerate imaginary side [0,0].
struct Box {
  Rational re_lo, re_hi, im_lo, im_hi;

  Rational width() const;  // max of the two side lengths
  bool is_real_segment() const { return im_lo == 0 && im_hi == 0; }
  bool contains(const Box& o) const;
  bool intersects(const Box& o) const;
  bool contains_point(const Rational& re, const Rational& im) const;
  Box mirrored() const { return {re_lo, re_hi, -im_hi, -im_lo}; }
  CInterval to_interval(long prec) const;
  std::string to_string() const;
};

class AlgebraicNumber {
 public:
  AlgebraicNumber() : AlgebraicNumber(Rational(0)) {}
  AlgebraicNumber(const Rational& q);  // NOLINT: rationals embed implicitly
  AlgebraicNumber(int q) : AlgebraicNumber(Rational(q)) {}
  // minpoly must be monic irreducible and box must isolate one of its roots.
  AlgebraicNumber(Poly minpoly, Box box);

  const Poly& minpoly() const { return minpoly_; }
  const Box& box() const { return box_; }
  int degree() const { return minpoly_.degree(); }
  bool is_rational() const { return degree() == 1; }
  Rational rational_value() const;  // requires is_rational()
  bool is_real() const { return box_.is_real_segment(); }
  bool is_zero() const { return is_rational() && minpoly_.coeff(0) == 0; }

  AlgebraicNumber refine(const Rational& eps) const;
  // Enclosure of width about 2^-bits.
  CInterval enclosure(long bits) const;
  AlgebraicNumber conj() const;
  AlgebraicNumber operator-() const;
  int sign() const;  // real numbers only

  std::string to_string() const;

 private:
  Poly minpoly_;
  Box box_;
};

bool operator==(const AlgebraicNumber& a, const AlgebraicNumber& b);
inline bool operator!=(const AlgebraicNumber& a, const AlgebraicNumber& b) { return !(a == b); }

// One isolated root per distinct complex root, each tagged with its irreducible factor.
std::vector<AlgebraicNumber> isolate_roots(const Poly& p);
// Pairwise disjoint boxes for the roots of a squarefree polynomial, widths at most 2^-bits.
std::vector<Box> isolate_boxes(const Poly& squarefree, long bits);

int compare_real(const AlgebraicNumber& a, const AlgebraicNumber& b);

enum class ArithOp { Add, Sub, Mul, Div };
AlgebraicNumber arith(const AlgebraicNumber& a, const AlgebraicNumber& b, ArithOp op);
AlgebraicNumber operator+(const AlgebraicNumber& a, const AlgebraicNumber& b);
AlgebraicNumber operator-(const AlgebraicNumber& a, const AlgebraicNumber& b);
AlgebraicNumber operator*(const AlgebraicNumber& a, const AlgebraicNumber& b);
AlgebraicNumber operator/(const AlgebraicNumber& a, const AlgebraicNumber& b);
AlgebraicNumber modulus(const AlgebraicNumber& a);
// Positive square root of a positive real algebraic number.
AlgebraicNumber sqrt_positive(const AlgebraicNumber& a);
AlgebraicNumber pow(const AlgebraicNumber& a, long e);

// The root of p (tagged with its irreducible factor) that the target value equals,
// selected by enclosures of increasing precision. Throws std::runtime_error if the
// precision budget runs out.
using Encloser = std::function<CInterval(long bits)>;
AlgebraicNumber select_root(const Poly& p, const Encloser& enclose);

}  // namespace loopterm
