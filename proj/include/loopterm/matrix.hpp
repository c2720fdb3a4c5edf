#pragma once
// Dense matrices over Q.

#include "loopterm/poly.hpp"
#include "loopterm/rational.hpp"

#include <string>
#include <vector>

namespace loopterm {

using RationalVector = std::vector<Rational>;

class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(int rows, int cols);
  static RationalMatrix identity(int n);
  static RationalMatrix from_rows(const std::vector<std::vector<Rational>>& rows);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  Rational& operator()(int i, int j) { return a_[static_cast<size_t>(i * cols_ + j)]; }
  const Rational& operator()(int i, int j) const { return a_[static_cast<size_t>(i * cols_ + j)]; }

  RationalMatrix operator*(const RationalMatrix& o) const;
  RationalMatrix operator+(const RationalMatrix& o) const;
  RationalMatrix operator-(const RationalMatrix& o) const;
  RationalMatrix scaled(const Rational& s) const;
  RationalVector operator*(const RationalVector& v) const;
  friend bool operator==(const RationalMatrix& a, const RationalMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
  }

  bool is_zero() const;
  RationalMatrix transpose() const;
  RationalMatrix pow(unsigned long e) const;

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<Rational> a_;
};

// Monic det(xI - A) via Hessenberg reduction. Throws on non-square input.
Poly char_poly(const RationalMatrix& a);
// Exact A^n X0 by repeated multiplication.
RationalVector mat_apply_iter(const RationalMatrix& a, const RationalVector& x0, unsigned long n);
// p(A) by Horner.
RationalMatrix eval_poly(const Poly& p, const RationalMatrix& a);
Rational determinant(RationalMatrix a);
// Basis of {v : A v = 0}.
std::vector<RationalVector> nullspace(RationalMatrix a);
// Returns false when singular.
bool invert(const RationalMatrix& a, RationalMatrix& out);

std::string to_string(const RationalVector& v);

}  // namespace loopterm
