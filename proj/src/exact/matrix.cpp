#include "loopterm/matrix.hpp"

#include <stdexcept>
#include <utility>

namespace loopterm {

RationalMatrix::RationalMatrix(int rows, int cols)
    : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows * cols), Rational(0)) {}

RationalMatrix RationalMatrix::identity(int n) {
  RationalMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

RationalMatrix RationalMatrix::from_rows(const std::vector<std::vector<Rational>>& rows) {
  int r = static_cast<int>(rows.size());
  int c = r ? static_cast<int>(rows[0].size()) : 0;
  RationalMatrix m(r, c);
  for (int i = 0; i < r; ++i) {
    if (static_cast<int>(rows[static_cast<size_t>(i)].size()) != c)
      throw std::invalid_argument("ragged matrix rows");
    for (int j = 0; j < c; ++j) m(i, j) = rows[static_cast<size_t>(i)][static_cast<size_t>(j)];
  }
  return m;
}

RationalMatrix RationalMatrix::operator*(const RationalMatrix& o) const {
  if (cols_ != o.rows_) throw std::invalid_argument("matrix dimension mismatch");
  RationalMatrix r(rows_, o.cols_);
  for (int i = 0; i < rows_; ++i)
    for (int k = 0; k < cols_; ++k) {
      const Rational& x = (*this)(i, k);
      if (x == 0) continue;
      for (int j = 0; j < o.cols_; ++j) r(i, j) += x * o(k, j);
    }
  return r;
}

RationalMatrix RationalMatrix::operator+(const RationalMatrix& o) const {
  RationalMatrix r = *this;
  for (size_t i = 0; i < a_.size(); ++i) r.a_[i] += o.a_[i];
  return r;
}

RationalMatrix RationalMatrix::operator-(const RationalMatrix& o) const {
  RationalMatrix r = *this;
  for (size_t i = 0; i < a_.size(); ++i) r.a_[i] -= o.a_[i];
  return r;
}

RationalMatrix RationalMatrix::scaled(const Rational& s) const {
  RationalMatrix r = *this;
  for (auto& x : r.a_) x *= s;
  return r;
}

RationalVector RationalMatrix::operator*(const RationalVector& v) const {
  if (static_cast<int>(v.size()) != cols_) throw std::invalid_argument("vector dimension mismatch");
  RationalVector r(static_cast<size_t>(rows_), Rational(0));
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) r[static_cast<size_t>(i)] += (*this)(i, j) * v[static_cast<size_t>(j)];
  return r;
}

bool RationalMatrix::is_zero() const {
  for (const auto& x : a_)
    if (x != 0) return false;
  return true;
}

RationalMatrix RationalMatrix::transpose() const {
  RationalMatrix r(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
  return r;
}

RationalMatrix RationalMatrix::pow(unsigned long e) const {
  RationalMatrix r = identity(rows_), b = *this;
  while (e) {
    if (e & 1ul) r = r * b;
    e >>= 1;
    if (e) b = b * b;
  }
  return r;
}

Poly char_poly(const RationalMatrix& a) {
  if (!a.square()) throw std::invalid_argument("char_poly: matrix is not square");
  int n = a.rows();
  RationalMatrix h = a;
  // Similarity reduction to upper Hessenberg form.
  for (int m = 1; m < n - 1; ++m) {
    int piv = -1;
    for (int i = m; i < n; ++i)
      if (h(i, m - 1) != 0) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    if (piv != m) {
      for (int j = 0; j < n; ++j) std::swap(h(piv, j), h(m, j));
      for (int i = 0; i < n; ++i) std::swap(h(i, piv), h(i, m));
    }
    Rational inv = 1 / h(m, m - 1);
    for (int i = m + 1; i < n; ++i) {
      if (h(i, m - 1) == 0) continue;
      Rational u = h(i, m - 1) * inv;
      for (int j = 0; j < n; ++j) h(i, j) -= u * h(m, j);
      for (int j = 0; j < n; ++j) h(j, m) += u * h(j, i);
    }
  }
  // p_k = det(xI - H[0..k, 0..k]).
  std::vector<Poly> p(static_cast<size_t>(n + 1));
  p[0] = Poly(1);
  for (int k = 1; k <= n; ++k) {
    Poly pk = (Poly::x() - Poly(h(k - 1, k - 1))) * p[static_cast<size_t>(k - 1)];
    Rational t = 1;
    for (int i = k - 1; i >= 1; --i) {
      t *= h(i, i - 1);
      if (t == 0) break;
      pk -= p[static_cast<size_t>(i - 1)] * (t * h(i - 1, k - 1));
    }
    p[static_cast<size_t>(k)] = std::move(pk);
  }
  return p[static_cast<size_t>(n)];
}

RationalVector mat_apply_iter(const RationalMatrix& a, const RationalVector& x0, unsigned long n) {
  RationalVector v = x0;
  for (unsigned long i = 0; i < n; ++i) v = a * v;
  return v;
}

RationalMatrix eval_poly(const Poly& p, const RationalMatrix& a) {
  RationalMatrix r(a.rows(), a.cols());
  RationalMatrix id = RationalMatrix::identity(a.rows());
  for (int i = p.degree(); i >= 0; --i) r = r * a + id.scaled(p.coeff(i));
  return r;
}

Rational determinant(RationalMatrix a) {
  if (!a.square()) throw std::invalid_argument("determinant: matrix is not square");
  int n = a.rows();
  Rational det = 1;
  for (int c = 0; c < n; ++c) {
    int piv = -1;
    for (int r = c; r < n; ++r)
      if (a(r, c) != 0) {
        piv = r;
        break;
      }
    if (piv < 0) return 0;
    if (piv != c) {
      for (int j = 0; j < n; ++j) std::swap(a(piv, j), a(c, j));
      det = -det;
    }
    det *= a(c, c);
    Rational inv = 1 / a(c, c);
    for (int r = c + 1; r < n; ++r) {
      if (a(r, c) == 0) continue;
      Rational f = a(r, c) * inv;
      for (int j = c; j < n; ++j) a(r, j) -= f * a(c, j);
    }
  }
  return det;
}

std::vector<RationalVector> nullspace(RationalMatrix a) {
  int rows = a.rows(), cols = a.cols();
  std::vector<int> pivot_col;
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int piv = -1;
    for (int i = r; i < rows; ++i)
      if (a(i, c) != 0) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    for (int j = 0; j < cols; ++j) std::swap(a(piv, j), a(r, j));
    Rational inv = 1 / a(r, c);
    for (int j = 0; j < cols; ++j) a(r, j) *= inv;
    for (int i = 0; i < rows; ++i) {
      if (i == r || a(i, c) == 0) continue;
      Rational f = a(i, c);
      for (int j = 0; j < cols; ++j) a(i, j) -= f * a(r, j);
    }
    pivot_col.push_back(c);
    ++r;
  }
  std::vector<bool> is_pivot(static_cast<size_t>(cols), false);
  for (int c : pivot_col) is_pivot[static_cast<size_t>(c)] = true;
  std::vector<RationalVector> basis;
  for (int f = 0; f < cols; ++f) {
    if (is_pivot[static_cast<size_t>(f)]) continue;
    RationalVector v(static_cast<size_t>(cols), Rational(0));
    v[static_cast<size_t>(f)] = 1;
    for (size_t i = 0; i < pivot_col.size(); ++i) v[static_cast<size_t>(pivot_col[i])] = -a(static_cast<int>(i), f);
    basis.push_back(std::move(v));
  }
  return basis;
}

bool invert(const RationalMatrix& a, RationalMatrix& out) {
  int n = a.rows();
  RationalMatrix m = a, inv = RationalMatrix::identity(n);
  for (int c = 0; c < n; ++c) {
    int piv = -1;
    for (int r = c; r < n; ++r)
      if (m(r, c) != 0) {
        piv = r;
        break;
      }
    if (piv < 0) return false;
    for (int j = 0; j < n; ++j) {
      std::swap(m(piv, j), m(c, j));
      std::swap(inv(piv, j), inv(c, j));
    }
    Rational s = 1 / m(c, c);
    for (int j = 0; j < n; ++j) {
      m(c, j) *= s;
      inv(c, j) *= s;
    }
    for (int r = 0; r < n; ++r) {
      if (r == c || m(r, c) == 0) continue;
      Rational f = m(r, c);
      for (int j = 0; j < n; ++j) {
        m(r, j) -= f * m(c, j);
        inv(r, j) -= f * inv(c, j);
      }
    }
  }
  out = inv;
  return true;
}

std::string to_string(const RationalVector& v) {
  std::string s = "(";
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += v[i].get_str();
  }
  return s + ")";
}

}  // namespace loopterm
