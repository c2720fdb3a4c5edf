#include "loopterm/algebraic.hpp"

#include "loopterm/factor.hpp"
#include "loopterm/root_expr.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace loopterm {

namespace {

Rational pow2_neg(long bits) {
  Rational r(1);
  mpz_mul_2exp(r.get_den_mpz_t(), r.get_den_mpz_t(), static_cast<unsigned long>(bits));
  r.canonicalize();
  return r;
}

long bits_for(const Rational& eps) {
  // smallest b with 2^-b <= eps
  long b = 0;
  Rational w(1);
  while (w > eps) {
    w /= 2;
    ++b;
  }
  return b;
}

// Index of the unique box in `boxes` contained in `outer`, or -1.
int locate(const std::vector<Box>& boxes, const Box& outer) {
  int found = -1;
  for (size_t i = 0; i < boxes.size(); ++i)
    if (outer.contains(boxes[i])) {
      if (found >= 0) return -1;
      found = static_cast<int>(i);
    }
  return found;
}

Box interval_box(const CInterval& e) { return {e.re.lower(), e.re.upper(), e.im.lower(), e.im.upper()}; }

}  // namespace

AlgebraicNumber::AlgebraicNumber(const Rational& q)
    : minpoly_(std::vector<Rational>{-q, 1}), box_{q, q, 0, 0} {}

AlgebraicNumber::AlgebraicNumber(Poly minpoly, Box box) : minpoly_(minpoly.monic()), box_(std::move(box)) {
  if (minpoly_.degree() == 1) {
    Rational r = -minpoly_.coeff(0);
    box_ = {r, r, 0, 0};
  }
}

Rational AlgebraicNumber::rational_value() const {
  if (!is_rational()) throw std::logic_error("not a rational algebraic number");
  return -minpoly_.coeff(0);
}

AlgebraicNumber AlgebraicNumber::refine(const Rational& eps) const {
  if (box_.width() <= eps) return *this;
  if (is_real()) {
    Rational lo = box_.re_lo, hi = box_.re_hi;
    int slo = sgn(minpoly_.eval(lo));
    while (hi - lo > eps) {
      Rational mid = (lo + hi) / 2;
      int s = sgn(minpoly_.eval(mid));
      if (s == 0) {
        lo = hi = mid;
        break;
      }
      if (s == slo) lo = mid;
      else hi = mid;
    }
    AlgebraicNumber r = *this;
    r.box_ = {lo, hi, 0, 0};
    return r;
  }
  for (long bits = bits_for(eps) + 1;; bits += 16) {
    auto boxes = isolate_boxes(minpoly_, bits);
    int i = locate(boxes, box_);
    if (i >= 0 && boxes[static_cast<size_t>(i)].width() <= eps) {
      AlgebraicNumber r = *this;
      r.box_ = boxes[static_cast<size_t>(i)];
      return r;
    }
    if (bits > 100000) throw std::runtime_error("refinement failed");
  }
}

CInterval AlgebraicNumber::enclosure(long bits) const {
  long prec = bits + 32;
  if (is_rational()) {
    Rational q = rational_value();
    return {Interval(q, prec), Interval(prec)};
  }
  return refine(pow2_neg(bits)).box_.to_interval(prec);
}

AlgebraicNumber AlgebraicNumber::conj() const {
  if (is_real()) return *this;
  AlgebraicNumber r = *this;
  r.box_ = box_.mirrored();
  return r;
}

AlgebraicNumber AlgebraicNumber::operator-() const {
  std::vector<Rational> c = minpoly_.coeffs();
  for (size_t i = 0; i < c.size(); ++i)
    if (i % 2 != (c.size() - 1) % 2) c[i] = -c[i];
  AlgebraicNumber r;
  r.minpoly_ = Poly(c);
  r.box_ = {-box_.re_hi, -box_.re_lo, -box_.im_hi, -box_.im_lo};
  if (r.box_.im_lo == 0 && r.box_.im_hi == 0) r.box_.im_lo = r.box_.im_hi = 0;
  return r;
}

int AlgebraicNumber::sign() const {
  if (!is_real()) throw std::logic_error("sign of a non-real algebraic number");
  if (is_rational()) return sgn(rational_value());
  AlgebraicNumber a = *this;
  for (Rational eps = a.box_.width() / 2;; eps /= 4) {
    if (a.box_.re_lo > 0) return 1;
    if (a.box_.re_hi < 0) return -1;
    a = a.refine(eps);
  }
}

std::string AlgebraicNumber::to_string() const {
  if (is_rational()) return rational_value().get_str();
  CInterval e = enclosure(60);
  char buf[128];
  double re = e.re.mid_d(), im = e.im.mid_d();
  if (is_real()) std::snprintf(buf, sizeof buf, "%.12g", re);
  else std::snprintf(buf, sizeof buf, "%.12g%+.12gi", re, im);
  return "root(" + minpoly_.to_string() + ", " + box_.to_string() + ") ~ " + buf;
}

bool operator==(const AlgebraicNumber& a, const AlgebraicNumber& b) {
  if (!(a.minpoly() == b.minpoly())) return false;
  if (a.is_rational()) return true;
  if (a.is_real() != b.is_real()) return false;
  if (!a.box().intersects(b.box())) return false;
  if (a.is_real()) {
    Rational lo = std::max(a.box().re_lo, b.box().re_lo), hi = std::min(a.box().re_hi, b.box().re_hi);
    if (lo == hi) return a.minpoly().eval(lo) == 0;
    return count_real_roots(a.minpoly(), lo, hi) > 0;
  }
  long bits = 8;
  for (;; bits += 16) {
    auto boxes = isolate_boxes(a.minpoly(), bits);
    int ia = locate(boxes, a.box()), ib = locate(boxes, b.box());
    if (ia >= 0 && ib >= 0) return ia == ib;
    if (bits > 100000) throw std::runtime_error("equality test did not converge");
  }
}

std::vector<AlgebraicNumber> isolate_roots(const Poly& p) {
  if (p.is_zero()) throw std::invalid_argument("isolate_roots: zero polynomial");
  std::vector<AlgebraicNumber> out;
  for (const auto& f : irreducible_factors(squarefree_part(p)))
    for (const auto& b : isolate_boxes(f, 20)) out.emplace_back(f, b);
  std::sort(out.begin(), out.end(), [](const AlgebraicNumber& x, const AlgebraicNumber& y) {
    Rational rx = x.box().re_lo + x.box().re_hi, ry = y.box().re_lo + y.box().re_hi;
    if (rx != ry) return rx < ry;
    return x.box().im_lo + x.box().im_hi < y.box().im_lo + y.box().im_hi;
  });
  return out;
}

int compare_real(const AlgebraicNumber& a, const AlgebraicNumber& b) {
  if (!a.is_real() || !b.is_real()) throw std::invalid_argument("compare_real on non-real numbers");
  if (a.is_rational() && b.is_rational()) {
    int c = cmp(a.rational_value(), b.rational_value());
    return c < 0 ? -1 : (c > 0 ? 1 : 0);
  }
  if (a == b) return 0;
  AlgebraicNumber x = a, y = b;
  Rational eps = std::max(x.box().width(), y.box().width());
  if (eps == 0) eps = 1;
  for (;;) {
    if (x.box().re_hi < y.box().re_lo) return -1;
    if (y.box().re_hi < x.box().re_lo) return 1;
    eps /= 4;
    x = x.refine(eps);
    y = y.refine(eps);
  }
}

AlgebraicNumber select_root(const Poly& p, const Encloser& enclose) {
  std::vector<Poly> factors = irreducible_factors(squarefree_part(p));
  for (long bits = 32; bits <= 8192; bits *= 2) {
    Box target = interval_box(enclose(bits));
    const Poly* hit_poly = nullptr;
    Box hit;
    int hits = 0;
    for (const auto& f : factors) {
      if (f.degree() == 1) {
        Rational r = -f.coeff(0);
        if (target.contains_point(r, 0)) {
          ++hits;
          hit_poly = &f;
          hit = {r, r, 0, 0};
        }
        continue;
      }
      for (const auto& b : isolate_boxes(f, bits / 2))
        if (b.intersects(target)) {
          ++hits;
          hit_poly = &f;
          hit = b;
        }
    }
    if (hits == 1) return AlgebraicNumber(*hit_poly, hit);
  }
  throw std::runtime_error("could not select a unique root of " + p.to_string());
}

AlgebraicNumber arith(const AlgebraicNumber& a, const AlgebraicNumber& b, ArithOp op) {
  if (a.is_rational() && b.is_rational()) {
    Rational x = a.rational_value(), y = b.rational_value();
    switch (op) {
      case ArithOp::Add: return Rational(x + y);
      case ArithOp::Sub: return Rational(x - y);
      case ArithOp::Mul: return Rational(x * y);
      case ArithOp::Div:
        if (y == 0) throw std::domain_error("algebraic division by zero");
        return Rational(x / y);
    }
  }
  ExprRing ring;
  RootExpr x = ring.embed(a, "a");
  RootExpr y;
  if (b.is_rational()) y = RootExpr(b.rational_value());
  else y = ring.symbol(ring.add_symbol(b, "b"));
  RootExpr r;
  switch (op) {
    case ArithOp::Add: r = ring.add(x, y); break;
    case ArithOp::Sub: r = ring.sub(x, y); break;
    case ArithOp::Mul: r = ring.mul(x, y); break;
    case ArithOp::Div:
      if (b.is_zero()) throw std::domain_error("algebraic division by zero");
      if (b.is_rational()) r = ring.scale(x, 1 / b.rational_value());
      else r = ring.mul(x, ring.inverse_symbol(ring.num_symbols() - 1));
      break;
  }
  return ring.to_algebraic(r);
}

AlgebraicNumber operator+(const AlgebraicNumber& a, const AlgebraicNumber& b) { return arith(a, b, ArithOp::Add); }
AlgebraicNumber operator-(const AlgebraicNumber& a, const AlgebraicNumber& b) { return arith(a, b, ArithOp::Sub); }
AlgebraicNumber operator*(const AlgebraicNumber& a, const AlgebraicNumber& b) { return arith(a, b, ArithOp::Mul); }
AlgebraicNumber operator/(const AlgebraicNumber& a, const AlgebraicNumber& b) { return arith(a, b, ArithOp::Div); }

AlgebraicNumber sqrt_positive(const AlgebraicNumber& a) {
  if (a.is_rational()) {
    Rational q = a.rational_value();
    if (q < 0) throw std::domain_error("sqrt of a negative number");
    Integer n = q.get_num(), d = q.get_den();
    if (mpz_perfect_square_p(n.get_mpz_t()) && mpz_perfect_square_p(d.get_mpz_t())) {
      Integer rn, rd;
      mpz_sqrt(rn.get_mpz_t(), n.get_mpz_t());
      mpz_sqrt(rd.get_mpz_t(), d.get_mpz_t());
      return Rational(rn, rd);
    }
  }
  if (!a.is_real() || a.sign() < 0) throw std::domain_error("sqrt_positive needs a nonnegative real");
  Poly sq = a.minpoly().compose(Poly::monomial(1, 2));
  return select_root(sq, [&](long bits) {
    CInterval e = a.enclosure(2 * bits + 8);
    Interval re = e.re.nonnegative() ? e.re : Interval::hull(Interval(Rational(0), e.re.prec()), e.re);
    return CInterval(re.sqrt(), Interval(e.re.prec()));
  });
}

AlgebraicNumber modulus(const AlgebraicNumber& a) {
  if (a.is_real()) return a.sign() < 0 ? -a : a;
  ExprRing ring;
  RootExpr x = ring.symbol(ring.add_symbol(a, "a"));
  RootExpr y = ring.symbol(ring.add_symbol(a.conj(), "abar"));
  return sqrt_positive(ring.to_algebraic(ring.mul(x, y)));
}

AlgebraicNumber pow(const AlgebraicNumber& a, long e) {
  if (a.is_rational()) {
    Rational q = a.rational_value();
    if (e < 0) {
      if (q == 0) throw std::domain_error("zero to a negative power");
      q = 1 / q;
      e = -e;
    }
    Rational r = 1;
    for (long i = 0; i < e; ++i) r *= q;
    return r;
  }
  ExprRing ring;
  int id = ring.add_symbol(a, "a");
  RootExpr base = e < 0 ? ring.inverse_symbol(id) : ring.symbol(id);
  return ring.to_algebraic(ring.pow(base, static_cast<unsigned long>(e < 0 ? -e : e)));
}

}  // namespace loopterm
