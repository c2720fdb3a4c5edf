#include "loopterm/phases.hpp"

#include "loopterm/root_expr.hpp"

#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>

namespace loopterm {

unsigned long euler_phi(unsigned long k) {
  unsigned long result = k;
  for (unsigned long p = 2; p * p <= k; ++p) {
    if (k % p) continue;
    while (k % p == 0) k /= p;
    result -= result / p;
  }
  if (k > 1) result -= result / k;
  return result;
}

Poly cyclotomic(unsigned k) {
  if (k == 0) throw std::invalid_argument("cyclotomic: k must be positive");
  static std::mutex m;
  static std::map<unsigned, Poly> memo;
  {
    std::lock_guard<std::mutex> lock(m);
    auto it = memo.find(k);
    if (it != memo.end()) return it->second;
  }
  Poly p = Poly::monomial(1, static_cast<int>(k)) - Poly(1);
  for (unsigned d = 1; d < k; ++d)
    if (k % d == 0) p = p / cyclotomic(d);
  std::lock_guard<std::mutex> lock(m);
  memo[k] = p;
  return p;
}

std::string ArgumentClass::to_string() const {
  if (!rational) return "IrrationalMultiple";
  return "RationalMultiple(period " + std::to_string(period) + ", residue " + std::to_string(residue) + ")";
}

Interval turn_fraction(const AlgebraicNumber& a, long bits) {
  long prec = bits + 32;
  if (a.is_real()) {
    int s = a.sign();
    if (s == 0) throw std::domain_error("argument of zero");
    return Interval(Rational(s > 0 ? 0 : 1, 2), prec);
  }
  CInterval e = a.enclosure(bits);
  // Rotate by pi when the box straddles the negative real axis.
  bool flip = e.re.negative();
  if (flip) e = CInterval(-e.re, -e.im);
  mpfr_t t, lo, hi;
  mpfr_inits2(prec, t, lo, hi, static_cast<mpfr_ptr>(nullptr));
  mpfr_srcptr xs[2] = {e.re.lo(), e.re.hi()};
  mpfr_srcptr ys[2] = {e.im.lo(), e.im.hi()};
  bool first = true;
  for (auto x : xs)
    for (auto y : ys) {
      mpfr_atan2(t, y, x, MPFR_RNDD);
      if (first || mpfr_less_p(t, lo)) mpfr_set(lo, t, MPFR_RNDD);
      mpfr_atan2(t, y, x, MPFR_RNDU);
      if (first || mpfr_greater_p(t, hi)) mpfr_set(hi, t, MPFR_RNDU);
      first = false;
    }
  Rational qlo, qhi;
  mpfr_get_q(qlo.get_mpq_t(), lo);
  mpfr_get_q(qhi.get_mpq_t(), hi);
  mpfr_clears(t, lo, hi, static_cast<mpfr_ptr>(nullptr));
  Interval angle(qlo, qhi, prec);
  Interval two_pi = Interval::pi(prec) * Interval(Rational(2), prec);
  Interval f = angle / two_pi;
  if (flip) f = f + Interval(Rational(1, 2), prec);
  if (f.negative()) f = f + Interval(Rational(1), prec);
  return f;
}

AlgebraicNumber unit_part(const AlgebraicNumber& a) {
  if (a.is_zero()) throw std::domain_error("unit part of zero");
  if (a.is_real()) return a.sign() > 0 ? AlgebraicNumber(1) : AlgebraicNumber(-1);
  AlgebraicNumber r = modulus(a);
  if (r.is_rational()) return arith(a, r, ArithOp::Div);
  ExprRing ring;
  RootExpr x = ring.symbol(ring.add_symbol(a, "a"));
  int rid = ring.add_symbol(r, "r");
  return ring.to_algebraic(ring.mul(x, ring.inverse_symbol(rid)));
}

namespace {

bool integer_coefficients(const Poly& p) {
  for (const auto& c : p.coeffs())
    if (c.get_den() != 1) return false;
  return true;
}

// Order of w if w is a root of unity, else 0.
unsigned long root_of_unity_order(const AlgebraicNumber& w, unsigned long degree_bound) {
  const Poly& m = w.minpoly();
  if (!integer_coefficients(m) || abs(m.coeff(0)) != 1) return 0;
  auto deg = static_cast<unsigned long>(m.degree());
  if (deg > degree_bound) return 0;
  // phi(k) >= sqrt(k/2), so k <= 2 deg^2.
  for (unsigned long k = 1; k <= 2 * deg * deg + 2; ++k)
    if (euler_phi(k) == deg && cyclotomic(static_cast<unsigned>(k)) == m) return k;
  return 0;
}

}  // namespace

AlgebraicNumber root_of_unity(unsigned long period, unsigned long residue) {
  if (period == 0) throw std::invalid_argument("root_of_unity: zero period");
  residue %= period;
  unsigned long g = std::gcd(residue, period);
  period /= g;
  residue /= g;
  if (period == 1) return AlgebraicNumber(1);
  if (period == 2) return AlgebraicNumber(-1);
  return select_root(cyclotomic(static_cast<unsigned>(period)), [&](long bits) {
    long prec = bits + 16;
    Interval t = Interval::pi(prec) * Interval(Rational(2 * static_cast<long>(residue), static_cast<long>(period)), prec);
    return CInterval(t.cos(), t.sin());
  });
}

ArgumentClass classify_argument(const AlgebraicNumber& a) {
  if (a.is_zero()) throw std::domain_error("classify_argument of zero");
  ArgumentClass out;
  if (a.is_real()) {
    out.rational = true;
    out.period = a.sign() > 0 ? 1 : 2;
    out.residue = a.sign() > 0 ? 0 : 1;
    return out;
  }
  // (a/|a|)^2 = a / conj(a) has degree at most d^2.
  ExprRing ring;
  RootExpr x = ring.symbol(ring.add_symbol(a, "a"));
  int cid = ring.add_symbol(a.conj(), "abar");
  AlgebraicNumber w = ring.to_algebraic(ring.mul(x, ring.inverse_symbol(cid)));
  auto d = static_cast<unsigned long>(a.degree());
  unsigned long k = root_of_unity_order(w, 2 * d * d * d);
  if (k == 0) return out;
  // u^2 has order k, so u = exp(2 pi i t) with t in {j/(2k)}; pick j from an enclosure of arg u.
  unsigned long q = 2 * k;
  for (long bits = 32;; bits *= 2) {
    Interval t = turn_fraction(a, bits);
    Interval scaled = t * Interval(Rational(static_cast<long>(q)), t.prec());
    Integer lo = ceil_div(scaled.lower()), hi = floor_div(scaled.upper());
    if (lo == hi) {
      Integer j = lo % static_cast<unsigned long>(q);
      if (j < 0) j += static_cast<unsigned long>(q);
      unsigned long num = j.get_ui();
      unsigned long g = std::gcd(num, q);
      out.rational = true;
      out.period = q / g;
      out.residue = num / g;
      return out;
    }
    if (bits > 4096) throw std::runtime_error("argument classification did not converge");
  }
}

}  // namespace loopterm
