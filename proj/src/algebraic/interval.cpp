#include "loopterm/interval.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>
#include <utility>

namespace loopterm {

namespace {

Rational mpfr_to_rational(mpfr_srcptr x) {
  if (!mpfr_number_p(x)) throw std::domain_error("interval endpoint is not finite");
  Rational q;
  mpfr_get_q(q.get_mpq_t(), x);
  return q;
}

void set_min(mpfr_ptr out, mpfr_srcptr a, mpfr_srcptr b) { mpfr_min(out, a, b, MPFR_RNDD); }
void set_max(mpfr_ptr out, mpfr_srcptr a, mpfr_srcptr b) { mpfr_max(out, a, b, MPFR_RNDU); }

}  // namespace

Interval::Interval(long prec) : prec_(prec) {
  mpfr_init2(lo_, prec);
  mpfr_init2(hi_, prec);
  mpfr_set_zero(lo_, 1);
  mpfr_set_zero(hi_, 1);
}

Interval::Interval(const Rational& q, long prec) : prec_(prec) {
  mpfr_init2(lo_, prec);
  mpfr_init2(hi_, prec);
  mpfr_set_q(lo_, q.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(hi_, q.get_mpq_t(), MPFR_RNDU);
}

Interval::Interval(const Rational& lo, const Rational& hi, long prec) : prec_(prec) {
  mpfr_init2(lo_, prec);
  mpfr_init2(hi_, prec);
  mpfr_set_q(lo_, lo.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(hi_, hi.get_mpq_t(), MPFR_RNDU);
}

Interval::Interval(const Interval& o) : prec_(o.prec_) {
  mpfr_init2(lo_, prec_);
  mpfr_init2(hi_, prec_);
  mpfr_set(lo_, o.lo_, MPFR_RNDD);
  mpfr_set(hi_, o.hi_, MPFR_RNDU);
}

Interval::Interval(Interval&& o) noexcept : prec_(o.prec_) {
  mpfr_init2(lo_, prec_);
  mpfr_init2(hi_, prec_);
  mpfr_swap(lo_, o.lo_);
  mpfr_swap(hi_, o.hi_);
}

Interval& Interval::operator=(const Interval& o) {
  if (this == &o) return *this;
  if (prec_ != o.prec_) {
    prec_ = o.prec_;
    mpfr_set_prec(lo_, prec_);
    mpfr_set_prec(hi_, prec_);
  }
  mpfr_set(lo_, o.lo_, MPFR_RNDD);
  mpfr_set(hi_, o.hi_, MPFR_RNDU);
  return *this;
}

Interval& Interval::operator=(Interval&& o) noexcept {
  std::swap(prec_, o.prec_);
  mpfr_swap(lo_, o.lo_);
  mpfr_swap(hi_, o.hi_);
  return *this;
}

Interval::~Interval() {
  mpfr_clear(lo_);
  mpfr_clear(hi_);
}

Interval Interval::pi(long prec) {
  Interval r(prec);
  mpfr_const_pi(r.lo_, MPFR_RNDD);
  mpfr_const_pi(r.hi_, MPFR_RNDU);
  return r;
}

Interval Interval::hull(const Interval& a, const Interval& b) {
  Interval r(std::max(a.prec_, b.prec_));
  set_min(r.lo_, a.lo_, b.lo_);
  set_max(r.hi_, a.hi_, b.hi_);
  return r;
}

Rational Interval::lower() const { return mpfr_to_rational(lo_); }
Rational Interval::upper() const { return mpfr_to_rational(hi_); }

double Interval::mid_d() const { return 0.5 * (mpfr_get_d(lo_, MPFR_RNDN) + mpfr_get_d(hi_, MPFR_RNDN)); }

bool Interval::contains(const Rational& q) const {
  return mpfr_cmp_q(lo_, q.get_mpq_t()) <= 0 && mpfr_cmp_q(hi_, q.get_mpq_t()) >= 0;
}

bool Interval::contains(const Interval& o) const {
  return mpfr_lessequal_p(lo_, o.lo_) && mpfr_greaterequal_p(hi_, o.hi_);
}

bool Interval::disjoint(const Interval& o) const {
  return mpfr_less_p(hi_, o.lo_) || mpfr_less_p(o.hi_, lo_);
}

Interval operator+(const Interval& a, const Interval& b) {
  Interval r(std::max(a.prec_, b.prec_));
  mpfr_add(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
  mpfr_add(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
  return r;
}

Interval operator-(const Interval& a, const Interval& b) {
  Interval r(std::max(a.prec_, b.prec_));
  mpfr_sub(r.lo_, a.lo_, b.hi_, MPFR_RNDD);
  mpfr_sub(r.hi_, a.hi_, b.lo_, MPFR_RNDU);
  return r;
}

Interval Interval::operator-() const {
  Interval r(prec_);
  mpfr_neg(r.lo_, hi_, MPFR_RNDD);
  mpfr_neg(r.hi_, lo_, MPFR_RNDU);
  return r;
}

Interval operator*(const Interval& a, const Interval& b) {
  long p = std::max(a.prec_, b.prec_);
  Interval r(p);
  mpfr_t t;
  mpfr_init2(t, p);
  mpfr_srcptr as[2] = {a.lo_, a.hi_};
  mpfr_srcptr bs[2] = {b.lo_, b.hi_};
  bool first = true;
  for (auto x : as)
    for (auto y : bs) {
      mpfr_mul(t, x, y, MPFR_RNDD);
      if (first || mpfr_less_p(t, r.lo_)) mpfr_set(r.lo_, t, MPFR_RNDD);
      mpfr_mul(t, x, y, MPFR_RNDU);
      if (first || mpfr_greater_p(t, r.hi_)) mpfr_set(r.hi_, t, MPFR_RNDU);
      first = false;
    }
  mpfr_clear(t);
  return r;
}

Interval operator/(const Interval& a, const Interval& b) {
  if (b.contains_zero()) throw std::domain_error("interval division by an interval containing zero");
  long p = std::max(a.prec_, b.prec_);
  Interval inv(p);
  mpfr_ui_div(inv.lo_, 1, b.hi_, MPFR_RNDD);
  mpfr_ui_div(inv.hi_, 1, b.lo_, MPFR_RNDU);
  return a * inv;
}

Interval Interval::sqr() const {
  Interval r(prec_);
  if (positive() || mpfr_zero_p(lo_)) {
    mpfr_sqr(r.lo_, lo_, MPFR_RNDD);
    mpfr_sqr(r.hi_, hi_, MPFR_RNDU);
  } else if (negative() || mpfr_zero_p(hi_)) {
    mpfr_sqr(r.lo_, hi_, MPFR_RNDD);
    mpfr_sqr(r.hi_, lo_, MPFR_RNDU);
  } else {
    mpfr_set_zero(r.lo_, 1);
    mpfr_t t;
    mpfr_init2(t, prec_);
    mpfr_sqr(r.hi_, lo_, MPFR_RNDU);
    mpfr_sqr(t, hi_, MPFR_RNDU);
    mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
    mpfr_clear(t);
  }
  return r;
}

Interval Interval::pow(unsigned e) const {
  Interval r(Rational(1), prec_), b = *this;
  if (e % 2 == 0 && e > 0) return sqr().pow(e / 2);
  while (e) {
    if (e & 1u) r = r * b;
    e >>= 1;
    if (e) b = b.sqr();
  }
  return r;
}

Interval Interval::sqrt() const {
  if (negative()) throw std::domain_error("sqrt of a negative interval");
  Interval r(prec_);
  if (mpfr_sgn(lo_) <= 0) mpfr_set_zero(r.lo_, 1);
  else mpfr_sqrt(r.lo_, lo_, MPFR_RNDD);
  mpfr_sqrt(r.hi_, hi_, MPFR_RNDU);
  return r;
}

Interval Interval::log() const {
  if (!positive()) throw std::domain_error("log of a non-positive interval");
  Interval r(prec_);
  mpfr_log(r.lo_, lo_, MPFR_RNDD);
  mpfr_log(r.hi_, hi_, MPFR_RNDU);
  return r;
}

Interval Interval::cos() const {
  Interval r(prec_);
  Interval two_pi = pi(prec_ + 10) * Interval(Rational(2), prec_);
  Interval width(prec_);
  mpfr_sub(width.hi_, hi_, lo_, MPFR_RNDU);
  if (mpfr_greaterequal_p(width.hi_, two_pi.lo_)) {
    mpfr_set_si(r.lo_, -1, MPFR_RNDD);
    mpfr_set_si(r.hi_, 1, MPFR_RNDU);
    return r;
  }
  mpfr_t a, b;
  mpfr_init2(a, prec_);
  mpfr_init2(b, prec_);
  mpfr_cos(a, lo_, MPFR_RNDD);
  mpfr_cos(b, hi_, MPFR_RNDD);
  mpfr_min(r.lo_, a, b, MPFR_RNDD);
  mpfr_cos(a, lo_, MPFR_RNDU);
  mpfr_cos(b, hi_, MPFR_RNDU);
  mpfr_max(r.hi_, a, b, MPFR_RNDU);
  mpfr_clear(a);
  mpfr_clear(b);
  // Interior extrema at integer multiples of pi.
  Interval p = pi(prec_ + 10);
  Interval lo_pi = Interval(lower(), prec_) / p;
  Interval hi_pi = Interval(upper(), prec_) / p;
  Integer kmin = ceil_div(lo_pi.lower()), kmax = floor_div(hi_pi.upper());
  for (Integer k = kmin; k <= kmax; ++k) {
    if (mpz_even_p(k.get_mpz_t())) mpfr_set_si(r.hi_, 1, MPFR_RNDU);
    else mpfr_set_si(r.lo_, -1, MPFR_RNDD);
  }
  return r;
}

Interval Interval::sin() const {
  Interval half_pi = pi(prec_ + 10) * Interval(Rational(1, 2), prec_);
  return (*this - half_pi).cos();
}

Interval Interval::abs() const {
  if (nonnegative()) return *this;
  if (negative()) return -*this;
  Interval r(prec_);
  mpfr_set_zero(r.lo_, 1);
  mpfr_t t;
  mpfr_init2(t, prec_);
  mpfr_neg(t, lo_, MPFR_RNDU);
  mpfr_max(r.hi_, t, hi_, MPFR_RNDU);
  mpfr_clear(t);
  return r;
}

Interval Interval::intersect(const Interval& o) const {
  Interval r(std::max(prec_, o.prec_));
  mpfr_max(r.lo_, lo_, o.lo_, MPFR_RNDD);
  mpfr_min(r.hi_, hi_, o.hi_, MPFR_RNDU);
  return r;
}

std::string Interval::to_string(int digits) const {
  char buf[256];
  mpfr_snprintf(buf, sizeof buf, "[%.*RDg, %.*RUg]", digits, lo_, digits, hi_);
  return buf;
}

CInterval CInterval::pow(unsigned e) const {
  CInterval r(Interval(Rational(1), re.prec()), Interval(re.prec())), b = *this;
  while (e) {
    if (e & 1u) r = r * b;
    e >>= 1;
    if (e) b = b * b;
  }
  return r;
}

CInterval CInterval::inverse() const {
  Interval d = abs2();
  return {re / d, -im / d};
}

}  // namespace loopterm
