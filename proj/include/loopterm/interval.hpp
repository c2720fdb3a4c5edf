#pragma once
// Closed real intervals with MPFR endpoints and outward rounding.

#include "loopterm/rational.hpp"

#include <mpfr.h>

#include <string>

namespace loopterm {

class Interval {
 public:
  explicit Interval(long prec = 128);
  Interval(const Rational& q, long prec);
  Interval(const Rational& lo, const Rational& hi, long prec);
  Interval(const Interval& o);
  Interval(Interval&& o) noexcept;
  Interval& operator=(const Interval& o);
  Interval& operator=(Interval&& o) noexcept;
  ~Interval();

  static Interval pi(long prec);
  static Interval hull(const Interval& a, const Interval& b);

  long prec() const { return prec_; }
  Rational lower() const;
  Rational upper() const;
  double lower_d() const { return mpfr_get_d(lo_, MPFR_RNDD); }
  double upper_d() const { return mpfr_get_d(hi_, MPFR_RNDU); }
  double mid_d() const;
  Rational width() const { return upper() - lower(); }

  bool positive() const { return mpfr_sgn(lo_) > 0; }
  bool negative() const { return mpfr_sgn(hi_) < 0; }
  bool nonnegative() const { return mpfr_sgn(lo_) >= 0; }
  bool contains_zero() const { return !positive() && !negative(); }
  bool contains(const Rational& q) const;
  bool contains(const Interval& o) const;
  bool disjoint(const Interval& o) const;

  friend Interval operator+(const Interval& a, const Interval& b);
  friend Interval operator-(const Interval& a, const Interval& b);
  friend Interval operator*(const Interval& a, const Interval& b);
  friend Interval operator/(const Interval& a, const Interval& b);
  Interval operator-() const;
  Interval& operator+=(const Interval& b) { return *this = *this + b; }
  Interval& operator*=(const Interval& b) { return *this = *this * b; }

  Interval sqr() const;
  Interval pow(unsigned e) const;
  Interval sqrt() const;
  Interval log() const;
  Interval cos() const;
  Interval sin() const;
  Interval abs() const;
  // Intersection; the caller guarantees overlap.
  Interval intersect(const Interval& o) const;

  std::string to_string(int digits = 12) const;

  mpfr_srcptr lo() const { return lo_; }
  mpfr_srcptr hi() const { return hi_; }

 private:
  long prec_;
  mpfr_t lo_, hi_;
};

struct CInterval {
  Interval re, im;
  explicit CInterval(long prec = 128) : re(prec), im(prec) {}
  CInterval(Interval r, Interval i) : re(std::move(r)), im(std::move(i)) {}
  friend CInterval operator+(const CInterval& a, const CInterval& b) { return {a.re + b.re, a.im + b.im}; }
  friend CInterval operator-(const CInterval& a, const CInterval& b) { return {a.re - b.re, a.im - b.im}; }
  friend CInterval operator*(const CInterval& a, const CInterval& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  CInterval conj() const { return {re, -im}; }
  Interval abs2() const { return re.sqr() + im.sqr(); }
  CInterval pow(unsigned e) const;
  CInterval inverse() const;
};

}  // namespace loopterm
