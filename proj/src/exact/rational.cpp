#include "loopterm/rational.hpp"

#include <stdexcept>

namespace loopterm {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = text;
  bool neg = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    neg = s[0] == '-';
    s.remove_prefix(1);
  }
  auto slash = s.find('/');
  std::string_view num = s.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view("1") : s.substr(slash + 1);
  if (!all_digits(num) || !all_digits(den))
    throw std::invalid_argument("not a rational literal: " + std::string(text));
  Integer n{std::string(num)}, d{std::string(den)};
  if (d == 0) throw std::invalid_argument("zero denominator: " + std::string(text));
  Rational q(n, d);
  q.canonicalize();
  return neg ? Rational(-q) : q;
}

std::string to_string(const Rational& q) { return q.get_str(); }
std::string to_string(const Integer& z) { return z.get_str(); }

Integer floor_div(const Rational& q) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

Integer ceil_div(const Rational& q) {
  Integer r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

Rational round_down(const Rational& q, long bits) {
  Integer scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 2, static_cast<unsigned long>(bits));
  Rational r(floor_div(q * scale), scale);
  r.canonicalize();
  return r;
}

Rational round_up(const Rational& q, long bits) {
  Integer scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 2, static_cast<unsigned long>(bits));
  Rational r(ceil_div(q * scale), scale);
  r.canonicalize();
  return r;
}

Rational sqrt_upper(const Rational& q, long bits) {
  if (q <= 0) return 0;
  Integer scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 2, static_cast<unsigned long>(2 * bits));
  Integer v = ceil_div(q * scale);
  Integer root, rem;
  mpz_sqrtrem(root.get_mpz_t(), rem.get_mpz_t(), v.get_mpz_t());
  if (rem != 0) root += 1;
  Integer den;
  mpz_ui_pow_ui(den.get_mpz_t(), 2, static_cast<unsigned long>(bits));
  Rational r(root, den);
  r.canonicalize();
  return r;
}

Rational sqrt_lower(const Rational& q, long bits) {
  if (q <= 0) return 0;
  Integer scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 2, static_cast<unsigned long>(2 * bits));
  Integer v = floor_div(q * scale);
  Integer root;
  mpz_sqrt(root.get_mpz_t(), v.get_mpz_t());
  Integer den;
  mpz_ui_pow_ui(den.get_mpz_t(), 2, static_cast<unsigned long>(bits));
  Rational r(root, den);
  r.canonicalize();
  return r;
}

Rational abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

long bit_size(const Rational& q) {
  return static_cast<long>(mpz_sizeinbase(q.get_num_mpz_t(), 2) + mpz_sizeinbase(q.get_den_mpz_t(), 2));
}

Integer lcm_of_denominators(const std::vector<Rational>& v) {
  Integer l = 1;
  for (const auto& q : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
  return l;
}

}  // namespace loopterm
