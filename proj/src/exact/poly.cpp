#include "loopterm/poly.hpp"

#include <algorithm>
#include <stdexcept>

namespace loopterm {

Poly::Poly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) {
  for (auto& c : c_) c.canonicalize();
  trim();
}

Poly::Poly(const Rational& c) {
  if (c != 0) c_.push_back(c);
}

Poly Poly::x() { return Poly(std::vector<Rational>{0, 1}); }

Poly Poly::monomial(const Rational& c, int deg) {
  if (c == 0) return Poly();
  std::vector<Rational> v(static_cast<size_t>(deg) + 1, Rational(0));
  v.back() = c;
  return Poly(std::move(v));
}

Poly Poly::from_integers(const std::vector<Integer>& coeffs) {
  std::vector<Rational> v;
  v.reserve(coeffs.size());
  for (const auto& z : coeffs) v.emplace_back(z);
  return Poly(std::move(v));
}

void Poly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Rational Poly::coeff(int i) const {
  if (i < 0 || i >= static_cast<int>(c_.size())) return 0;
  return c_[static_cast<size_t>(i)];
}

Rational Poly::lc() const { return c_.empty() ? Rational(0) : c_.back(); }

Poly Poly::operator-() const {
  Poly r = *this;
  for (auto& c : r.c_) c = -c;
  return r;
}

Poly& Poly::operator+=(const Poly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Rational(0));
  for (size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
  trim();
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Rational(0));
  for (size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
  trim();
  return *this;
}

Poly& Poly::operator*=(const Poly& o) {
  if (c_.empty() || o.c_.empty()) {
    c_.clear();
    return *this;
  }
  std::vector<Rational> r(c_.size() + o.c_.size() - 1, Rational(0));
  for (size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    for (size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
  }
  c_ = std::move(r);
  trim();
  return *this;
}

Poly& Poly::operator*=(const Rational& s) {
  if (s == 0) {
    c_.clear();
    return *this;
  }
  for (auto& c : c_) c *= s;
  return *this;
}

bool operator<(const Poly& a, const Poly& b) {
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  for (int i = a.degree(); i >= 0; --i) {
    const auto& x = a.c_[static_cast<size_t>(i)];
    const auto& y = b.c_[static_cast<size_t>(i)];
    if (x != y) return x < y;
  }
  return false;
}

Rational Poly::eval(const Rational& v) const {
  Rational r = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * v + *it;
  return r;
}

Poly Poly::derivative() const {
  if (c_.size() <= 1) return Poly();
  std::vector<Rational> r(c_.size() - 1);
  for (size_t i = 1; i < c_.size(); ++i) r[i - 1] = c_[i] * static_cast<long>(i);
  return Poly(std::move(r));
}

Poly Poly::monic() const {
  if (c_.empty()) return *this;
  Poly r = *this;
  Rational inv = 1 / lc();
  r *= inv;
  return r;
}

Poly Poly::compose(const Poly& inner) const {
  Poly r;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
    r *= inner;
    r += Poly(*it);
  }
  return r;
}

Poly Poly::pow(unsigned e) const {
  Poly r(1), b = *this;
  while (e) {
    if (e & 1u) r *= b;
    e >>= 1;
    if (e) b *= b;
  }
  return r;
}

Poly Poly::scale_var(const Rational& s) const {
  Poly r = *this;
  Rational f = 1;
  for (auto& c : r.c_) {
    c *= f;
    f *= s;
  }
  r.trim();
  return r;
}

std::vector<Integer> Poly::primitive_integer() const {
  std::vector<Integer> out;
  if (c_.empty()) return out;
  Integer l = lcm_of_denominators(c_);
  Integer g = 0;
  out.reserve(c_.size());
  for (const auto& c : c_) {
    Rational s = c * l;
    out.push_back(s.get_num());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), out.back().get_mpz_t());
  }
  if (out.back() < 0) g = -g;
  for (auto& z : out) z /= g;
  return out;
}

Poly Poly::primitive() const { return from_integers(primitive_integer()); }

std::string Poly::to_string(const std::string& var) const {
  if (c_.empty()) return "0";
  std::string s;
  for (int i = degree(); i >= 0; --i) {
    const Rational& c = c_[static_cast<size_t>(i)];
    if (c == 0) continue;
    Rational a = loopterm::abs(c);
    if (s.empty()) {
      if (c < 0) s += "-";
    } else {
      s += c < 0 ? " - " : " + ";
    }
    if (i == 0) {
      s += a.get_str();
      continue;
    }
    if (a != 1) s += a.get_str() + "*";
    s += var;
    if (i > 1) s += "^" + std::to_string(i);
  }
  return s;
}

std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
  if (b.is_zero()) throw std::domain_error("polynomial division by zero");
  if (a.degree() < b.degree()) return {Poly(), a};
  std::vector<Rational> r = a.coeffs();
  const auto& bc = b.coeffs();
  int db = b.degree();
  std::vector<Rational> q(static_cast<size_t>(a.degree() - db + 1), Rational(0));
  Rational inv = 1 / b.lc();
  for (int i = a.degree(); i >= db; --i) {
    Rational f = r[static_cast<size_t>(i)] * inv;
    q[static_cast<size_t>(i - db)] = f;
    if (f == 0) continue;
    for (int j = 0; j <= db; ++j) r[static_cast<size_t>(i - db + j)] -= f * bc[static_cast<size_t>(j)];
  }
  r.resize(static_cast<size_t>(db));
  return {Poly(std::move(q)), Poly(std::move(r))};
}

Poly operator/(const Poly& a, const Poly& b) { return divmod(a, b).first; }
Poly operator%(const Poly& a, const Poly& b) { return divmod(a, b).second; }

Poly gcd(const Poly& a, const Poly& b) {
  Poly x = a, y = b;
  while (!y.is_zero()) {
    Poly r = x % y;
    x = std::move(y);
    y = r.is_zero() ? r : r.monic();
  }
  return x.monic();
}

Poly ext_gcd(const Poly& a, const Poly& b, Poly& s, Poly& t) {
  Poly r0 = a, r1 = b, s0(1), s1, t0, t1(1);
  while (!r1.is_zero()) {
    auto [q, r] = divmod(r0, r1);
    r0 = std::move(r1);
    r1 = std::move(r);
    Poly s2 = s0 - q * s1, t2 = t0 - q * t1;
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (r0.is_zero()) {
    s = Poly();
    t = Poly();
    return r0;
  }
  Rational inv = 1 / r0.lc();
  s = s0 * inv;
  t = t0 * inv;
  return r0 * inv;
}

Poly inverse_mod(const Poly& a, const Poly& m) {
  Poly s, t;
  Poly g = ext_gcd(a % m, m, s, t);
  if (g.degree() != 0) throw std::domain_error("polynomial not invertible modulo m");
  return s % m;
}

Poly pow_mod(const Poly& a, unsigned long e, const Poly& m) {
  Poly r = Poly(1) % m, b = a % m;
  while (e) {
    if (e & 1ul) r = (r * b) % m;
    e >>= 1;
    if (e) b = (b * b) % m;
  }
  return r;
}

std::vector<std::pair<Poly, int>> squarefree_decomposition(const Poly& p) {
  std::vector<std::pair<Poly, int>> out;
  if (p.degree() <= 0) return out;
  Poly f = p.monic();
  Poly df = f.derivative();
  Poly a = gcd(f, df);
  Poly b = f / a;
  Poly c = df / a;
  Poly d = c - b.derivative();
  int i = 1;
  while (b.degree() > 0) {
    Poly g = gcd(b, d);
    if (g.degree() > 0) out.emplace_back(g, i);
    b = b / g;
    c = d / g;
    d = c - b.derivative();
    ++i;
  }
  return out;
}

Poly squarefree_part(const Poly& p) {
  if (p.degree() <= 0) return p;
  Poly f = p.monic();
  return (f / gcd(f, f.derivative())).monic();
}

std::vector<Poly> sturm_sequence(const Poly& p) {
  std::vector<Poly> seq{p, p.derivative()};
  while (!seq.back().is_zero()) {
    Poly r = seq[seq.size() - 2] % seq.back();
    if (r.is_zero()) break;
    seq.push_back(-r);
  }
  return seq;
}

namespace {

int sign_changes(const std::vector<Poly>& seq, const Rational& v) {
  int changes = 0, last = 0;
  for (const auto& q : seq) {
    int s = sgn(q.eval(v));
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

}  // namespace

int count_real_roots(const Poly& p, const Rational& lo, const Rational& hi) {
  Poly f = squarefree_part(p);
  if (f.degree() <= 0) return 0;
  auto seq = sturm_sequence(f);
  return sign_changes(seq, lo) - sign_changes(seq, hi);
}

}  // namespace loopterm
