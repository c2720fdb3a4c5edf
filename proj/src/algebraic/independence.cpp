#include "loopterm/phases.hpp"

#include "loopterm/root_expr.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace loopterm {

namespace {

Interval max_with_one(const Interval& x) {
  long p = x.prec();
  Rational lo = std::max(Rational(1), x.lower()), hi = std::max(Rational(1), x.upper());
  return Interval(lo, hi, p);
}

bool is_cyclotomic_minpoly(const Poly& m) {
  for (const auto& c : m.coeffs())
    if (c.get_den() != 1) return false;
  auto d = static_cast<unsigned long>(m.degree());
  for (unsigned long k = 1; k <= 2 * d * d + 2; ++k)
    if (euler_phi(k) == d && cyclotomic(static_cast<unsigned>(k)) == m) return true;
  return false;
}

}  // namespace

Interval height(const AlgebraicNumber& a, long prec) {
  const Poly& m = a.minpoly();
  if (is_cyclotomic_minpoly(m)) return Interval(Rational(0), prec);
  std::vector<Integer> prim = m.primitive_integer();
  Interval sum = Interval(Rational(abs(prim.back())), prec).log();
  for (const auto& b : isolate_boxes(m, prec)) {
    CInterval z = b.to_interval(prec);
    sum = sum + max_with_one(z.abs2().sqrt()).log();
  }
  return sum / Interval(Rational(m.degree()), prec);
}

std::vector<Integer> baker_bound(const std::vector<Interval>& log_a, unsigned long degree) {
  size_t m = log_a.size();
  if (m < 2) throw std::invalid_argument("baker_bound needs at least two logarithms");
  const long prec = 256;
  mpfr_t base, q, t;
  mpfr_inits2(prec, base, q, t, static_cast<mpfr_ptr>(nullptr));
  mpfr_set_ui(base, 11ul * (m - 1), MPFR_RNDU);
  for (int i = 0; i < 3; ++i) mpfr_mul_ui(base, base, degree, MPFR_RNDU);
  mpfr_pow_ui(base, base, m - 1, MPFR_RNDU);
  std::vector<Integer> out;
  for (size_t k = 0; k < m; ++k) {
    mpfr_set(q, base, MPFR_RNDU);
    for (size_t j = 0; j < m; ++j) {
      if (j == k) continue;
      mpfr_set(t, log_a[j].hi(), MPFR_RNDU);
      if (mpfr_cmp_ui(t, 1) < 0) mpfr_set_ui(t, 1, MPFR_RNDU);
      mpfr_mul(q, q, t, MPFR_RNDU);
    }
    mpfr_ceil(q, q);
    Integer z;
    mpfr_get_z(z.get_mpz_t(), q, MPFR_RNDU);
    out.push_back(z);
  }
  mpfr_clears(base, q, t, static_cast<mpfr_ptr>(nullptr));
  return out;
}

bool verify_relation(const std::vector<AlgebraicNumber>& phases, const std::vector<long>& n) {
  if (phases.size() != n.size()) throw std::invalid_argument("verify_relation: length mismatch");
  // Merge repeated phases and conjugate pairs on the unit circle (conj(u) = 1/u), so
  // that relations between two numbers of the same field never build a tensor product.
  std::vector<AlgebraicNumber> base;
  std::vector<long> exps;
  Rational rational_part = 1;
  for (size_t k = 0; k < phases.size(); ++k) {
    if (n[k] == 0) continue;
    const AlgebraicNumber& a = phases[k];
    if (a.is_rational()) {
      rational_part *= pow(a, n[k]).rational_value();
      continue;
    }
    bool merged = false;
    for (size_t j = 0; j < base.size() && !merged; ++j) {
      if (base[j] == a) {
        exps[j] += n[k];
        merged = true;
      } else if (base[j].conj() == a && pow(base[j], -1) == a) {
        exps[j] -= n[k];
        merged = true;
      }
    }
    if (!merged) {
      base.push_back(a);
      exps.push_back(n[k]);
    }
  }
  for (size_t j = base.size(); j-- > 0;)
    if (exps[j] == 0) {
      base.erase(base.begin() + static_cast<long>(j));
      exps.erase(exps.begin() + static_cast<long>(j));
    }
  if (base.empty()) return rational_part == 1;
  if (base.size() == 1) return pow(base[0], exps[0]) == AlgebraicNumber(1 / rational_part);
  if (base.size() == 2) return pow(base[0], exps[0]) * rational_part == pow(base[1], -exps[1]);

  ExprRing ring;
  RootExpr prod(rational_part);
  for (size_t k = 0; k < base.size(); ++k) {
    int id = ring.add_symbol(base[k], "u" + std::to_string(k + 1));
    RootExpr b = exps[k] < 0 ? ring.inverse_symbol(id) : ring.symbol(id);
    prod = ring.mul(prod, ring.pow(b, static_cast<unsigned long>(exps[k] < 0 ? -exps[k] : exps[k])));
  }
  return ring.is_zero(ring.sub(prod, RootExpr(1)));
}

std::string IndependenceResult::to_string() const {
  switch (tag) {
    case Tag::ProvedIndependent: return "ProvedIndependent";
    case Tag::Unresolved: return "Unresolved";
    case Tag::ProvedDependent: {
      std::string s = "ProvedDependent(";
      for (size_t i = 0; i < relation.size(); ++i) s += (i ? ", " : "") + std::to_string(relation[i]);
      return s + ")";
    }
  }
  return "";
}

IndependenceResult check_independence(const std::vector<AlgebraicNumber>& phases, long cap) {
  IndependenceResult out;
  size_t d = phases.size();
  if (d == 0) {
    out.tag = IndependenceResult::Tag::ProvedIndependent;
    return out;
  }
  if (d == 1) {
    // A single phase with irrational argument satisfies no relation u^n = 1, n != 0.
    out.tag = IndependenceResult::Tag::ProvedIndependent;
    return out;
  }
  const long prec = 128;
  unsigned long field_degree = 1;
  unsigned long max_degree = 1;
  for (const auto& a : phases) {
    field_degree *= static_cast<unsigned long>(a.degree());
    max_degree = std::max(max_degree, static_cast<unsigned long>(a.degree()));
  }
  Interval pi = Interval::pi(prec);
  std::vector<Interval> log_a;
  for (const auto& a : phases) {
    Interval h = height(a, prec);
    Interval lam = pi / Interval(Rational(static_cast<long>(max_degree)), prec);
    Rational hi = std::max({h.upper(), lam.upper(), Rational(1)});
    log_a.emplace_back(hi, prec);
  }
  {
    Interval lam = pi * Interval(Rational(2), prec) / Interval(Rational(static_cast<long>(max_degree)), prec);
    log_a.emplace_back(std::max(lam.upper(), Rational(1)), prec);
  }
  std::vector<Integer> bounds = baker_bound(log_a, field_degree);
  bounds.pop_back();
  out.bounds = bounds;
  std::vector<long> box(d);
  bool exhaustive = true;
  for (size_t k = 0; k < d; ++k) {
    if (bounds[k] <= cap) box[k] = bounds[k].get_si();
    else {
      box[k] = cap;
      exhaustive = false;
    }
  }
  std::vector<Interval> turns;
  for (const auto& a : phases) turns.push_back(turn_fraction(a, prec));

  long max_box = *std::max_element(box.begin(), box.end());
  std::vector<long> n(d, 0);
  bool found = false;
  // Enumerate vectors of max-norm exactly L, first nonzero entry positive.
  std::function<void(size_t, long, bool, bool)> rec = [&](size_t k, long L, bool hit, bool nonzero) {
    if (found) return;
    if (k == d) {
      if (!hit) return;
      Interval s(prec);
      for (size_t i = 0; i < d; ++i) s = s + turns[i] * Interval(Rational(n[i]), prec);
      if (ceil_div(s.lower()) > floor_div(s.upper())) return;
      if (verify_relation(phases, n)) {
        found = true;
        out.relation = n;
      }
      return;
    }
    long b = std::min(L, box[k]);
    for (long v = nonzero ? -b : 0; v <= b; ++v) {
      n[k] = v;
      long av = v < 0 ? -v : v;
      rec(k + 1, L, hit || av == L, nonzero || v != 0);
      if (found) return;
    }
    n[k] = 0;
  };
  for (long L = 1; L <= max_box && !found; ++L) rec(0, L, false, false);
  if (found) {
    out.tag = IndependenceResult::Tag::ProvedDependent;
    return out;
  }
  out.tag = exhaustive ? IndependenceResult::Tag::ProvedIndependent : IndependenceResult::Tag::Unresolved;
  return out;
}

}  // namespace loopterm
