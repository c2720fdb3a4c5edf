#include "loopterm/factor.hpp"

#include <algorithm>
#include <cstdint>
#include <random>
#include <stdexcept>

// Zassenhaus: modular factorization (Cantor-Zassenhaus), Hensel lifting,
// exhaustive recombination with exact trial division.

namespace loopterm {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;
using ZPoly = std::vector<Integer>;  // low degree first
using FPoly = std::vector<u64>;      // coefficients mod p, low degree first

struct Fp {
  u64 p;
  u64 add(u64 a, u64 b) const { return (a + b) % p; }
  u64 sub(u64 a, u64 b) const { return (a + p - b) % p; }
  u64 mul(u64 a, u64 b) const { return static_cast<u64>(static_cast<u128>(a) * b % p); }
  u64 pow(u64 a, u64 e) const {
    u64 r = 1;
    while (e) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }
  u64 inv(u64 a) const { return pow(a, p - 2); }
};

void trim(FPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

int deg(const FPoly& a) { return static_cast<int>(a.size()) - 1; }

FPoly fsub(const Fp& f, FPoly a, const FPoly& b) {
  if (b.size() > a.size()) a.resize(b.size(), 0);
  for (size_t i = 0; i < b.size(); ++i) a[i] = f.sub(a[i], b[i]);
  trim(a);
  return a;
}

FPoly fmul(const Fp& f, const FPoly& a, const FPoly& b) {
  if (a.empty() || b.empty()) return {};
  std::vector<u128> acc(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    for (size_t j = 0; j < b.size(); ++j) {
      acc[i + j] += static_cast<u128>(a[i]) * b[j];
      if (acc[i + j] >> 120) acc[i + j] %= f.p;
    }
  }
  FPoly r(acc.size());
  for (size_t i = 0; i < acc.size(); ++i) r[i] = static_cast<u64>(acc[i] % f.p);
  trim(r);
  return r;
}

void fdivmod(const Fp& f, const FPoly& a, const FPoly& b, FPoly& q, FPoly& r) {
  r = a;
  int db = deg(b);
  if (deg(a) < db) {
    q.clear();
    return;
  }
  q.assign(static_cast<size_t>(deg(a) - db + 1), 0);
  u64 inv = f.inv(b.back());
  for (int i = deg(a); i >= db; --i) {
    u64 c = f.mul(r[static_cast<size_t>(i)], inv);
    q[static_cast<size_t>(i - db)] = c;
    if (!c) continue;
    for (int j = 0; j <= db; ++j) {
      auto idx = static_cast<size_t>(i - db + j);
      r[idx] = f.sub(r[idx], f.mul(c, b[static_cast<size_t>(j)]));
    }
  }
  r.resize(static_cast<size_t>(db));
  trim(r);
  trim(q);
}

FPoly fmod(const Fp& f, const FPoly& a, const FPoly& b) {
  FPoly q, r;
  fdivmod(f, a, b, q, r);
  return r;
}

FPoly fdiv(const Fp& f, const FPoly& a, const FPoly& b) {
  FPoly q, r;
  fdivmod(f, a, b, q, r);
  return q;
}

FPoly fmonic(const Fp& f, FPoly a) {
  if (a.empty()) return a;
  u64 inv = f.inv(a.back());
  for (auto& c : a) c = f.mul(c, inv);
  return a;
}

FPoly fgcd(const Fp& f, FPoly a, FPoly b) {
  while (!b.empty()) {
    FPoly r = fmod(f, a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return fmonic(f, a);
}

// s*a + t*b = 1 for coprime a, b.
void fextgcd(const Fp& f, const FPoly& a, const FPoly& b, FPoly& s, FPoly& t) {
  FPoly r0 = a, r1 = b, s0{1}, s1, t0, t1{1};
  while (!r1.empty()) {
    FPoly q, r;
    fdivmod(f, r0, r1, q, r);
    r0 = std::move(r1);
    r1 = std::move(r);
    FPoly s2 = fsub(f, s0, fmul(f, q, s1));
    FPoly t2 = fsub(f, t0, fmul(f, q, t1));
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  u64 inv = f.inv(r0.back());
  for (auto& c : s0) c = f.mul(c, inv);
  for (auto& c : t0) c = f.mul(c, inv);
  s = s0;
  t = t0;
}

FPoly fpowmod(const Fp& f, FPoly base, const Integer& e, const FPoly& m) {
  FPoly r{1};
  r = fmod(f, r, m);
  base = fmod(f, base, m);
  size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
  for (size_t i = bits; i-- > 0;) {
    r = fmod(f, fmul(f, r, r), m);
    if (mpz_tstbit(e.get_mpz_t(), i)) r = fmod(f, fmul(f, r, base), m);
  }
  return r;
}

FPoly reduce(const ZPoly& a, u64 p) {
  FPoly r(a.size());
  Integer t;
  for (size_t i = 0; i < a.size(); ++i) {
    mpz_fdiv_r_ui(t.get_mpz_t(), a[i].get_mpz_t(), p);
    r[i] = t.get_ui();
  }
  trim(r);
  return r;
}

// Distinct-degree factorization of a monic squarefree polynomial.
std::vector<std::pair<FPoly, int>> ddf(const Fp& f, FPoly a) {
  std::vector<std::pair<FPoly, int>> out;
  FPoly x{0, 1};
  FPoly h = x;
  Integer p(static_cast<unsigned long>(f.p));
  for (int i = 1; 2 * i <= deg(a); ++i) {
    h = fpowmod(f, h, p, a);
    FPoly g = fgcd(f, a, fsub(f, h, x));
    if (deg(g) > 0) {
      out.emplace_back(g, i);
      a = fdiv(f, a, g);
      h = fmod(f, h, a);
    }
  }
  if (deg(a) > 0) out.emplace_back(a, deg(a));
  return out;
}

void edf(const Fp& f, const FPoly& a, int d, std::mt19937_64& rng, std::vector<FPoly>& out) {
  if (deg(a) == d) {
    out.push_back(a);
    return;
  }
  Integer e;
  mpz_ui_pow_ui(e.get_mpz_t(), f.p, static_cast<unsigned long>(d));
  e = (e - 1) / 2;
  std::uniform_int_distribution<u64> dist(0, f.p - 1);
  for (;;) {
    FPoly r(static_cast<size_t>(deg(a)));
    for (auto& c : r) c = dist(rng);
    trim(r);
    if (deg(r) < 1) continue;
    FPoly b = fsub(f, fpowmod(f, r, e, a), FPoly{1});
    FPoly g = fgcd(f, a, b);
    if (deg(g) > 0 && deg(g) < deg(a)) {
      edf(f, g, d, rng, out);
      edf(f, fdiv(f, a, g), d, rng, out);
      return;
    }
  }
}

std::vector<FPoly> factor_mod(const Fp& f, const FPoly& a, std::mt19937_64& rng) {
  std::vector<FPoly> out;
  for (auto& [g, d] : ddf(f, a)) edf(f, g, d, rng, out);
  std::sort(out.begin(), out.end());
  return out;
}

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

ZPoly zmul(const ZPoly& a, const ZPoly& b) {
  if (a.empty() || b.empty()) return {};
  ZPoly r(a.size() + b.size() - 1, Integer(0));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

// Symmetric residue mod m.
ZPoly zmod_sym(const ZPoly& a, const Integer& m) {
  ZPoly r(a.size());
  Integer half = m / 2;
  for (size_t i = 0; i < a.size(); ++i) {
    mpz_fdiv_r(r[i].get_mpz_t(), a[i].get_mpz_t(), m.get_mpz_t());
    if (r[i] > half) r[i] -= m;
  }
  while (!r.empty() && r.back() == 0) r.pop_back();
  return r;
}

ZPoly zmod_pos(const ZPoly& a, const Integer& m) {
  ZPoly r(a.size());
  for (size_t i = 0; i < a.size(); ++i) mpz_fdiv_r(r[i].get_mpz_t(), a[i].get_mpz_t(), m.get_mpz_t());
  while (!r.empty() && r.back() == 0) r.pop_back();
  return r;
}

ZPoly from_f(const FPoly& a) {
  ZPoly r;
  r.reserve(a.size());
  for (u64 c : a) r.emplace_back(static_cast<unsigned long>(c));
  return r;
}

// Exact division over Z; returns false if b does not divide a.
bool zdivides(const ZPoly& a, const ZPoly& b, ZPoly& q) {
  if (b.size() > a.size()) return false;
  ZPoly r = a;
  int db = static_cast<int>(b.size()) - 1;
  q.assign(a.size() - b.size() + 1, Integer(0));
  const Integer& lb = b.back();
  for (int i = static_cast<int>(a.size()) - 1; i >= db; --i) {
    auto ui = static_cast<size_t>(i);
    if (r[ui] == 0) continue;
    if (!mpz_divisible_p(r[ui].get_mpz_t(), lb.get_mpz_t())) return false;
    Integer c = r[ui] / lb;
    q[static_cast<size_t>(i - db)] = c;
    for (int j = 0; j <= db; ++j) r[static_cast<size_t>(i - db + j)] -= c * b[static_cast<size_t>(j)];
  }
  for (const auto& c : r)
    if (c != 0) return false;
  while (!q.empty() && q.back() == 0) q.pop_back();
  return true;
}

ZPoly zprimitive(ZPoly a) {
  Integer g = 0;
  for (const auto& c : a) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  if (g == 0) return a;
  if (a.back() < 0) g = -g;
  for (auto& c : a) c /= g;
  return a;
}

// Lift f = g*h mod p (g monic) to mod p^k. f is given mod p^k.
void hensel_pair(const Fp& F, const ZPoly& f, ZPoly& g, ZPoly& h, int k) {
  u64 p = F.p;
  FPoly s, t;
  fextgcd(F, reduce(g, p), reduce(h, p), s, t);
  Integer pj = static_cast<unsigned long>(p);
  for (int j = 1; j < k; ++j) {
    Integer pj1 = pj * static_cast<unsigned long>(p);
    ZPoly diff = f;
    ZPoly gh = zmul(g, h);
    if (gh.size() > diff.size()) diff.resize(gh.size(), Integer(0));
    for (size_t i = 0; i < gh.size(); ++i) diff[i] -= gh[i];
    for (auto& c : diff) {
      mpz_fdiv_r(c.get_mpz_t(), c.get_mpz_t(), pj1.get_mpz_t());
      c /= pj;  // exact: f = g h mod p^j
    }
    FPoly e = reduce(diff, p);
    FPoly fg = reduce(g, p), fh = reduce(h, p);
    FPoly te = fmul(F, t, e);
    FPoly dg = fmod(F, te, fg);
    FPoly rest = fsub(F, e, fmul(F, fh, dg));
    FPoly dh = fdiv(F, rest, fg);
    ZPoly zdg = from_f(dg), zdh = from_f(dh);
    if (zdg.size() > g.size()) g.resize(zdg.size(), Integer(0));
    for (size_t i = 0; i < zdg.size(); ++i) g[i] += zdg[i] * pj;
    if (zdh.size() > h.size()) h.resize(zdh.size(), Integer(0));
    for (size_t i = 0; i < zdh.size(); ++i) h[i] += zdh[i] * pj;
    g = zmod_pos(g, pj1);
    h = zmod_pos(h, pj1);
    pj = pj1;
  }
}

// Lift monic modular factors of f/lc(f) to mod p^k.
void hensel_tree(const Fp& F, const ZPoly& f, const std::vector<FPoly>& fac, int k, const Integer& pk,
                 std::vector<ZPoly>& out) {
  if (fac.size() == 1) {
    ZPoly m = f;
    Integer inv;
    mpz_invert(inv.get_mpz_t(), m.back().get_mpz_t(), pk.get_mpz_t());
    for (auto& c : m) c *= inv;
    out.push_back(zmod_pos(m, pk));
    return;
  }
  size_t half = fac.size() / 2;
  std::vector<FPoly> left(fac.begin(), fac.begin() + static_cast<long>(half));
  std::vector<FPoly> right(fac.begin() + static_cast<long>(half), fac.end());
  FPoly gl{1}, hr{1};
  for (const auto& a : left) gl = fmul(F, gl, a);
  for (const auto& a : right) hr = fmul(F, hr, a);
  u64 lcp = reduce(ZPoly{f.back()}, F.p)[0];
  for (auto& c : hr) c = F.mul(c, lcp);
  ZPoly g = from_f(gl), h = from_f(hr);
  h.back() = f.back();
  hensel_pair(F, f, g, h, k);
  hensel_tree(F, g, left, k, pk, out);
  hensel_tree(F, zmod_pos(h, pk), right, k, pk, out);
}

void combinations(size_t n, size_t r, size_t start, std::vector<size_t>& cur,
                  std::vector<std::vector<size_t>>& out) {
  if (cur.size() == r) {
    out.push_back(cur);
    return;
  }
  for (size_t i = start; i < n; ++i) {
    cur.push_back(i);
    combinations(n, r, i + 1, cur, out);
    cur.pop_back();
  }
}

std::vector<ZPoly> factor_squarefree_z(ZPoly f) {
  std::vector<ZPoly> result;
  if (f.size() <= 2) {
    result.push_back(f);
    return result;
  }
  if (f[0] == 0) {
    result.push_back(ZPoly{0, 1});
    f.erase(f.begin());
    auto rest = factor_squarefree_z(zprimitive(f));
    result.insert(result.end(), rest.begin(), rest.end());
    return result;
  }
  int n = static_cast<int>(f.size()) - 1;
  std::mt19937_64 rng(0x5eed2024ULL);

  // Pick the prime giving the fewest modular factors among a few candidates.
  std::vector<FPoly> best;
  u64 best_p = 0;
  int tried = 0;
  for (u64 p = 101; tried < 6; ++p) {
    if (!is_prime(p)) continue;
    if (mpz_divisible_ui_p(f.back().get_mpz_t(), p)) continue;
    Fp F{p};
    FPoly fp = fmonic(F, reduce(f, p));
    FPoly der;
    for (size_t i = 1; i < fp.size(); ++i) der.push_back(F.mul(fp[i], i % p));
    trim(der);
    if (der.empty() || deg(fgcd(F, fp, der)) > 0) continue;
    ++tried;
    auto fac = factor_mod(F, fp, rng);
    if (best_p == 0 || fac.size() < best.size()) {
      best = fac;
      best_p = p;
    }
    if (best.size() == 1) break;
  }
  if (best.size() <= 1) {
    result.push_back(f);
    return result;
  }
  Fp F{best_p};

  // Coefficient bound for any factor times lc.
  Integer norm2 = 0;
  for (const auto& c : f) norm2 += c * c;
  Integer norm;
  mpz_sqrt(norm.get_mpz_t(), norm2.get_mpz_t());
  norm += 1;
  Integer bound = norm * abs(f.back());
  mpz_mul_2exp(bound.get_mpz_t(), bound.get_mpz_t(), static_cast<unsigned long>(n));
  bound *= 2;
  Integer pk = static_cast<unsigned long>(best_p);
  int k = 1;
  while (pk <= bound) {
    pk *= static_cast<unsigned long>(best_p);
    ++k;
  }
  ZPoly fk = zmod_pos(f, pk);
  std::vector<ZPoly> lifted;
  hensel_tree(F, fk, best, k, pk, lifted);

  std::vector<ZPoly> remaining = lifted;
  size_t r = 1;
  while (2 * r <= remaining.size()) {
    std::vector<std::vector<size_t>> subsets;
    std::vector<size_t> cur;
    combinations(remaining.size(), r, 0, cur, subsets);
    bool found = false;
    for (const auto& s : subsets) {
      ZPoly g{f.back()};
      for (size_t i : s) g = zmod_sym(zmul(g, remaining[i]), pk);
      Integer lc_f0 = f.back() * f[0];
      if (g.empty() || g[0] == 0 || !mpz_divisible_p(lc_f0.get_mpz_t(), g[0].get_mpz_t())) continue;
      g = zprimitive(g);
      ZPoly q;
      if (!zdivides(f, g, q)) continue;
      result.push_back(g);
      f = q;
      std::vector<ZPoly> next;
      for (size_t i = 0; i < remaining.size(); ++i)
        if (std::find(s.begin(), s.end(), i) == s.end()) next.push_back(remaining[i]);
      remaining = next;
      found = true;
      break;
    }
    if (!found) ++r;
  }
  if (f.size() > 1) result.push_back(zprimitive(f));
  return result;
}

}  // namespace

std::vector<Poly> irreducible_factors(const Poly& p) {
  std::vector<Poly> out;
  if (p.degree() <= 0) return out;
  for (const auto& z : factor_squarefree_z(p.primitive_integer())) out.push_back(Poly::from_integers(z).monic());
  std::sort(out.begin(), out.end());
  return out;
}

bool is_irreducible(const Poly& p) {
  if (p.degree() <= 0) return false;
  if (squarefree_part(p).degree() != p.degree()) return false;
  return irreducible_factors(p).size() == 1;
}

Factorization factor_rational(const Poly& p) {
  if (p.is_zero()) throw std::invalid_argument("factor_rational: zero polynomial");
  Factorization out;
  out.unit = p.lc();
  for (const auto& [sf, mult] : squarefree_decomposition(p))
    for (auto& g : irreducible_factors(sf)) out.factors.emplace_back(std::move(g), mult);
  std::sort(out.factors.begin(), out.factors.end(), [](const auto& a, const auto& b) {
    if (a.first == b.first) return a.second < b.second;
    return a.first < b.first;
  });
  return out;
}

}  // namespace loopterm
