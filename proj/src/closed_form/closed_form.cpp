#include "loopterm/closed_form.hpp"

#include "loopterm/factor.hpp"

#include <stdexcept>

namespace loopterm {

namespace {

// Arithmetic in K = Q[y]/(g).
struct Field {
  Poly g;
  Poly reduce(const Poly& p) const { return p % g; }
  Poly mul(const Poly& a, const Poly& b) const { return (a * b) % g; }
  Poly inv(const Poly& a) const { return inverse_mod(a, g); }
  Poly y() const { return reduce(Poly::x()); }
};

using KVec = std::vector<Poly>;
using KPoly = std::vector<Poly>;  // polynomial in lambda over K, low degree first

KVec apply(const RationalMatrix& a, const KVec& v, const Field&) {
  int n = a.rows();
  KVec out(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    Poly acc;
    for (int j = 0; j < n; ++j)
      if (a(i, j) != 0) acc = acc + v[static_cast<size_t>(j)] * Poly(a(i, j));
    out[static_cast<size_t>(i)] = acc;
  }
  return out;
}

// (A - y) v
KVec shifted_apply(const RationalMatrix& a, const KVec& v, const Field& k) {
  KVec out = apply(a, v, k);
  Poly y = k.y();
  for (size_t i = 0; i < out.size(); ++i) out[i] = k.reduce(out[i] - y * v[i]);
  return out;
}

// Divides by (lambda - y); returns quotient, remainder in *rem.
KPoly synthetic_div(const KPoly& p, const Field& k, Poly* rem) {
  if (p.empty()) {
    *rem = Poly();
    return {};
  }
  Poly y = k.y();
  KPoly q(p.size() - 1);
  Poly carry;
  for (size_t i = p.size(); i-- > 0;) {
    Poly c = k.reduce(p[i] + k.mul(carry, y));
    if (i == 0) {
      *rem = c;
    } else {
      q[i - 1] = c;
    }
    carry = c;
  }
  return q;
}

// H(A) v by Horner.
KVec apply_poly(const RationalMatrix& a, const KPoly& h, const KVec& v, const Field& k) {
  KVec acc(v.size());
  for (size_t i = h.size(); i-- > 0;) {
    acc = apply(a, acc, k);
    for (size_t r = 0; r < acc.size(); ++r) acc[r] = k.reduce(acc[r] + k.mul(h[i], v[r]));
  }
  return acc;
}

// binom(n, t) as a polynomial in n.
Poly binomial_poly(int t) {
  Poly p(1);
  for (int i = 0; i < t; ++i) p = p * Poly({Rational(-i), Rational(1)});
  Rational f = 1;
  for (int i = 2; i <= t; ++i) f *= i;
  return p * Poly(Rational(1) / f);
}

EigenGroup build_group(const RationalMatrix& a, const Poly& charpoly, const Poly& g, int e) {
  int n = a.rows();
  Field k{g};
  EigenGroup grp;
  grp.factor = g;
  grp.multiplicity = e;
  grp.roots = isolate_roots(g);

  KPoly h;
  for (const auto& c : charpoly.coeffs()) h.push_back(Poly(c));
  for (int i = 0; i < e; ++i) {
    Poly rem;
    h = synthetic_div(h, k, &rem);
    if (!rem.is_zero()) throw std::logic_error("closed form: factor multiplicity mismatch");
  }
  // Taylor coefficients of H at y, then the inverse series mod t^e.
  std::vector<Poly> taylor;
  KPoly rest = h;
  for (int i = 0; i < e; ++i) {
    Poly rem;
    rest = synthetic_div(rest, k, &rem);
    taylor.push_back(rem);
  }
  std::vector<Poly> s(static_cast<size_t>(e));
  s[0] = k.inv(taylor[0]);
  for (int j = 1; j < e; ++j) {
    Poly acc;
    for (int i = 1; i <= j; ++i) acc = acc + k.mul(taylor[static_cast<size_t>(i)], s[static_cast<size_t>(j - i)]);
    s[static_cast<size_t>(j)] = k.reduce(-k.mul(s[0], acc));
  }
  std::vector<Poly> yinv(static_cast<size_t>(e));
  yinv[0] = Poly(1);
  Poly yi = k.inv(k.y());
  for (int t = 1; t < e; ++t) yinv[static_cast<size_t>(t)] = k.mul(yinv[static_cast<size_t>(t - 1)], yi);

  grp.coeff.assign(static_cast<size_t>(n),
                   std::vector<std::vector<Poly>>(static_cast<size_t>(e), std::vector<Poly>(static_cast<size_t>(n))));
  for (int m = 0; m < n; ++m) {
    KVec unit(static_cast<size_t>(n));
    unit[static_cast<size_t>(m)] = Poly(1);
    KVec u = apply_poly(a, h, unit, k);
    // P e_m = sum_j s_j (A - y)^j u
    KVec proj(static_cast<size_t>(n));
    KVec pw = u;
    for (int j = 0; j < e; ++j) {
      for (int r = 0; r < n; ++r)
        proj[static_cast<size_t>(r)] =
            k.reduce(proj[static_cast<size_t>(r)] + k.mul(s[static_cast<size_t>(j)], pw[static_cast<size_t>(r)]));
      if (j + 1 < e) pw = shifted_apply(a, pw, k);
    }
    // A^n P e_m = sum_t binom(n,t) y^(n-t) (A - y)^t P e_m
    KVec w = proj;
    for (int t = 0; t < e; ++t) {
      Poly b = binomial_poly(t);
      for (int l = 0; l <= b.degree(); ++l) {
        if (b.coeff(l) == 0) continue;
        for (int j = 0; j < n; ++j) {
          Poly term = k.mul(yinv[static_cast<size_t>(t)], w[static_cast<size_t>(j)]) * Poly(b.coeff(l));
          auto& slot = grp.coeff[static_cast<size_t>(j)][static_cast<size_t>(l)][static_cast<size_t>(m)];
          slot = k.reduce(slot + term);
        }
      }
      if (t + 1 < e) w = shifted_apply(a, w, k);
    }
  }
  return grp;
}

// Newton power sums p_0..p_{k-1} of the roots of a monic polynomial.
std::vector<Rational> power_sums(const Poly& g) {
  int k = g.degree();
  std::vector<Rational> p(static_cast<size_t>(k));
  if (k == 0) return p;
  p[0] = k;
  for (int i = 1; i < k; ++i) {
    Rational acc = Rational(i) * g.coeff(k - i);
    for (int j = 1; j < i; ++j) acc += g.coeff(k - j) * p[static_cast<size_t>(i - j)];
    p[static_cast<size_t>(i)] = -acc;
  }
  return p;
}

Rational trace(const Poly& c, const std::vector<Rational>& sums) {
  Rational t = 0;
  for (int i = 0; i <= c.degree(); ++i) t += c.coeff(i) * sums[static_cast<size_t>(i)];
  return t;
}

}  // namespace

AlgebraicNumber imaginary_unit() {
  for (const auto& r : isolate_roots(Poly({1, 0, 1})))
    if (r.box().im_lo > 0) return r;
  throw std::logic_error("imaginary unit not isolated");
}

ClosedForm closed_form(const RationalMatrix& a) {
  if (!a.square()) throw std::invalid_argument("closed form needs a square matrix");
  ClosedForm cf;
  cf.a = a;
  cf.charpoly = char_poly(a);
  while (cf.shift <= cf.charpoly.degree() && cf.charpoly.coeff(cf.shift) == 0) ++cf.shift;
  Factorization fac = factor_rational(cf.charpoly);
  for (const auto& [g, e] : fac.factors) {
    if (g.degree() == 1 && g.coeff(0) == 0) continue;
    cf.groups.push_back(build_group(a, cf.charpoly, g, e));
  }
  return cf;
}

RationalVector eval_closed_form(const ClosedForm& cf, const RationalVector& x0, long n) {
  int dim = cf.dim();
  if (static_cast<int>(x0.size()) != dim) throw std::invalid_argument("initial vector has the wrong dimension");
  if (n < 0) throw std::invalid_argument("negative iteration count");
  if (n < cf.shift) return mat_apply_iter(cf.a, x0, static_cast<unsigned long>(n));
  RationalVector out(static_cast<size_t>(dim));
  for (const auto& grp : cf.groups) {
    auto sums = power_sums(grp.factor);
    Poly yn = pow_mod(Poly::x(), static_cast<unsigned long>(n), grp.factor);
    for (int j = 0; j < dim; ++j) {
      Poly c;
      Rational npow = 1;
      for (int l = 0; l < grp.multiplicity; ++l) {
        for (int m = 0; m < dim; ++m)
          if (x0[static_cast<size_t>(m)] != 0)
            c = c + grp.coeff[static_cast<size_t>(j)][static_cast<size_t>(l)][static_cast<size_t>(m)] *
                        Poly(npow * x0[static_cast<size_t>(m)]);
        npow *= n;
      }
      out[static_cast<size_t>(j)] += trace((c * yn) % grp.factor, sums);
    }
  }
  return out;
}

std::vector<CInterval> enclose_closed_form(const ClosedForm& cf, const RationalVector& x0, long n, long bits) {
  int dim = cf.dim();
  if (static_cast<int>(x0.size()) != dim) throw std::invalid_argument("initial vector has the wrong dimension");
  if (n < cf.shift) throw std::invalid_argument("closed form is exact only from the shift on");
  for (long prec = bits + 64;; prec *= 2) {
    std::vector<CInterval> out;
    for (int j = 0; j < dim; ++j) out.emplace_back(CInterval(Interval(Rational(0), prec), Interval(Rational(0), prec)));
    for (const auto& grp : cf.groups)
      for (const auto& root : grp.roots) {
        CInterval y = root.enclosure(prec);
        CInterval yn = y.pow(static_cast<unsigned>(n));
        for (int j = 0; j < dim; ++j) {
          CInterval acc(Interval(Rational(0), prec), Interval(Rational(0), prec));
          Rational npow = 1;
          for (int l = 0; l < grp.multiplicity; ++l) {
            Poly c;
            for (int m = 0; m < dim; ++m)
              if (x0[static_cast<size_t>(m)] != 0)
                c = c + grp.coeff[static_cast<size_t>(j)][static_cast<size_t>(l)][static_cast<size_t>(m)] *
                            Poly(npow * x0[static_cast<size_t>(m)]);
            CInterval v(Interval(Rational(0), prec), Interval(Rational(0), prec));
            for (int i = c.degree(); i >= 0; --i)
              v = v * y + CInterval(Interval(c.coeff(i), prec), Interval(Rational(0), prec));
            acc = acc + v;
            npow *= n;
          }
          out[static_cast<size_t>(j)] = out[static_cast<size_t>(j)] + acc * yn;
        }
      }
    Rational limit(1);
    limit /= Rational(Integer(1) << static_cast<unsigned>(bits));
    bool ok = true;
    for (const auto& c : out) ok = ok && c.re.width() <= limit && c.im.width() <= limit;
    if (ok || prec > 16384) return out;
  }
}

EigenSymbols::EigenSymbols(const ClosedForm& cf, ExprRing& ring) : cf_(&cf), ring_(&ring) {
  for (size_t g = 0; g < cf.groups.size(); ++g) {
    const auto& grp = cf.groups[g];
    std::vector<Slot> slots(grp.roots.size());
    std::vector<int> conj(grp.roots.size(), -1);
    for (size_t r = 0; r < grp.roots.size(); ++r) {
      AlgebraicNumber c = grp.roots[r].conj();
      for (size_t q = 0; q < grp.roots.size(); ++q)
        if (grp.roots[q] == c) conj[r] = static_cast<int>(q);
      if (grp.factor.degree() == 1) continue;
      if (grp.factor.degree() == 2 && r == 1) {
        slots[1].symbol = slots[0].symbol;
        slots[1].image = Poly({-grp.factor.coeff(1), Rational(-1)});
        continue;
      }
      std::string name = "e" + std::to_string(g + 1) + "_" + std::to_string(r + 1);
      slots[r].symbol = ring.add_symbol(grp.roots[r], name);
      slots[r].image = Poly::x();
    }
    slots_.push_back(slots);
    conj_.push_back(conj);
  }
}

RootExpr EigenSymbols::at(int g, int r, const Poly& p) const {
  const auto& grp = cf_->groups[static_cast<size_t>(g)];
  const Slot& slot = slots_[static_cast<size_t>(g)][static_cast<size_t>(r)];
  if (slot.symbol < 0) return RootExpr(p.eval(grp.roots[static_cast<size_t>(r)].rational_value()));
  return ring_->from_poly(p.compose(slot.image) % grp.factor, slot.symbol);
}

RealForm realify(const ClosedForm& cf) {
  RealForm rf;
  rf.dim = cf.dim();
  rf.shift = cf.shift;
  ExprRing ring;
  EigenSymbols syms(cf, ring);
  int isym = ring.add_symbol(imaginary_unit(), "i");
  RootExpr iexpr = ring.symbol(isym);
  auto size3 = [&](int e) {
    return std::vector<std::vector<std::vector<AlgebraicNumber>>>(
        static_cast<size_t>(rf.dim),
        std::vector<std::vector<AlgebraicNumber>>(static_cast<size_t>(e),
                                                  std::vector<AlgebraicNumber>(static_cast<size_t>(rf.dim))));
  };
  for (size_t g = 0; g < cf.groups.size(); ++g) {
    const auto& grp = cf.groups[g];
    for (size_t r = 0; r < grp.roots.size(); ++r) {
      const AlgebraicNumber& xi = grp.roots[r];
      bool real = xi.is_real();
      if (!real && xi.box().im_hi < 0) continue;
      RealTerm term;
      term.eigenvalue = xi;
      term.modulus = modulus(xi);
      term.pair = !real;
      term.cos_part = size3(grp.multiplicity);
      if (!real) term.sin_part = size3(grp.multiplicity);
      int cr = syms.conjugate(static_cast<int>(g), static_cast<int>(r));
      for (int j = 0; j < rf.dim; ++j)
        for (int l = 0; l < grp.multiplicity; ++l)
          for (int m = 0; m < rf.dim; ++m) {
            const Poly& c = grp.coeff[static_cast<size_t>(j)][static_cast<size_t>(l)][static_cast<size_t>(m)];
            if (c.is_zero()) continue;
            auto jj = static_cast<size_t>(j), ll = static_cast<size_t>(l), mm = static_cast<size_t>(m);
            if (real) {
              term.cos_part[jj][ll][mm] = ring.to_algebraic(syms.at(static_cast<int>(g), static_cast<int>(r), c));
              continue;
            }
            RootExpr a = syms.at(static_cast<int>(g), static_cast<int>(r), c);
            RootExpr b = syms.at(static_cast<int>(g), cr, c);
            AlgebraicNumber cs = ring.to_algebraic(ring.add(a, b));
            AlgebraicNumber sn = ring.to_algebraic(ring.mul(iexpr, ring.sub(a, b)));
            if (!cs.is_real() || !sn.is_real()) throw std::logic_error("realify: coefficient is not real");
            term.cos_part[jj][ll][mm] = cs;
            term.sin_part[jj][ll][mm] = sn;
          }
      rf.terms.push_back(std::move(term));
    }
  }
  return rf;
}

std::string display(const AlgebraicNumber& a) {
  if (a.is_rational()) return a.rational_value().get_str();
  return a.to_string();
}

namespace {

// Linear form sum_m c_m x_m with real algebraic coefficients.
std::string linear_form(const std::vector<AlgebraicNumber>& c, const std::vector<std::string>& names, bool* single) {
  std::string s;
  int count = 0;
  for (size_t m = 0; m < c.size(); ++m) {
    if (c[m].is_zero()) continue;
    ++count;
    if (c[m].is_rational()) {
      Rational q = c[m].rational_value();
      Rational mag = abs(q);
      if (s.empty()) s += q < 0 ? "-" : "";
      else s += q < 0 ? " - " : " + ";
      s += mag == 1 ? names[m] : mag.get_str() + "*" + names[m];
    } else {
      if (!s.empty()) s += " + ";
      s += "[" + display(c[m]) + "]*" + names[m];
    }
  }
  *single = count <= 1;
  return s;
}

std::string npow(int l) {
  if (l == 0) return "";
  if (l == 1) return "n*";
  return "n^" + std::to_string(l) + "*";
}

}  // namespace

std::string to_string(const RealForm& rf, int j, const std::vector<std::string>& names) {
  std::string s;
  int angle = 0;
  for (const auto& t : rf.terms) {
    if (t.pair) ++angle;
    auto jj = static_cast<size_t>(j);
    for (size_t l = 0; l < t.cos_part[jj].size(); ++l) {
      std::vector<std::pair<std::string, std::string>> parts;
      bool single = false;
      std::string base = t.pair ? (t.modulus.is_rational() && t.modulus.rational_value() == 1
                                       ? ""
                                       : "(" + display(t.modulus) + ")^n*")
                                : "";
      std::string cs = linear_form(t.cos_part[jj][l], names, &single);
      if (!cs.empty()) {
        std::string c = single ? cs : "(" + cs + ")";
        if (t.pair) parts.push_back({c, "cos(n*t" + std::to_string(angle) + ")"});
        else parts.push_back({c, ""});
      }
      if (t.pair) {
        std::string sn = linear_form(t.sin_part[jj][l], names, &single);
        if (!sn.empty()) parts.push_back({single ? sn : "(" + sn + ")", "sin(n*t" + std::to_string(angle) + ")"});
      }
      for (const auto& [c, f] : parts) {
        if (!s.empty()) s += " + ";
        s += npow(static_cast<int>(l)) + c;
        if (t.pair) {
          s += "*" + base + f;
        } else if (!(t.eigenvalue.is_rational() && t.eigenvalue.rational_value() == 1)) {
          s += "*(" + display(t.eigenvalue) + ")^n";
        }
      }
    }
  }
  return s.empty() ? "0" : s;
}

std::string to_string(const ClosedForm& cf, const std::vector<std::string>& names) {
  std::string s = "charpoly: " + cf.charpoly.to_string("x") + "\nshift: " + std::to_string(cf.shift) + "\n";
  for (size_t g = 0; g < cf.groups.size(); ++g) {
    const auto& grp = cf.groups[g];
    s += "factor " + std::to_string(g + 1) + ": " + grp.factor.to_string("y") + "  multiplicity " +
         std::to_string(grp.multiplicity) + "\n";
    for (const auto& r : grp.roots) s += "  root " + r.to_string() + "\n";
    for (size_t j = 0; j < grp.coeff.size(); ++j)
      for (size_t l = 0; l < grp.coeff[j].size(); ++l) {
        std::string line;
        for (size_t m = 0; m < grp.coeff[j][l].size(); ++m) {
          const Poly& c = grp.coeff[j][l][m];
          if (c.is_zero()) continue;
          if (!line.empty()) line += " + ";
          line += "(" + c.to_string("y") + ")*" + names[m];
        }
        if (line.empty()) continue;
        s += "  " + names[j] + ": n^" + std::to_string(l) + " coefficient " + line + "\n";
      }
  }
  return s;
}

}  // namespace loopterm
