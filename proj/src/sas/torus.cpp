#include "loopterm/sas.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>

namespace loopterm {

namespace {

QPoly substitute_x(const QPoly& p, const Layout& layout, const RationalVector& x) {
  if (static_cast<int>(x.size()) != layout.nx) throw std::invalid_argument("point has the wrong dimension");
  QPoly r(p.nvars);
  for (const auto& [e, c] : p.terms) {
    Exponents f = e;
    Rational w = c;
    for (int v = 0; v < std::min(layout.nx, p.nvars); ++v) {
      for (int i = 0; i < f[static_cast<size_t>(v)]; ++i) w *= x[static_cast<size_t>(v)];
      f[static_cast<size_t>(v)] = 0;
    }
    if (w == 0) continue;
    auto& slot = r.terms[f];
    slot += w;
    if (slot == 0) r.terms.erase(f);
  }
  return r;
}

bool is_pinned_var(const Layout& layout, int v) { return v >= layout.constant_var(0); }

// Monomial over torus and parity variables -> coefficient polynomial over pinned variables.
using Split = std::map<Exponents, QPoly>;

Split split_pinned(const QPoly& p, const Layout& layout) {
  Split out;
  int n = layout.size();
  for (const auto& [e, c] : p.terms) {
    Exponents outer(static_cast<size_t>(n), 0), inner(static_cast<size_t>(n), 0);
    for (size_t v = 0; v < e.size(); ++v) {
      if (e[v] == 0) continue;
      if (static_cast<int>(v) < layout.nx) throw std::logic_error("split_pinned: X not substituted");
      (is_pinned_var(layout, static_cast<int>(v)) ? inner : outer)[v] = e[v];
    }
    auto it = out.try_emplace(outer, QPoly(n)).first;
    auto& slot = it->second.terms[inner];
    slot += c;
    if (slot == 0) it->second.terms.erase(inner);
  }
  for (auto it = out.begin(); it != out.end();)
    it = it->second.is_zero() ? out.erase(it) : std::next(it);
  return out;
}

Interval enclose_pinned(const QPoly& p, const Layout& layout, const RationalVector& x, long prec) {
  int n = layout.size();
  std::vector<Interval> vals;
  for (int v = layout.constant_var(0); v < n; ++v) {
    if (v < layout.amplitude_var(0)) {
      vals.push_back(layout.constants[static_cast<size_t>(v - layout.constant_var(0))].enclosure(prec).re);
    } else {
      Interval d = enclose_pinned(lift(substitute_x(layout.amplitudes[static_cast<size_t>(v - layout.amplitude_var(0))],
                                                     layout, x),
                                       n),
                                  layout, x, prec);
      Interval zero(Rational(0), prec);
      Interval nonneg(Rational(0), d.upper() > 0 ? d.upper() : Rational(0), prec);
      vals.push_back(d.upper() <= 0 ? zero : d.intersect(nonneg).sqrt());
    }
  }
  Interval sum(Rational(0), prec);
  for (const auto& [e, c] : p.terms) {
    Interval t(c, prec);
    for (size_t v = 0; v < e.size(); ++v)
      if (e[v] != 0) t = t * vals[v - static_cast<size_t>(layout.constant_var(0))].pow(static_cast<unsigned>(e[v]));
    sum = sum + t;
  }
  return sum;
}

struct TrigTerm {
  std::vector<int> ec, es;
  Interval coef;
};

struct Box {
  std::vector<Rational> lo, hi;  // in turns
};

struct Bounds {
  Rational lower, upper;
};

class MinSearch {
 public:
  MinSearch(std::vector<TrigTerm> terms, size_t m, long prec)
      : terms_(std::move(terms)), m_(m), prec_(prec), two_pi_(Interval::pi(prec) * Interval(Rational(2), prec)) {}

  Bounds bounds(const Box& b) const {
    std::vector<Interval> cb, sb, cm, sm, dth;
    for (size_t t = 0; t < m_; ++t) {
      Rational mid = (b.lo[t] + b.hi[t]) / 2;
      Interval th = two_pi_ * Interval(b.lo[t], b.hi[t], prec_);
      Interval tm = two_pi_ * Interval(mid, prec_);
      cb.push_back(th.cos());
      sb.push_back(th.sin());
      cm.push_back(tm.cos());
      sm.push_back(tm.sin());
      dth.push_back(two_pi_ * Interval(b.lo[t] - mid, b.hi[t] - mid, prec_));
    }
    Interval natural(Rational(0), prec_), fmid(Rational(0), prec_);
    std::vector<Interval> grad(m_, Interval(Rational(0), prec_));
    for (const auto& term : terms_) {
      Interval nb = term.coef, mb = term.coef;
      std::vector<Interval> factor;
      for (size_t t = 0; t < m_; ++t) {
        Interval f = cb[t].pow(static_cast<unsigned>(term.ec[t])) * sb[t].pow(static_cast<unsigned>(term.es[t]));
        factor.push_back(f);
        nb = nb * f;
        mb = mb * cm[t].pow(static_cast<unsigned>(term.ec[t])) * sm[t].pow(static_cast<unsigned>(term.es[t]));
      }
      natural = natural + nb;
      fmid = fmid + mb;
      for (size_t t = 0; t < m_; ++t) {
        int ec = term.ec[t], es = term.es[t];
        if (ec == 0 && es == 0) continue;
        Interval d(Rational(0), prec_);
        if (ec > 0)
          d = d - Interval(Rational(ec), prec_) * cb[t].pow(static_cast<unsigned>(ec - 1)) *
                      sb[t].pow(static_cast<unsigned>(es + 1));
        if (es > 0)
          d = d + Interval(Rational(es), prec_) * cb[t].pow(static_cast<unsigned>(ec + 1)) *
                      sb[t].pow(static_cast<unsigned>(es - 1));
        Interval g = term.coef * d;
        for (size_t u = 0; u < m_; ++u)
          if (u != t) g = g * factor[u];
        grad[t] = grad[t] + g;
      }
    }
    Interval centered = fmid;
    for (size_t t = 0; t < m_; ++t) centered = centered + grad[t] * dth[t];
    return {std::max(natural.lower(), centered.lower()), fmid.upper()};
  }

  Interval run(const Rational& eps, long max_boxes) const {
    using Item = std::pair<Rational, size_t>;
    std::vector<Box> boxes;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    Rational best;
    bool have_best = false;
    auto push = [&](Box b) {
      Bounds bd = bounds(b);
      if (!have_best || bd.upper < best) {
        best = bd.upper;
        have_best = true;
      }
      if (bd.lower <= best) {
        boxes.push_back(std::move(b));
        queue.push({bd.lower, boxes.size() - 1});
      }
    };
    // Start from a uniform grid so that each box covers less than a quarter turn.
    const int grid = 8;
    size_t cells = 1;
    for (size_t t = 0; t < m_; ++t) cells *= grid;
    for (size_t c = 0; c < cells; ++c) {
      Box b;
      size_t r = c;
      for (size_t t = 0; t < m_; ++t) {
        long i = static_cast<long>(r % grid);
        r /= grid;
        b.lo.push_back(Rational(i, grid));
        b.hi.push_back(Rational(i + 1, grid));
      }
      push(std::move(b));
    }
    long processed = 0;
    while (!queue.empty()) {
      auto [lb, idx] = queue.top();
      queue.pop();
      if (lb > best) continue;
      if (best - lb <= eps || processed >= max_boxes) return Interval(lb, best, prec_);
      ++processed;
      Box b = boxes[idx];
      size_t w = 0;
      for (size_t t = 1; t < m_; ++t)
        if (b.hi[t] - b.lo[t] > b.hi[w] - b.lo[w]) w = t;
      Rational mid = (b.lo[w] + b.hi[w]) / 2;
      Box left = b, right = b;
      left.hi[w] = mid;
      right.lo[w] = mid;
      push(std::move(left));
      push(std::move(right));
    }
    return Interval(best, best, prec_);
  }

 private:
  std::vector<TrigTerm> terms_;
  size_t m_;
  long prec_;
  Interval two_pi_;
};

long precision_for(const Rational& eps) {
  long bits = 128;
  Rational e = eps;
  while (e < 1 && bits < 4096) {
    e *= 2;
    ++bits;
  }
  return bits + 32;
}

Interval min_of_split(const Split& sp, const Layout& layout, const RationalVector& x, const Rational& eps,
                      long prec) {
  std::vector<int> ids;
  for (const auto& [outer, c] : sp)
    for (int t = 0; t < layout.ntorus; ++t)
      if (outer[static_cast<size_t>(layout.cos_var(t))] || outer[static_cast<size_t>(layout.sin_var(t))])
        ids.push_back(t);
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  std::vector<TrigTerm> terms;
  Interval constant(Rational(0), prec);
  for (const auto& [outer, c] : sp) {
    Interval v = enclose_pinned(c, layout, x, prec);
    TrigTerm t{std::vector<int>(ids.size()), std::vector<int>(ids.size()), v};
    bool trig = false;
    for (size_t i = 0; i < ids.size(); ++i) {
      t.ec[i] = outer[static_cast<size_t>(layout.cos_var(ids[i]))];
      t.es[i] = outer[static_cast<size_t>(layout.sin_var(ids[i]))];
      trig = trig || t.ec[i] || t.es[i];
    }
    if (trig) terms.push_back(std::move(t));
    else constant = constant + v;
  }
  if (terms.empty()) return constant;
  terms.push_back(TrigTerm{std::vector<int>(ids.size()), std::vector<int>(ids.size()), constant});
  return MinSearch(std::move(terms), ids.size(), prec).run(eps, 200000);
}

}  // namespace

AlgebraicNumber exact_value(const QPoly& p, const Layout& layout, const RationalVector& x) {
  QPoly q = substitute_x(p, layout, x);
  std::vector<int> used;
  for (int v = layout.nx; v < q.nvars; ++v)
    if (uses_var(q, v)) {
      if (!is_pinned_var(layout, v)) throw std::invalid_argument("exact_value: torus or parity variable present");
      used.push_back(v);
    }
  if (used.empty()) return q.terms.empty() ? Rational(0) : q.terms.begin()->second;
  ExprRing ring;
  std::map<int, RootExpr> sym;
  for (int v : used) {
    AlgebraicNumber val;
    if (v < layout.amplitude_var(0)) {
      val = layout.constants[static_cast<size_t>(v - layout.constant_var(0))];
    } else {
      AlgebraicNumber d = exact_value(layout.amplitudes[static_cast<size_t>(v - layout.amplitude_var(0))], layout, x);
      val = d.is_zero() ? AlgebraicNumber(0) : sqrt_positive(d);
    }
    sym[v] = ring.embed(val, layout.name(v));
  }
  RootExpr acc(0);
  for (const auto& [e, c] : q.terms) {
    RootExpr t(c);
    for (int v : used)
      if (e[static_cast<size_t>(v)] != 0) t = ring.mul(t, ring.pow(sym[v], static_cast<unsigned long>(e[static_cast<size_t>(v)])));
    acc = ring.add(acc, t);
  }
  return ring.to_algebraic(acc);
}

Interval torus_min_certify(const QPoly& p, const Layout& layout, const RationalVector& x0, const Rational& eps) {
  if (eps <= 0) throw std::invalid_argument("torus_min_certify: eps must be positive");
  long prec = precision_for(eps);
  QPoly q = lift(substitute_x(p, layout, x0), layout.size());
  std::vector<QPoly> cases;
  if (uses_parity(q, layout)) {
    cases.push_back(substitute_value(q, layout.parity_var(), 1));
    cases.push_back(substitute_value(q, layout.parity_var(), -1));
  } else {
    cases.push_back(q);
  }
  std::optional<Interval> best;
  for (const auto& c : cases) {
    Interval m = min_of_split(split_pinned(c, layout), layout, x0, eps, prec);
    if (!best) {
      best = m;
    } else {
      Rational lo = std::min(best->lower(), m.lower()), hi = std::min(best->upper(), m.upper());
      best = Interval(lo, hi, prec);
    }
  }
  return *best;
}

Interval torus_min_certify(const Coefficient& c, const TorusRegistry& torus, const RationalVector& x0,
                           const Rational& eps) {
  Layout layout;
  layout.nx = static_cast<int>(x0.size());
  layout.ntorus = static_cast<int>(torus.angles().size());
  QPoly p = coefficient_qpoly(c, layout);
  return torus_min_certify(p, layout, x0, eps);
}

namespace {

Truth neg(Truth t) { return t == Truth::True ? Truth::False : t == Truth::False ? Truth::True : t; }

bool compare(int sign, Rel r) {
  switch (r) {
    case Rel::Gt: return sign > 0;
    case Rel::Ge: return sign >= 0;
    case Rel::Lt: return sign < 0;
    case Rel::Le: return sign <= 0;
    case Rel::Eq: return sign == 0;
    case Rel::Ne: return sign != 0;
  }
  return false;
}

class Certifier {
 public:
  Certifier(const TorusFormula& f, const RationalVector& x, const Rational& eps) : f_(f), x_(x), eps_(eps) {}

  Truth eval(const Formula& f) const {
    using K = Formula::Kind;
    switch (f.kind) {
      case K::True: return Truth::True;
      case K::False: return Truth::False;
      case K::Atom: return quantified_atom(f.poly, f.rel, true);
      case K::Not: return neg(eval(f.args[0]));
      case K::And:
      case K::Or: {
        bool all = true;
        for (const auto& g : f.args) {
          Truth t = eval(g);
          if (f.kind == K::And && t == Truth::False) return Truth::False;
          if (f.kind == K::Or && t == Truth::True) return Truth::True;
          all = all && t != Truth::Undetermined;
        }
        if (!all) return Truth::Undetermined;
        return f.kind == K::And ? Truth::True : Truth::False;
      }
      case K::Forall:
      case K::Exists: return quantified(f.args[0], f.kind == K::Forall);
    }
    return Truth::Undetermined;
  }

 private:
  Truth quantified(const Formula& body, bool forall) const {
    using K = Formula::Kind;
    if (body.kind == K::True || body.kind == K::False) return eval(body);
    if (body.kind == K::Atom) return quantified_atom(body.poly, body.rel, forall);
    if ((forall && body.kind == K::And) || (!forall && body.kind == K::Or)) {
      Formula::Kind k = forall ? K::Forall : K::Exists;
      Formula j;
      j.kind = body.kind;
      for (const auto& g : body.args) {
        Formula q;
        q.kind = k;
        q.args.push_back(g);
        j.args.push_back(q);
      }
      return eval(j);
    }
    if (body.is_quantifier() && body.kind == (forall ? K::Forall : K::Exists)) return quantified(body.args[0], forall);
    return Truth::Undetermined;
  }

  // Truth of "for all (or some) torus points and parities: p rel 0" at X.
  Truth quantified_atom(const QPoly& p, Rel rel, bool forall) const {
    if (!forall) return neg(quantified_atom(p, negate(rel), true));
    const Layout& L = f_.layout;
    QPoly q = lift(substitute_x(p, L, x_), L.size());
    // Drop torus-dependent parts whose coefficient vanishes exactly.
    Split sp = split_pinned(q, L);
    Exponents unit(static_cast<size_t>(L.size()), 0);
    bool varying = false;
    for (auto it = sp.begin(); it != sp.end();) {
      if (it->first != unit && exact_value(it->second, L, x_).is_zero()) {
        it = sp.erase(it);
      } else {
        varying = varying || it->first != unit;
        ++it;
      }
    }
    if (!varying) {
      AlgebraicNumber v = sp.count(unit) ? exact_value(sp.at(unit), L, x_) : AlgebraicNumber(0);
      int s = v.is_zero() ? 0 : v.sign();
      return compare(s, rel) ? Truth::True : Truth::False;
    }
    QPoly reduced(L.size());
    for (const auto& [outer, c] : sp) {
      QPoly mono(L.size());
      mono.terms[outer] = 1;
      reduced = padd(reduced, pmul(c, mono));
    }
    auto min_positive = [&](const QPoly& r, bool strict) {
      Interval m = torus_min_certify(r, L, x_, eps_);
      if (strict ? m.positive() : m.nonnegative()) return Truth::True;
      if (strict ? m.upper() <= 0 : m.upper() < 0) return Truth::False;
      return Truth::Undetermined;
    };
    switch (rel) {
      case Rel::Gt: return min_positive(reduced, true);
      case Rel::Ge: return min_positive(reduced, false);
      case Rel::Lt: return min_positive(-reduced, true);
      case Rel::Le: return min_positive(-reduced, false);
      case Rel::Eq: {
        Truth a = min_positive(reduced, false), b = min_positive(-reduced, false);
        if (a == Truth::False || b == Truth::False) return Truth::False;
        return a == Truth::True && b == Truth::True ? Truth::True : Truth::Undetermined;
      }
      case Rel::Ne: {
        Truth a = min_positive(reduced, true), b = min_positive(-reduced, true);
        if (a == Truth::True || b == Truth::True) return Truth::True;
        return Truth::Undetermined;
      }
    }
    return Truth::Undetermined;
  }

  const TorusFormula& f_;
  const RationalVector& x_;
  Rational eps_;
};

}  // namespace

Truth certify_model(const TorusFormula& f, const RationalVector& x0, const Rational& eps) {
  return Certifier(f, x0, eps).eval(f.formula);
}

}  // namespace loopterm
