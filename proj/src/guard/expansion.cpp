#include "loopterm/guard.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace loopterm {

ExpansionContext::ExpansionContext(const ClosedForm& cf) : cf_(&cf) {
  syms_ = std::make_unique<EigenSymbols>(cf, ring_);
  i_ = ring_.symbol(ring_.add_symbol(imaginary_unit(), "i"));
  for (size_t g = 0; g < cf.groups.size(); ++g)
    for (size_t r = 0; r < cf.groups[g].roots.size(); ++r) {
      roots_.push_back(syms_->root(static_cast<int>(g), static_cast<int>(r)));
      index_.emplace_back(static_cast<int>(g), static_cast<int>(r));
    }
}

namespace {

// Sum of (product of eigenvalues)^n * coefficient(n-degree, X-monomial).
using ExpKey = std::vector<int>;  // sorted root ids
using CoeffMap = std::map<std::pair<int, Exponents>, RootExpr>;
using ExpPoly = std::map<ExpKey, CoeffMap>;

void accumulate(CoeffMap& into, const std::pair<int, Exponents>& key, const RootExpr& v, const ExprRing& ring) {
  auto it = into.find(key);
  if (it == into.end()) {
    if (!v.is_zero()) into.emplace(key, v);
    return;
  }
  it->second = ring.add(it->second, v);
  if (it->second.is_zero()) into.erase(it);
}

ExpPoly multiply(const ExpPoly& a, const ExpPoly& b, const ExprRing& ring) {
  ExpPoly out;
  for (const auto& [ka, ca] : a)
    for (const auto& [kb, cb] : b) {
      ExpKey k;
      std::merge(ka.begin(), ka.end(), kb.begin(), kb.end(), std::back_inserter(k));
      CoeffMap& slot = out[k];
      for (const auto& [ta, va] : ca)
        for (const auto& [tb, vb] : cb) {
          Exponents e = ta.second;
          for (size_t i = 0; i < e.size(); ++i) e[i] += tb.second[i];
          accumulate(slot, {ta.first + tb.first, e}, ring.mul(va, vb), ring);
        }
      if (slot.empty()) out.erase(k);
    }
  return out;
}

Rational binom(int n, int k) {
  Rational r = 1;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

ExpPoly coordinate(int j, ExpansionContext& ctx) {
  const ClosedForm& cf = ctx.closed_form();
  const ExprRing& ring = ctx.ring();
  int nv = cf.dim();
  ExpPoly f;
  for (int id = 0; id < ctx.num_roots(); ++id) {
    auto [g, r] = ctx.root_index(id);
    const EigenGroup& grp = cf.groups[static_cast<size_t>(g)];
    RootExpr xis = ring.pow(ctx.root_expr(id), static_cast<unsigned long>(cf.shift));
    CoeffMap cm;
    for (int lp = 0; lp < grp.multiplicity; ++lp)
      for (int m = 0; m < nv; ++m) {
        const Poly& c = grp.coeff[static_cast<size_t>(j)][static_cast<size_t>(lp)][static_cast<size_t>(m)];
        if (c.is_zero()) continue;
        RootExpr v = ring.mul(ctx.symbols().at(g, r, c), xis);
        Exponents e(static_cast<size_t>(nv), 0);
        e[static_cast<size_t>(m)] = 1;
        // (n + s)^lp
        for (int l = 0; l <= lp; ++l) {
          Rational w = binom(lp, l);
          for (int t = 0; t < lp - l; ++t) w *= cf.shift;
          if (w != 0) accumulate(cm, {l, e}, ring.scale(v, w), ring);
        }
      }
    if (!cm.empty()) f[{id}] = cm;
  }
  return f;
}

// Order for choosing basis phases: low degree first, then upper half plane.
bool phase_before(const AlgebraicNumber& a, const AlgebraicNumber& b) {
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  if (a.minpoly() != b.minpoly()) return a.minpoly() < b.minpoly();
  bool ua = a.box().im_lo > 0, ub = b.box().im_lo > 0;
  if (ua != ub) return ua;
  return a.box().re_lo > b.box().re_lo;
}

}  // namespace

GuardExpansion substitute_guard(const QPoly& guard, int index, ExpansionContext& ctx) {
  const ClosedForm& cf = ctx.closed_form();
  ExprRing& ring = ctx.ring();
  int nv = cf.dim();
  if (guard.nvars != nv) throw std::invalid_argument("guard and closed form dimensions differ");

  std::vector<std::vector<ExpPoly>> powers(static_cast<size_t>(nv));
  ExpPoly one;
  one[{}][{0, Exponents(static_cast<size_t>(nv), 0)}] = RootExpr(1);
  auto power = [&](int j, int e) -> const ExpPoly& {
    auto& cache = powers[static_cast<size_t>(j)];
    if (cache.empty()) {
      cache.push_back(one);
      cache.push_back(coordinate(j, ctx));
    }
    while (static_cast<int>(cache.size()) <= e) cache.push_back(multiply(cache.back(), cache[1], ring));
    return cache[static_cast<size_t>(e)];
  };

  ExpPoly total;
  for (const auto& [e, q] : guard.terms) {
    ExpPoly prod = one;
    for (int j = 0; j < nv; ++j)
      if (e[static_cast<size_t>(j)] > 0) prod = multiply(prod, power(j, e[static_cast<size_t>(j)]), ring);
    for (const auto& [k, cm] : prod) {
      CoeffMap& slot = total[k];
      for (const auto& [t, v] : cm) accumulate(slot, t, ring.scale(v, q), ring);
      if (slot.empty()) total.erase(k);
    }
  }

  GuardExpansion ge;
  ge.guard = index;
  ge.nvars = nv;
  for (const auto& [k, cm] : total) {
    RootExpr eta_expr(1);
    for (int id : k) eta_expr = ring.mul(eta_expr, ctx.root_expr(id));
    AlgebraicNumber eta = ring.to_algebraic(eta_expr);
    EtaTerm* slot = nullptr;
    for (auto& t : ge.terms)
      if (t.eta == eta) slot = &t;
    if (!slot) {
      ge.terms.emplace_back();
      slot = &ge.terms.back();
      slot->eta = eta;
      slot->eta_expr = eta_expr;
    }
    for (const auto& [t, v] : cm) accumulate(slot->coeff, t, v, ring);
  }
  // Drop coefficients that vanish as algebraic numbers.
  std::vector<EtaTerm> kept;
  for (auto& t : ge.terms) {
    for (auto it = t.coeff.begin(); it != t.coeff.end();) {
      if (ring.is_zero(it->second)) it = t.coeff.erase(it);
      else ++it;
    }
    if (!t.coeff.empty()) kept.push_back(std::move(t));
  }
  ge.terms = std::move(kept);

  for (auto& t : ge.terms) {
    t.modulus = modulus(t.eta);
    t.unit = unit_part(t.eta);
    t.arg = classify_argument(t.eta);
    int found = -1;
    for (size_t c = 0; c < ge.classes.size(); ++c)
      if (compare_real(ge.classes[c].modulus, t.modulus) == 0) found = static_cast<int>(c);
    if (found < 0) {
      ge.classes.push_back({t.modulus, {}, {}});
      found = static_cast<int>(ge.classes.size()) - 1;
    }
    t.modulus_class = found;
  }
  // Sort classes ascending and renumber.
  std::vector<int> order(ge.classes.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return compare_real(ge.classes[static_cast<size_t>(a)].modulus,
                                                    ge.classes[static_cast<size_t>(b)].modulus) < 0; });
  std::vector<int> rank(order.size());
  std::vector<ModulusClass> sorted;
  for (size_t i = 0; i < order.size(); ++i) {
    rank[static_cast<size_t>(order[i])] = static_cast<int>(i);
    sorted.push_back(ge.classes[static_cast<size_t>(order[i])]);
  }
  ge.classes = std::move(sorted);
  for (auto& t : ge.terms) t.modulus_class = rank[static_cast<size_t>(t.modulus_class)];
  std::stable_sort(ge.terms.begin(), ge.terms.end(), [](const EtaTerm& a, const EtaTerm& b) {
    if (a.modulus_class != b.modulus_class) return a.modulus_class < b.modulus_class;
    return phase_before(a.unit, b.unit);
  });
  return ge;
}

void decompose_phases(GuardExpansion& ge, ExpansionContext&, long cap) {
  for (size_t c = 0; c < ge.classes.size(); ++c) {
    ModulusClass& mc = ge.classes[c];
    std::vector<AlgebraicNumber> phases;
    for (const auto& t : ge.terms)
      if (t.modulus_class == static_cast<int>(c) && !t.arg.rational &&
          std::find(phases.begin(), phases.end(), t.unit) == phases.end())
        phases.push_back(t.unit);
    std::sort(phases.begin(), phases.end(), phase_before);

    struct Decomp {
      AlgebraicNumber zeta;
      std::vector<long> m;
    };
    std::vector<Decomp> decomps;
    for (const auto& u : phases) {
      Decomp d;
      if (mc.basis.empty()) {
        mc.basis.push_back(u);
        d.zeta = AlgebraicNumber(1);
        d.m = {1};
        decomps.push_back(d);
        continue;
      }
      std::vector<AlgebraicNumber> trial = mc.basis;
      trial.push_back(u);
      IndependenceResult res = check_independence(trial, cap);
      mc.checks.push_back(res);
      if (res.tag == IndependenceResult::Tag::ProvedIndependent) {
        mc.basis.push_back(u);
        d.zeta = AlgebraicNumber(1);
        d.m.assign(mc.basis.size(), 0);
        d.m.back() = 1;
        decomps.push_back(d);
        continue;
      }
      if (res.tag == IndependenceResult::Tag::Unresolved) {
        ge.failure = "independence of unit phases unresolved within cap " + std::to_string(cap) + " (" +
                     u.to_string() + ")";
        return;
      }
      std::vector<long> rel = res.relation;
      long cu = rel.back();
      if (cu == 0) {
        ge.failure = "basis phases turned out to be dependent";
        return;
      }
      if (cu < 0)
        for (auto& x : rel) x = -x;
      cu = rel.back();
      d.m.assign(mc.basis.size(), 0);
      for (size_t b = 0; b < mc.basis.size(); ++b) {
        if (rel[b] % cu != 0) {
          ge.failure = "phase " + u.to_string() + " is a fractional power of the chosen basis";
          return;
        }
        d.m[b] = -rel[b] / cu;
      }
      // zeta = u * prod b^-m satisfies zeta^cu = 1 by the verified relation, so an
      // enclosure of its argument fine enough to separate multiples of 1/cu fixes it.
      d.zeta = AlgebraicNumber(0);
      for (long bits = 64; bits <= 4096 && d.zeta.is_zero(); bits *= 2) {
        Interval s = turn_fraction(u, bits);
        for (size_t b = 0; b < mc.basis.size(); ++b)
          if (d.m[b] != 0) s = s - turn_fraction(mc.basis[b], bits) * Interval(Rational(d.m[b]), s.prec());
        Interval scaled = s * Interval(Rational(cu), s.prec());
        Integer lo = ceil_div(scaled.lower()), hi = floor_div(scaled.upper());
        if (lo != hi) continue;
        Integer k = lo % static_cast<unsigned long>(cu);
        if (k < 0) k += static_cast<unsigned long>(cu);
        d.zeta = root_of_unity(static_cast<unsigned long>(cu), k.get_ui());
      }
      if (d.zeta.is_zero()) throw std::runtime_error("could not isolate a root of unity factor");
      decomps.push_back(d);
    }
    for (auto& t : ge.terms) {
      if (t.modulus_class != static_cast<int>(c)) continue;
      if (t.arg.rational) {
        t.zeta = t.unit;
        t.zeta_arg = t.arg;
        t.m.assign(mc.basis.size(), 0);
        continue;
      }
      size_t idx = static_cast<size_t>(std::find(phases.begin(), phases.end(), t.unit) - phases.begin());
      t.zeta = decomps[idx].zeta;
      t.zeta_arg = classify_argument(t.zeta);
      if (!t.zeta_arg.rational) throw std::logic_error("phase decomposition left an irrational factor");
      t.m = decomps[idx].m;
      t.m.resize(mc.basis.size(), 0);
    }
  }
  ge.decomposed = true;
}

unsigned long compute_period(const GuardExpansion& ge) {
  if (!ge.decomposed) throw std::logic_error("compute_period before decompose_phases");
  unsigned long t = 1;
  for (const auto& term : ge.terms) {
    unsigned long q = term.zeta_arg.period;
    if (q % 4 == 2) q /= 2;
    t = std::lcm(t, q);
  }
  return t;
}

}  // namespace loopterm
