#include "loopterm/guard.hpp"

#include <algorithm>
#include <stdexcept>

namespace loopterm {

int TorusRegistry::find_or_add(const AlgebraicNumber& base, long multiplier) {
  for (size_t t = 0; t < angles_.size(); ++t)
    if (angles_[t].multiplier == multiplier && angles_[t].base == base) return static_cast<int>(t);
  angles_.push_back({base, multiplier});
  return static_cast<int>(angles_.size()) - 1;
}

std::vector<int> TrigPolynomial::torus_ids() const {
  std::vector<int> ids;
  for (const auto& [k, p] : parts)
    for (const auto& [t, m] : k.freq) ids.push_back(t);
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

bool TrigPolynomial::has_parity() const {
  for (const auto& [k, p] : parts)
    if (k.parity) return true;
  return false;
}

namespace {

Rational binom(int n, int k) {
  Rational r = 1;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

void add_into(std::map<Exponents, RootExpr>& into, const Exponents& e, const RootExpr& v, const ExprRing& ring) {
  auto it = into.find(e);
  if (it == into.end()) {
    if (!v.is_zero()) into.emplace(e, v);
    return;
  }
  it->second = ring.add(it->second, v);
  if (it->second.is_zero()) into.erase(it);
}

APoly to_real(const std::map<Exponents, RootExpr>& m, int nvars, const ExprRing& ring) {
  APoly p(nvars);
  for (const auto& [e, v] : m) {
    AlgebraicNumber a = ring.to_algebraic(v);
    if (!a.is_real()) throw std::logic_error("guard coefficient is not real: " + a.to_string());
    if (!a.is_zero()) p.terms.emplace(e, a);
  }
  return p;
}

}  // namespace

SpecializedGuard specialize(const GuardExpansion& ge, const ExpansionContext& ctx, unsigned long period,
                            unsigned long residue) {
  if (!ge.decomposed) throw std::logic_error("specialize before decompose_phases");
  if (residue < 1 || residue > period) throw std::invalid_argument("residue out of range");
  const ExprRing& ring = ctx.ring();
  SpecializedGuard sg;
  sg.guard = ge.guard;
  sg.residue = static_cast<int>(residue);
  sg.period = static_cast<int>(period);
  sg.nvars = ge.nvars;
  auto tq = static_cast<long>(period);
  auto off = static_cast<long>(residue) - 1;
  for (const auto& t : ge.terms) {
    SpecializedGuard::Key key;
    key.k = t.modulus_class;
    unsigned long q = t.zeta_arg.period, p = t.zeta_arg.residue;
    bool plus = (p * period) % q == 0;
    bool minus = !plus && (2 * p * period) % q == 0;
    if (!plus && !minus) throw std::logic_error("period does not flatten a root-of-unity factor");
    key.parity = minus;
    key.m = t.m;
    bool oscillating = key.parity || std::any_of(t.m.begin(), t.m.end(), [](long x) { return x != 0; });
    bool phase_free = t.arg.rational && t.arg.period == 1;
    key.kind = phase_free ? 0 : (oscillating ? 2 : 1);
    RootExpr shift = ring.pow(t.eta_expr, static_cast<unsigned long>(off));
    for (const auto& [lt, c] : t.coeff) {
      auto [lp, e] = lt;
      RootExpr base = ring.mul(c, shift);
      // (T n + off)^lp
      for (int l = 0; l <= lp; ++l) {
        Rational w = binom(lp, l);
        for (int i = 0; i < l; ++i) w *= tq;
        for (int i = 0; i < lp - l; ++i) w *= off;
        if (w == 0) continue;
        key.l = l;
        add_into(sg.coeff[key], e, ring.scale(base, w), ring);
      }
    }
  }
  for (auto it = sg.coeff.begin(); it != sg.coeff.end();) {
    if (it->second.empty()) it = sg.coeff.erase(it);
    else ++it;
  }
  return sg;
}

GuardTermTable collect(const SpecializedGuard& sg, const GuardExpansion& ge, ExpansionContext& ctx,
                       TorusRegistry& torus) {
  const ExprRing& ring = ctx.ring();
  GuardTermTable table;
  table.guard = sg.guard;
  table.residue = sg.residue;
  table.period = sg.period;
  table.nvars = sg.nvars;
  for (const auto& c : ge.classes) table.moduli.push_back(c.modulus);

  // Oscillating parts: canonical frequency -> (coefficient of e^{+inf}, of e^{-inf}).
  std::map<TermIndex, std::map<FreqKey, std::pair<std::map<Exponents, RootExpr>, std::map<Exponents, RootExpr>>>>
      osc;
  for (const auto& [key, m] : sg.coeff) {
    TermIndex ti{key.k, key.l};
    if (key.kind == 0 || key.kind == 1) {
      Coefficient& co = table.terms[ti];
      APoly p = to_real(m, sg.nvars, ring);
      APoly& target = key.kind == 0 ? co.c0 : co.c1;
      target = p;
      target.nvars = sg.nvars;
      continue;
    }
    FreqKey fk;
    fk.parity = key.parity;
    const ModulusClass& mc = ge.classes[static_cast<size_t>(key.k)];
    for (size_t b = 0; b < key.m.size(); ++b)
      if (key.m[b] != 0) fk.freq.emplace_back(torus.find_or_add(mc.basis[b], sg.period), key.m[b]);
    std::sort(fk.freq.begin(), fk.freq.end());
    bool negative = !fk.freq.empty() && fk.freq.front().second < 0;
    if (negative)
      for (auto& f : fk.freq) f.second = -f.second;
    auto& slot = osc[ti][fk];
    auto& side = negative ? slot.second : slot.first;
    for (const auto& [e, v] : m) add_into(side, e, v, ring);
  }
  for (const auto& [ti, parts] : osc) {
    Coefficient& co = table.terms[ti];
    for (const auto& [fk, pm] : parts) {
      std::map<Exponents, RootExpr> cs = pm.first, sn;
      for (const auto& [e, v] : pm.second) add_into(cs, e, v, ring);
      if (!fk.freq.empty()) {
        for (const auto& [e, v] : pm.first) add_into(sn, e, ring.mul(ctx.imaginary(), v), ring);
        for (const auto& [e, v] : pm.second) add_into(sn, e, ring.neg(ring.mul(ctx.imaginary(), v)), ring);
      }
      TrigPart tp{to_real(cs, sg.nvars, ring), to_real(sn, sg.nvars, ring)};
      if (!tp.cos.is_zero() || !tp.sin.is_zero()) co.c2.parts[fk] = tp;
    }
  }
  for (auto& [ti, co] : table.terms) {
    co.c0.nvars = co.c1.nvars = sg.nvars;
  }
  for (auto it = table.terms.begin(); it != table.terms.end();) {
    if (it->second.is_zero()) it = table.terms.erase(it);
    else ++it;
  }
  return table;
}

int term_compare(const TermIndex& a, const TermIndex& b) {
  if (a.k != b.k) return a.k < b.k ? -1 : 1;
  if (a.l != b.l) return a.l < b.l ? -1 : 1;
  return 0;
}

std::vector<TermIndex> leading_candidates(const GuardTermTable& table) {
  std::vector<TermIndex> out;
  for (const auto& [ti, c] : table.terms)
    if (!c.is_zero()) out.push_back(ti);
  std::sort(out.begin(), out.end(), [](const TermIndex& a, const TermIndex& b) { return term_compare(a, b) > 0; });
  return out;
}

std::vector<APoly> c2_zero_conditions(const TrigPolynomial& c2) {
  std::vector<APoly> out;
  for (const auto& [k, p] : c2.parts) {
    if (!p.cos.is_zero()) out.push_back(p.cos);
    if (!p.sin.is_zero()) out.push_back(p.sin);
  }
  return out;
}

std::unique_ptr<GuardAnalysis> analyze_guards(const LoopSpec& spec, ExpansionContext& ctx, long indep_cap) {
  auto ga = std::make_unique<GuardAnalysis>();
  for (size_t s = 0; s < spec.guards.size(); ++s) {
    GuardExpansion ge = substitute_guard(spec.guards[s], static_cast<int>(s), ctx);
    decompose_phases(ge, ctx, indep_cap);
    if (!ge.failure.empty()) {
      ga->failure = "guard " + std::to_string(s + 1) + ": " + ge.failure;
      ga->expansions.push_back(std::move(ge));
      return ga;
    }
    unsigned long t = compute_period(ge);
    ga->periods.push_back(t);
    for (unsigned long i = 1; i <= t; ++i)
      ga->tables.push_back(collect(specialize(ge, ctx, t, i), ge, ctx, ga->torus));
    ga->expansions.push_back(std::move(ge));
  }
  return ga;
}

std::string to_string(const APoly& p, const std::vector<std::string>& names) {
  if (p.terms.empty()) return "0";
  std::vector<Exponents> keys;
  for (const auto& [e, c] : p.terms) keys.push_back(e);
  std::string s;
  for (const auto& e : canonical_order(keys)) {
    const AlgebraicNumber& c = p.terms.at(e);
    std::string mono = monomial_string(e, names);
    if (c.is_rational()) {
      Rational q = c.rational_value();
      Rational mag = abs(q);
      if (s.empty()) s += q < 0 ? "-" : "";
      else s += q < 0 ? " - " : " + ";
      if (mono.empty()) s += mag.get_str();
      else if (mag == 1) s += mono;
      else s += mag.get_str() + "*" + mono;
    } else {
      if (!s.empty()) s += " + ";
      s += "[" + c.to_string() + "]";
      if (!mono.empty()) s += "*" + mono;
    }
  }
  return s;
}

namespace {

std::string freq_string(const FreqKey& k) {
  std::string s = "n*(";
  bool first = true;
  for (const auto& [t, m] : k.freq) {
    if (!first) s += " + ";
    first = false;
    if (m != 1) s += std::to_string(m) + "*";
    s += "a" + std::to_string(t + 1);
  }
  return s + ")";
}

}  // namespace

std::string to_string(const TrigPolynomial& t, const std::vector<std::string>& names) {
  std::string s;
  for (const auto& [k, p] : t.parts) {
    std::string z = k.parity ? "(-1)^n*" : "";
    if (!p.cos.is_zero()) {
      if (!s.empty()) s += " + ";
      s += z + "(" + to_string(p.cos, names) + ")";
      if (!k.freq.empty()) s += "*cos(" + freq_string(k) + ")";
    }
    if (!p.sin.is_zero()) {
      if (!s.empty()) s += " + ";
      s += z + "(" + to_string(p.sin, names) + ")*sin(" + freq_string(k) + ")";
    }
  }
  return s.empty() ? "0" : s;
}

std::string to_string(const GuardTermTable& table, const std::vector<std::string>& names) {
  std::string s = "guard " + std::to_string(table.guard + 1) + " residue " + std::to_string(table.residue) + "/" +
                  std::to_string(table.period) + "\n";
  for (auto it = table.terms.rbegin(); it != table.terms.rend(); ++it) {
    const auto& [ti, c] = *it;
    s += "  term r" + std::to_string(ti.k + 1) + " = " + display(table.moduli[static_cast<size_t>(ti.k)]) +
         ", n^" + std::to_string(ti.l) + "\n";
    s += "    C0 = " + to_string(c.c0, names) + "\n";
    s += "    C1 = " + to_string(c.c1, names) + "\n";
    s += "    C2 = " + to_string(c.c2, names) + "\n";
  }
  return s;
}

Interval eval_enclosure(const APoly& p, const RationalVector& x, long prec) {
  Interval acc(Rational(0), prec);
  for (const auto& [e, c] : p.terms) {
    Rational mono = 1;
    for (size_t i = 0; i < e.size(); ++i)
      for (int k = 0; k < e[i]; ++k) mono *= x[i];
    if (mono == 0) continue;
    acc += c.enclosure(prec).re * Interval(mono, prec);
  }
  return acc;
}

Interval eval_coefficient(const Coefficient& c, const TorusRegistry& torus, const RationalVector& x, long n,
                          long prec) {
  Interval acc = eval_enclosure(c.c0, x, prec) + eval_enclosure(c.c1, x, prec);
  for (const auto& [k, p] : c.c2.parts) {
    CInterval w(Interval(Rational(1), prec), Interval(Rational(0), prec));
    for (const auto& [t, m] : k.freq) {
      const TorusAngle& a = torus.angles()[static_cast<size_t>(t)];
      CInterval b = a.base.enclosure(prec);
      long e = a.multiplier * m * n;
      CInterval be = b.pow(static_cast<unsigned>(e < 0 ? -e : e));
      w = w * (e < 0 ? be.conj() : be);
    }
    Interval term = eval_enclosure(p.cos, x, prec) * w.re + eval_enclosure(p.sin, x, prec) * w.im;
    if (k.parity && n % 2 != 0) term = -term;
    acc += term;
  }
  return acc;
}

Interval eval_table(const GuardTermTable& table, const TorusRegistry& torus, const RationalVector& x, long n,
                    long prec) {
  Interval acc(Rational(0), prec);
  for (const auto& [ti, c] : table.terms) {
    Interval r = table.moduli[static_cast<size_t>(ti.k)].enclosure(prec).re;
    Interval rn = r.pow(static_cast<unsigned>(table.period * n));
    Interval nl = Interval(Rational(Integer(n)), prec).pow(static_cast<unsigned>(ti.l));
    acc += nl * rn * eval_coefficient(c, torus, x, n, prec);
  }
  return acc;
}

}  // namespace loopterm
