#include "loopterm/sas.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace loopterm {

Rel negate(Rel r) {
  switch (r) {
    case Rel::Gt: return Rel::Le;
    case Rel::Ge: return Rel::Lt;
    case Rel::Lt: return Rel::Ge;
    case Rel::Le: return Rel::Gt;
    case Rel::Eq: return Rel::Ne;
    case Rel::Ne: return Rel::Eq;
  }
  return r;
}

const char* rel_symbol(Rel r) {
  switch (r) {
    case Rel::Gt: return ">";
    case Rel::Ge: return ">=";
    case Rel::Lt: return "<";
    case Rel::Le: return "<=";
    case Rel::Eq: return "=";
    case Rel::Ne: return "!=";
  }
  return "?";
}

std::string Layout::name(int v) const {
  if (v < nx) return "x" + std::to_string(v + 1);
  if (v < parity_var()) return "y" + std::to_string(torus_of(v) + 1) + "_" + std::to_string((v - nx) % 2 + 1);
  if (v == parity_var()) return "z";
  int k = v - constant_var(0);
  if (k < static_cast<int>(constants.size())) return "k" + std::to_string(k + 1);
  return "r" + std::to_string(v - amplitude_var(0) + 1);
}

int Layout::constant_index(const AlgebraicNumber& c) {
  for (size_t k = 0; k < constants.size(); ++k)
    if (constants[k] == c) return static_cast<int>(k);
  if (!amplitudes.empty()) throw std::logic_error("constants must be registered before amplitudes");
  if (!c.is_real() || c.is_rational()) throw std::invalid_argument("pinned constants are real irrational numbers");
  constants.push_back(c);
  return static_cast<int>(constants.size()) - 1;
}

QPoly lift(const QPoly& p, int nvars) { return p.nvars >= nvars ? p : extend_vars(p, nvars); }

QPoly padd(const QPoly& a, const QPoly& b) {
  int n = std::max(a.nvars, b.nvars);
  return lift(a, n) + lift(b, n);
}

QPoly pmul(const QPoly& a, const QPoly& b) {
  int n = std::max(a.nvars, b.nvars);
  return lift(a, n) * lift(b, n);
}

bool uses_var(const QPoly& p, int v) {
  if (v >= p.nvars) return false;
  for (const auto& [e, c] : p.terms)
    if (e[static_cast<size_t>(v)] != 0) return true;
  return false;
}

std::vector<int> torus_ids(const QPoly& p, const Layout& layout) {
  std::set<int> ids;
  for (const auto& [e, c] : p.terms)
    for (int v = layout.nx; v < std::min(layout.parity_var(), p.nvars); ++v)
      if (e[static_cast<size_t>(v)] != 0) ids.insert(layout.torus_of(v));
  return {ids.begin(), ids.end()};
}

bool uses_parity(const QPoly& p, const Layout& layout) { return uses_var(p, layout.parity_var()); }

QPoly substitute_value(const QPoly& p, int v, const Rational& value) {
  if (!uses_var(p, v)) return p;
  QPoly r(p.nvars);
  for (const auto& [e, c] : p.terms) {
    Exponents f = e;
    int d = f[static_cast<size_t>(v)];
    f[static_cast<size_t>(v)] = 0;
    Rational w = c;
    for (int i = 0; i < d; ++i) w *= value;
    auto& slot = r.terms[f];
    slot += w;
    if (slot == 0) r.terms.erase(f);
  }
  return r;
}

Formula Formula::truth(bool value) {
  Formula f;
  f.kind = value ? Kind::True : Kind::False;
  return f;
}

Formula Formula::atom(QPoly p, Rel r) {
  if (p.terms.empty() || (p.terms.size() == 1 && std::all_of(p.terms.begin()->first.begin(),
                                                              p.terms.begin()->first.end(),
                                                              [](int x) { return x == 0; }))) {
    Rational c = p.terms.empty() ? Rational(0) : p.terms.begin()->second;
    bool v = false;
    switch (r) {
      case Rel::Gt: v = c > 0; break;
      case Rel::Ge: v = c >= 0; break;
      case Rel::Lt: v = c < 0; break;
      case Rel::Le: v = c <= 0; break;
      case Rel::Eq: v = c == 0; break;
      case Rel::Ne: v = c != 0; break;
    }
    return truth(v);
  }
  Formula f;
  f.kind = Kind::Atom;
  f.poly = std::move(p);
  f.rel = r;
  return f;
}

namespace {

Formula junction(Formula::Kind kind, std::vector<Formula> fs) {
  Formula::Kind unit = kind == Formula::Kind::And ? Formula::Kind::True : Formula::Kind::False;
  Formula::Kind absorbing = kind == Formula::Kind::And ? Formula::Kind::False : Formula::Kind::True;
  Formula out;
  out.kind = kind;
  for (auto& f : fs) {
    if (f.kind == unit) continue;
    if (f.kind == absorbing) return f;
    if (f.kind == kind)
      for (auto& g : f.args) out.args.push_back(std::move(g));
    else
      out.args.push_back(std::move(f));
  }
  if (out.args.empty()) return Formula::truth(kind == Formula::Kind::And);
  if (out.args.size() == 1) return std::move(out.args[0]);
  return out;
}

}  // namespace

Formula Formula::conj(std::vector<Formula> fs) { return junction(Kind::And, std::move(fs)); }
Formula Formula::disj(std::vector<Formula> fs) { return junction(Kind::Or, std::move(fs)); }

Formula Formula::negation(Formula f) {
  if (f.kind == Kind::True) return truth(false);
  if (f.kind == Kind::False) return truth(true);
  if (f.kind == Kind::Not) return std::move(f.args[0]);
  Formula out;
  out.kind = Kind::Not;
  out.args.push_back(std::move(f));
  return out;
}

namespace {

Formula quantifier(Formula::Kind kind, std::vector<int> torus, bool parity, Formula body) {
  if (body.kind == Formula::Kind::True || body.kind == Formula::Kind::False) return body;
  std::sort(torus.begin(), torus.end());
  torus.erase(std::unique(torus.begin(), torus.end()), torus.end());
  if (torus.empty() && !parity) return body;
  Formula out;
  out.kind = kind;
  out.torus = std::move(torus);
  out.parity = parity;
  out.args.push_back(std::move(body));
  return out;
}

}  // namespace

Formula Formula::forall(std::vector<int> torus, bool parity, Formula body) {
  return quantifier(Kind::Forall, std::move(torus), parity, std::move(body));
}

Formula Formula::exists(std::vector<int> torus, bool parity, Formula body) {
  return quantifier(Kind::Exists, std::move(torus), parity, std::move(body));
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.kind != b.kind || a.torus != b.torus || a.parity != b.parity || a.args.size() != b.args.size())
    return false;
  if (a.kind == Formula::Kind::Atom) {
    int n = std::max(a.poly.nvars, b.poly.nvars);
    if (a.rel != b.rel || lift(a.poly, n).terms != lift(b.poly, n).terms) return false;
  }
  for (size_t i = 0; i < a.args.size(); ++i)
    if (!(a.args[i] == b.args[i])) return false;
  return true;
}

int count_atoms(const Formula& f) {
  if (f.kind == Formula::Kind::Atom) return 1;
  int n = 0;
  for (const auto& g : f.args) n += count_atoms(g);
  return n;
}

bool has_quantifier(const Formula& f) {
  if (f.is_quantifier()) return true;
  return std::any_of(f.args.begin(), f.args.end(), [](const Formula& g) { return has_quantifier(g); });
}

Formula to_nnf(const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind) {
    case K::True:
    case K::False:
    case K::Atom: return f;
    case K::And:
    case K::Or: {
      std::vector<Formula> xs;
      for (const auto& g : f.args) xs.push_back(to_nnf(g));
      return f.kind == K::And ? Formula::conj(std::move(xs)) : Formula::disj(std::move(xs));
    }
    case K::Forall: return Formula::forall(f.torus, f.parity, to_nnf(f.args[0]));
    case K::Exists: return Formula::exists(f.torus, f.parity, to_nnf(f.args[0]));
    case K::Not: break;
  }
  const Formula& g = f.args[0];
  switch (g.kind) {
    case K::True: return Formula::truth(false);
    case K::False: return Formula::truth(true);
    case K::Atom: return Formula::atom(g.poly, negate(g.rel));
    case K::Not: return to_nnf(g.args[0]);
    case K::And:
    case K::Or: {
      std::vector<Formula> xs;
      for (const auto& h : g.args) xs.push_back(to_nnf(Formula::negation(h)));
      return g.kind == K::And ? Formula::disj(std::move(xs)) : Formula::conj(std::move(xs));
    }
    case K::Forall: return Formula::exists(g.torus, g.parity, to_nnf(Formula::negation(g.args[0])));
    case K::Exists: return Formula::forall(g.torus, g.parity, to_nnf(Formula::negation(g.args[0])));
  }
  return f;
}

Layout make_layout(const std::vector<GuardTermTable>& tables, const TorusRegistry& torus, int nx) {
  Layout layout;
  layout.nx = nx;
  layout.ntorus = static_cast<int>(torus.angles().size());
  auto scan = [&](const APoly& p) {
    for (const auto& [e, c] : p.terms)
      if (!c.is_rational()) layout.constant_index(c);
  };
  for (const auto& t : tables)
    for (const auto& [idx, c] : t.terms) {
      scan(c.c0);
      scan(c.c1);
      for (const auto& [key, part] : c.c2.parts) {
        scan(part.cos);
        scan(part.sin);
      }
    }
  return layout;
}

QPoly to_qpoly(const APoly& p, Layout& layout) {
  std::vector<std::pair<Exponents, std::pair<Rational, int>>> items;
  for (const auto& [e, c] : p.terms) {
    if (c.is_rational()) items.push_back({e, {c.rational_value(), -1}});
    else items.push_back({e, {Rational(1), layout.constant_index(c)}});
  }
  int n = layout.size();
  QPoly q(n);
  for (const auto& [e, cv] : items) {
    Exponents f = e;
    f.resize(static_cast<size_t>(n), 0);
    if (cv.second >= 0) f[static_cast<size_t>(layout.constant_var(cv.second))] += 1;
    auto& slot = q.terms[f];
    slot += cv.first;
    if (slot == 0) q.terms.erase(f);
  }
  return q;
}

QPoly trig_qpoly(const TrigPolynomial& t, Layout& layout) {
  QPoly out(layout.size());
  for (const auto& [key, part] : t.parts) {
    QPoly cpart = to_qpoly(part.cos, layout), spart = to_qpoly(part.sin, layout);
    int n = layout.size();
    // cos f + i sin f = prod over angles (y1 + i y2)^m
    QPoly re = qpoly_constant(n, 1), im(n);
    for (const auto& [id, mult] : key.freq) {
      QPoly c = qpoly_var(n, layout.cos_var(id)), s = qpoly_var(n, layout.sin_var(id));
      if (mult < 0) s = -s;
      for (long i = 0; i < (mult < 0 ? -mult : mult); ++i) {
        QPoly nre = pmul(re, c) - pmul(im, s);
        QPoly nim = pmul(re, s) + pmul(im, c);
        re = std::move(nre);
        im = std::move(nim);
      }
    }
    QPoly term = padd(pmul(cpart, re), pmul(spart, im));
    if (key.parity) term = pmul(term, qpoly_var(n, layout.parity_var()));
    out = padd(out, term);
  }
  return out;
}

QPoly coefficient_qpoly(const Coefficient& c, Layout& layout) {
  QPoly p = padd(to_qpoly(c.c0, layout), to_qpoly(c.c1, layout));
  return padd(p, trig_qpoly(c.c2, layout));
}

Formula positivity(const Coefficient& c, bool strict, Layout& layout) {
  QPoly p = coefficient_qpoly(c, layout);
  std::vector<int> ids = torus_ids(p, layout);
  bool par = uses_parity(p, layout);
  return Formula::forall(ids, par, Formula::atom(std::move(p), strict ? Rel::Gt : Rel::Ge));
}

Formula build_system(const std::vector<TermIndex>& guess, const std::vector<GuardTermTable>& tables,
                     Layout& layout) {
  if (guess.size() != tables.size()) throw std::invalid_argument("build_system: one guessed term per table");
  std::vector<Formula> free_part, bodies;
  std::vector<int> ids;
  bool par = false;
  auto add = [&](Formula f) {
    if (f.kind == Formula::Kind::Forall) {
      ids.insert(ids.end(), f.torus.begin(), f.torus.end());
      par = par || f.parity;
      bodies.push_back(std::move(f.args[0]));
    } else {
      free_part.push_back(std::move(f));
    }
  };
  for (size_t j = 0; j < tables.size(); ++j) {
    auto it = tables[j].terms.find(guess[j]);
    if (it == tables[j].terms.end()) throw std::invalid_argument("build_system: guessed term not in table");
    add(positivity(it->second, true, layout));
    for (const auto& [idx, c] : tables[j].terms)
      if (term_compare(idx, guess[j]) > 0) add(positivity(c, false, layout));
  }
  if (!bodies.empty()) free_part.push_back(Formula::forall(ids, par, Formula::conj(std::move(bodies))));
  return Formula::conj(std::move(free_part));
}

Formula assumption_violation(const Coefficient& c, Layout& layout) {
  if (c.c2.is_zero()) return Formula::truth(false);
  std::vector<Formula> nonzero;
  for (const auto& cond : c2_zero_conditions(c.c2)) nonzero.push_back(Formula::atom(to_qpoly(cond, layout), Rel::Ne));
  QPoly p = coefficient_qpoly(c, layout);
  std::vector<int> ids = torus_ids(p, layout);
  bool par = uses_parity(p, layout);
  std::vector<Formula> parts;
  parts.push_back(Formula::disj(std::move(nonzero)));
  parts.push_back(Formula::forall(ids, par, Formula::atom(p, Rel::Ge)));
  parts.push_back(Formula::exists(ids, par, Formula::atom(p, Rel::Le)));
  return Formula::conj(std::move(parts));
}

std::string to_string(const Formula& f, const Layout& layout) {
  std::vector<std::string> names;
  for (int v = 0; v < layout.size(); ++v) names.push_back(layout.name(v));
  auto binder = [&](const Formula& g) {
    std::string s;
    for (int t : g.torus) {
      if (!s.empty()) s += ",";
      s += layout.name(layout.cos_var(t)) + "," + layout.name(layout.sin_var(t));
    }
    if (g.parity) s += s.empty() ? "z" : ",z";
    return s;
  };
  using K = Formula::Kind;
  switch (f.kind) {
    case K::True: return "true";
    case K::False: return "false";
    case K::Atom: return to_string(lift(f.poly, layout.size()), names) + " " + rel_symbol(f.rel) + " 0";
    case K::Not: return "not (" + to_string(f.args[0], layout) + ")";
    case K::And:
    case K::Or: {
      std::string s;
      for (const auto& g : f.args) {
        if (!s.empty()) s += f.kind == K::And ? " and " : " or ";
        s += "(" + to_string(g, layout) + ")";
      }
      return s;
    }
    case K::Forall: return "forall " + binder(f) + ". " + to_string(f.args[0], layout);
    case K::Exists: return "exists " + binder(f) + ". " + to_string(f.args[0], layout);
  }
  return "";
}

}  // namespace loopterm
