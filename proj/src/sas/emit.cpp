#include "loopterm/sas.hpp"

#include <sstream>
#include <stdexcept>

namespace loopterm {

namespace {

std::string numeral(const Integer& z) { return z.get_str() + ".0"; }

std::string rational_term(const Rational& q) {
  Integer num = abs(q.get_num());
  std::string s = q.get_den() == 1 ? numeral(num) : "(/ " + numeral(num) + " " + numeral(q.get_den()) + ")";
  return q < 0 ? "(- " + s + ")" : s;
}

std::string poly_term(const QPoly& p, const Layout& layout) {
  if (p.terms.empty()) return "0.0";
  std::vector<Exponents> mons;
  for (const auto& [e, c] : p.terms) mons.push_back(e);
  std::vector<std::string> parts;
  for (const auto& e : canonical_order(mons)) {
    const Rational& c = p.terms.at(e);
    std::vector<std::string> factors;
    bool constant = true;
    for (size_t v = 0; v < e.size(); ++v)
      for (int i = 0; i < e[v]; ++i) {
        factors.push_back(layout.name(static_cast<int>(v)));
        constant = false;
      }
    if (constant) {
      parts.push_back(rational_term(c));
      continue;
    }
    if (c != 1) factors.insert(factors.begin(), rational_term(c));
    if (factors.size() == 1) {
      parts.push_back(factors[0]);
    } else {
      std::string s = "(*";
      for (const auto& f : factors) s += " " + f;
      parts.push_back(s + ")");
    }
  }
  if (parts.size() == 1) return parts[0];
  std::string s = "(+";
  for (const auto& t : parts) s += " " + t;
  return s + ")";
}

std::string atom_term(const QPoly& p, Rel r, const Layout& layout) {
  std::string lhs = poly_term(p, layout);
  switch (r) {
    case Rel::Ne: return "(not (= " + lhs + " 0.0))";
    case Rel::Eq: return "(= " + lhs + " 0.0)";
    default: return std::string("(") + rel_symbol(r) + " " + lhs + " 0.0)";
  }
}

std::string formula_term(const Formula& f, const Layout& layout) {
  using K = Formula::Kind;
  switch (f.kind) {
    case K::True: return "true";
    case K::False: return "false";
    case K::Atom: return atom_term(f.poly, f.rel, layout);
    case K::Not: return "(not " + formula_term(f.args[0], layout) + ")";
    case K::And:
    case K::Or: {
      std::string s = f.kind == K::And ? "(and" : "(or";
      for (const auto& g : f.args) s += " " + formula_term(g, layout);
      return s + ")";
    }
    case K::Forall:
    case K::Exists: break;
  }
  std::string binders, guards;
  int nguards = 0;
  for (int t : f.torus) {
    std::string c = layout.name(layout.cos_var(t)), s = layout.name(layout.sin_var(t));
    binders += (binders.empty() ? "(" : " (") + c + " Real) (" + s + " Real)";
    guards += " (= (+ (* " + c + " " + c + ") (* " + s + " " + s + ")) 1.0)";
    ++nguards;
  }
  if (f.parity) {
    binders += binders.empty() ? "(z Real)" : " (z Real)";
    guards += " (= (* z z) 1.0)";
    ++nguards;
  }
  std::string body = formula_term(f.args[0], layout);
  if (f.kind == K::Forall) {
    std::string pre = nguards == 1 ? guards.substr(1) : "(and" + guards + ")";
    return "(forall (" + binders + ") (=> " + pre + " " + body + "))";
  }
  return "(exists (" + binders + ") (and" + guards + " " + body + "))";
}

}  // namespace

std::string emit_query(const TorusFormula& f) {
  const Layout& L = f.layout;
  std::ostringstream os;
  os << "; layout " << L.nx << " " << L.ntorus << " " << L.constants.size() << " " << L.amplitudes.size() << "\n";
  os << "(set-logic " << (has_quantifier(f.formula) ? "NRA" : "QF_NRA") << ")\n";
  for (int i = 0; i < L.nx; ++i) os << "(declare-const " << L.name(i) << " Real)\n";
  for (size_t k = 0; k < L.constants.size(); ++k) {
    int v = L.constant_var(static_cast<int>(k));
    const AlgebraicNumber& a = L.constants[k];
    QPoly m(L.size());
    for (int d = 0; d <= a.minpoly().degree(); ++d) {
      if (a.minpoly().coeff(d) == 0) continue;
      Exponents e(static_cast<size_t>(L.size()), 0);
      e[static_cast<size_t>(v)] = d;
      m.terms[e] = a.minpoly().coeff(d);
    }
    os << "(declare-const " << L.name(v) << " Real)\n";
    os << "(assert (= " << poly_term(m, L) << " 0.0))\n";
    os << "(assert (<= " << rational_term(a.box().re_lo) << " " << L.name(v) << "))\n";
    os << "(assert (<= " << L.name(v) << " " << rational_term(a.box().re_hi) << "))\n";
  }
  for (size_t k = 0; k < L.amplitudes.size(); ++k) {
    std::string r = L.name(L.amplitude_var(static_cast<int>(k)));
    os << "(declare-const " << r << " Real)\n";
    os << "(assert (>= " << r << " 0.0))\n";
    os << "(assert (= (* " << r << " " << r << ") " << poly_term(L.amplitudes[k], L) << "))\n";
  }
  os << "(assert " << formula_term(f.formula, L) << ")\n";
  os << "(check-sat)\n(get-model)\n";
  return os.str();
}

namespace {

struct Reader {
  Layout layout;
  std::map<std::string, int> vars;

  Rational number(const SExpr& e) const {
    if (!e.is_list) {
      std::string s = e.atom;
      size_t dot = s.find('.');
      if (dot == std::string::npos) return Rational(s);
      std::string frac = s.substr(dot + 1);
      Rational q(s.substr(0, dot) + frac);
      Integer den = 1;
      for (size_t i = 0; i < frac.size(); ++i) den *= 10;
      q /= den;
      q.canonicalize();
      return q;
    }
    if (e.list.size() == 2 && e.list[0].atom == "-") return -number(e.list[1]);
    if (e.list.size() == 3 && e.list[0].atom == "/") return number(e.list[1]) / number(e.list[2]);
    throw std::runtime_error("not a numeral: " + e.to_string());
  }

  QPoly poly(const SExpr& e) const {
    int n = layout.size();
    if (!e.is_list) {
      auto it = vars.find(e.atom);
      if (it != vars.end()) return qpoly_var(n, it->second);
      return qpoly_constant(n, number(e));
    }
    const std::string& op = e.list.at(0).atom;
    if (op == "/" ) return qpoly_constant(n, number(e));
    if (op == "-" && e.list.size() == 2) return -poly(e.list[1]);
    if (op == "+" || op == "*" || op == "-") {
      QPoly acc = poly(e.list.at(1));
      for (size_t i = 2; i < e.list.size(); ++i) {
        QPoly b = poly(e.list[i]);
        acc = op == "+" ? acc + b : op == "-" ? acc - b : acc * b;
      }
      return acc;
    }
    throw std::runtime_error("unexpected term: " + e.to_string());
  }

  Formula formula(const SExpr& e) const {
    if (!e.is_list) {
      if (e.atom == "true") return Formula::truth(true);
      if (e.atom == "false") return Formula::truth(false);
      throw std::runtime_error("unexpected atom: " + e.atom);
    }
    const std::string& op = e.list.at(0).atom;
    if (op == "and" || op == "or") {
      std::vector<Formula> xs;
      for (size_t i = 1; i < e.list.size(); ++i) xs.push_back(formula(e.list[i]));
      Formula f;
      f.kind = op == "and" ? Formula::Kind::And : Formula::Kind::Or;
      f.args = std::move(xs);
      return f;
    }
    if (op == "not") {
      const SExpr& g = e.list.at(1);
      if (g.is_list && g.list.at(0).atom == "=") return Formula::atom(poly(g.list.at(1)), Rel::Ne);
      return Formula::negation(formula(g));
    }
    static const std::map<std::string, Rel> rels = {
        {">", Rel::Gt}, {">=", Rel::Ge}, {"<", Rel::Lt}, {"<=", Rel::Le}, {"=", Rel::Eq}};
    if (auto it = rels.find(op); it != rels.end()) {
      Formula f;
      f.kind = Formula::Kind::Atom;
      f.poly = poly(e.list.at(1));
      f.rel = it->second;
      return f;
    }
    if (op == "forall" || op == "exists") {
      Formula f;
      f.kind = op == "forall" ? Formula::Kind::Forall : Formula::Kind::Exists;
      for (const auto& b : e.list.at(1).list) {
        const std::string& name = b.list.at(0).atom;
        if (name == "z") {
          f.parity = true;
        } else {
          int v = vars.at(name);
          if (layout.is_torus_var(v) && (v - layout.nx) % 2 == 0) f.torus.push_back(layout.torus_of(v));
        }
      }
      const SExpr& inner = e.list.at(2);
      f.args.push_back(formula(inner.list.back()));
      return f;
    }
    throw std::runtime_error("unexpected formula: " + e.to_string());
  }
};

}  // namespace

TorusFormula parse_query(const std::string& text) {
  Reader rd;
  {
    std::istringstream is(text);
    std::string line;
    bool found = false;
    while (std::getline(is, line))
      if (line.rfind("; layout ", 0) == 0) {
        std::istringstream ls(line.substr(9));
        size_t nc = 0, na = 0;
        ls >> rd.layout.nx >> rd.layout.ntorus >> nc >> na;
        rd.layout.constants.assign(nc, AlgebraicNumber(0));
        rd.layout.amplitudes.assign(na, QPoly());
        found = true;
        break;
      }
    if (!found) throw std::runtime_error("missing layout header");
  }
  for (int v = 0; v < rd.layout.size(); ++v) rd.vars[rd.layout.name(v)] = v;

  std::vector<SExpr> cmds = parse_sexprs(text);
  std::vector<Poly> minpolys(rd.layout.constants.size());
  std::vector<Rational> lo(rd.layout.constants.size()), hi(rd.layout.constants.size());
  std::vector<SExpr> asserts;
  for (const auto& c : cmds)
    if (c.is_list && !c.list.empty() && c.list[0].atom == "assert") asserts.push_back(c.list.at(1));
  size_t idx = 0;
  for (size_t k = 0; k < rd.layout.constants.size(); ++k, idx += 3) {
    int v = rd.layout.constant_var(static_cast<int>(k));
    QPoly m = rd.poly(asserts.at(idx).list.at(1));
    std::vector<Rational> coeffs;
    for (const auto& [e, c] : m.terms) {
      size_t d = static_cast<size_t>(e[static_cast<size_t>(v)]);
      if (coeffs.size() <= d) coeffs.resize(d + 1);
      coeffs[d] = c;
    }
    lo[k] = rd.number(asserts.at(idx + 1).list.at(1));
    hi[k] = rd.number(asserts.at(idx + 2).list.at(2));
    rd.layout.constants[k] = AlgebraicNumber(Poly(coeffs), Box{lo[k], hi[k], Rational(0), Rational(0)});
  }
  for (size_t k = 0; k < rd.layout.amplitudes.size(); ++k, idx += 2)
    rd.layout.amplitudes[k] = rd.poly(asserts.at(idx + 1).list.at(2));
  TorusFormula out;
  out.formula = rd.formula(asserts.at(idx));
  out.layout = rd.layout;
  return out;
}

}  // namespace loopterm
