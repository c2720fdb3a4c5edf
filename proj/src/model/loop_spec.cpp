#include "loopterm/loop_spec.hpp"

#include <algorithm>

namespace loopterm {

QPoly qpoly_constant(int nvars, const Rational& c) {
  QPoly p(nvars);
  Rational q = c;
  q.canonicalize();
  if (q != 0) p.terms[Exponents(static_cast<size_t>(nvars), 0)] = q;
  return p;
}

QPoly qpoly_var(int nvars, int index) {
  QPoly p(nvars);
  Exponents e(static_cast<size_t>(nvars), 0);
  e[static_cast<size_t>(index)] = 1;
  p.terms[e] = 1;
  return p;
}

QPoly operator+(const QPoly& a, const QPoly& b) {
  QPoly r = a;
  r.nvars = std::max(a.nvars, b.nvars);
  for (const auto& [e, c] : b.terms) {
    auto& slot = r.terms[e];
    slot += c;
    if (slot == 0) r.terms.erase(e);
  }
  return r;
}

QPoly operator-(const QPoly& a) {
  QPoly r = a;
  for (auto& [e, c] : r.terms) c = -c;
  return r;
}

QPoly operator-(const QPoly& a, const QPoly& b) { return a + (-b); }

QPoly operator*(const QPoly& a, const QPoly& b) {
  QPoly r(std::max(a.nvars, b.nvars));
  for (const auto& [ea, ca] : a.terms)
    for (const auto& [eb, cb] : b.terms) {
      Exponents e = ea;
      for (size_t i = 0; i < e.size(); ++i) e[i] += eb[i];
      auto& slot = r.terms[e];
      slot += ca * cb;
      if (slot == 0) r.terms.erase(e);
    }
  return r;
}

QPoly operator*(const QPoly& a, const Rational& s) {
  if (s == 0) return QPoly(a.nvars);
  QPoly r = a;
  for (auto& [e, c] : r.terms) c *= s;
  return r;
}

QPoly pow(const QPoly& a, unsigned e) {
  QPoly r = qpoly_constant(a.nvars, 1), b = a;
  while (e) {
    if (e & 1u) r = r * b;
    e >>= 1;
    if (e) b = b * b;
  }
  return r;
}

Rational eval(const QPoly& p, const std::vector<Rational>& x) {
  Rational total = 0;
  for (const auto& [e, c] : p.terms) {
    Rational t = c;
    for (size_t i = 0; i < e.size(); ++i)
      for (int k = 0; k < e[i]; ++k) t *= x[i];
    total += t;
  }
  return total;
}

QPoly extend_vars(const QPoly& p, int nvars) {
  QPoly r(nvars);
  for (const auto& [e, c] : p.terms) {
    Exponents f = e;
    f.resize(static_cast<size_t>(nvars), 0);
    r.terms[f] = c;
  }
  return r;
}

std::vector<Exponents> canonical_order(const std::vector<Exponents>& monomials) {
  std::vector<Exponents> out = monomials;
  auto deg = [](const Exponents& e) {
    int s = 0;
    for (int x : e) s += x;
    return s;
  };
  std::sort(out.begin(), out.end(), [&](const Exponents& a, const Exponents& b) {
    int da = deg(a), db = deg(b);
    if (da != db) return da > db;
    return a > b;
  });
  return out;
}

std::string monomial_string(const Exponents& e, const std::vector<std::string>& names) {
  std::string s;
  for (size_t i = 0; i < e.size(); ++i) {
    if (e[i] == 0) continue;
    if (!s.empty()) s += "*";
    s += names[i];
    if (e[i] > 1) s += "^" + std::to_string(e[i]);
  }
  return s;
}

std::string to_string(const QPoly& p, const std::vector<std::string>& names) {
  if (p.terms.empty()) return "0";
  std::vector<Exponents> keys;
  for (const auto& [e, c] : p.terms) keys.push_back(e);
  std::string s;
  for (const auto& e : canonical_order(keys)) {
    const Rational& c = p.terms.at(e);
    std::string mono = monomial_string(e, names);
    Rational mag = abs(c);
    if (s.empty()) s += c < 0 ? "-" : "";
    else s += c < 0 ? " - " : " + ";
    if (mono.empty()) s += mag.get_str();
    else if (mag == 1) s += mono;
    else s += mag.get_str() + "*" + mono;
  }
  return s;
}

void LoopSpec::validate() const {
  int n = num_vars();
  if (n <= 0) throw std::invalid_argument("a loop needs at least one variable");
  if (update.rows() != n || update.cols() != n)
    throw std::invalid_argument("update matrix is not " + std::to_string(n) + "x" + std::to_string(n));
  if (guards.empty()) throw std::invalid_argument("a loop needs at least one guard");
  for (const auto& g : guards)
    if (g.nvars != n) throw std::invalid_argument("guard polynomial has the wrong number of variables");
}

std::string print_loop(const LoopSpec& spec) {
  std::string s = "vars";
  for (const auto& v : spec.vars) s += " " + v;
  s += ";\nwhile (";
  for (size_t j = 0; j < spec.guards.size(); ++j) {
    if (j) s += ", ";
    s += to_string(spec.guards[j], spec.vars) + " > 0";
  }
  s += ") {\n";
  int n = spec.num_vars();
  for (int i = 0; i < n; ++i) {
    QPoly row(n);
    for (int j = 0; j < n; ++j)
      if (spec.update(i, j) != 0) row = row + qpoly_var(n, j) * spec.update(i, j);
    s += "  " + spec.vars[static_cast<size_t>(i)] + " := " + to_string(row, spec.vars) + ";\n";
  }
  s += "}\n";
  return s;
}

GadgetInput gadget_input(const QPoly& f) {
  if (f.is_zero()) throw std::invalid_argument("gadget polynomial must be nonzero");
  for (const auto& [e, c] : f.terms)
    if (c.get_den() != 1) throw std::invalid_argument("gadget polynomial must have integer coefficients");
  return GadgetInput{f};
}

LoopSpec diophantine_gadget(const GadgetInput& g) {
  int m = g.f.nvars;
  int n = m + 1;
  LoopSpec spec;
  for (int i = 1; i <= n; ++i) spec.vars.push_back("x" + std::to_string(i));
  spec.update = RationalMatrix::identity(n);
  spec.update(m, m) = Rational(1, 2);
  QPoly f = extend_vars(g.f, n);
  spec.guards.push_back(qpoly_var(n, m) - f * f);
  spec.validate();
  return spec;
}

}  // namespace loopterm
