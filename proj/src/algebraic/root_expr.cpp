#include "loopterm/root_expr.hpp"

#include "loopterm/matrix.hpp"

#include <algorithm>
#include <stdexcept>

namespace loopterm {

RootExpr::RootExpr(const Rational& q) {
  if (q != 0) terms_[{}] = q;
}

bool RootExpr::is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty()); }

Rational RootExpr::constant() const {
  auto it = terms_.find({});
  return it == terms_.end() ? Rational(0) : it->second;
}

std::vector<int> RootExpr::symbols() const {
  std::vector<int> out;
  for (const auto& [m, c] : terms_)
    for (const auto& [s, e] : m) out.push_back(s);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

int ExprRing::add_symbol(const AlgebraicNumber& value, std::string name) {
  if (value.is_rational()) throw std::invalid_argument("rational values are constants, not symbols");
  Symbol s{value, value.minpoly(), std::move(name), {}};
  int d = s.minpoly.degree();
  Poly y = Poly::x();
  Poly cur(1);
  for (int e = 0; e < 2 * d - 1; ++e) {
    s.power_table.push_back(cur);
    cur = (cur * y) % s.minpoly;
  }
  symbols_.push_back(std::move(s));
  return static_cast<int>(symbols_.size()) - 1;
}

int ExprRing::find_symbol(const AlgebraicNumber& value) const {
  for (size_t i = 0; i < symbols_.size(); ++i)
    if (symbols_[i].minpoly == value.minpoly() && symbols_[i].value == value) return static_cast<int>(i);
  return -1;
}

RootExpr ExprRing::symbol(int id) const {
  RootExpr r;
  r.terms_[{{id, 1}}] = 1;
  return r;
}

RootExpr ExprRing::embed(const AlgebraicNumber& value, const std::string& name_hint) {
  if (value.is_rational()) return RootExpr(value.rational_value());
  int id = find_symbol(value);
  if (id < 0) id = add_symbol(value, name_hint);
  return symbol(id);
}

RootExpr ExprRing::from_poly(const Poly& p, int id) const {
  Poly r = p % symbols_[static_cast<size_t>(id)].minpoly;
  RootExpr out;
  for (int i = 0; i <= r.degree(); ++i) {
    Rational c = r.coeff(i);
    if (c == 0) continue;
    ExprMonomial m;
    if (i > 0) m.emplace_back(id, i);
    out.terms_[m] = c;
  }
  return out;
}

void ExprRing::reduce_into(std::map<ExprMonomial, Rational>& out, const ExprMonomial& m, const Rational& c) const {
  for (size_t k = 0; k < m.size(); ++k) {
    const Symbol& s = symbols_[static_cast<size_t>(m[k].first)];
    if (m[k].second < s.minpoly.degree()) continue;
    const Poly& rep = s.power_table[static_cast<size_t>(m[k].second)];
    for (int i = 0; i <= rep.degree(); ++i) {
      Rational f = rep.coeff(i);
      if (f == 0) continue;
      ExprMonomial next;
      next.reserve(m.size());
      for (size_t j = 0; j < m.size(); ++j) {
        if (j != k) next.push_back(m[j]);
        else if (i > 0) next.emplace_back(m[j].first, i);
      }
      reduce_into(out, next, c * f);
    }
    return;
  }
  auto& slot = out[m];
  slot += c;
  if (slot == 0) out.erase(m);
}

RootExpr ExprRing::add(const RootExpr& a, const RootExpr& b) const {
  RootExpr r = a;
  for (const auto& [m, c] : b.terms_) {
    auto& slot = r.terms_[m];
    slot += c;
    if (slot == 0) r.terms_.erase(m);
  }
  return r;
}

RootExpr ExprRing::neg(const RootExpr& a) const {
  RootExpr r = a;
  for (auto& [m, c] : r.terms_) c = -c;
  return r;
}

RootExpr ExprRing::sub(const RootExpr& a, const RootExpr& b) const { return add(a, neg(b)); }

RootExpr ExprRing::scale(const RootExpr& a, const Rational& s) const {
  if (s == 0) return RootExpr();
  RootExpr r = a;
  for (auto& [m, c] : r.terms_) c *= s;
  return r;
}

RootExpr ExprRing::mul(const RootExpr& a, const RootExpr& b) const {
  RootExpr r;
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) {
      ExprMonomial m;
      m.reserve(ma.size() + mb.size());
      size_t i = 0, j = 0;
      while (i < ma.size() || j < mb.size()) {
        if (j == mb.size() || (i < ma.size() && ma[i].first < mb[j].first)) m.push_back(ma[i++]);
        else if (i == ma.size() || mb[j].first < ma[i].first) m.push_back(mb[j++]);
        else {
          m.emplace_back(ma[i].first, ma[i].second + mb[j].second);
          ++i;
          ++j;
        }
      }
      reduce_into(r.terms_, m, ca * cb);
    }
  return r;
}

RootExpr ExprRing::pow(const RootExpr& a, unsigned long e) const {
  RootExpr r(1), b = a;
  while (e) {
    if (e & 1ul) r = mul(r, b);
    e >>= 1;
    if (e) b = mul(b, b);
  }
  return r;
}

RootExpr ExprRing::inverse_symbol(int id) const {
  const Poly& g = symbols_[static_cast<size_t>(id)].minpoly;
  return from_poly(inverse_mod(Poly::x(), g), id);
}

RootExpr ExprRing::substitute(const RootExpr& a, const std::vector<RootExpr>& images) const {
  RootExpr r;
  for (const auto& [m, c] : a.terms_) {
    RootExpr t(c);
    for (const auto& [s, e] : m) t = mul(t, pow(images[static_cast<size_t>(s)], static_cast<unsigned long>(e)));
    r = add(r, t);
  }
  return r;
}

CInterval ExprRing::symbol_enclosure(int id, long bits) const {
  std::lock_guard<std::mutex> lock(enclosure_mutex_);
  auto key = std::make_pair(id, bits);
  auto it = enclosure_cache_.find(key);
  if (it != enclosure_cache_.end()) return it->second;
  CInterval v = symbols_[static_cast<size_t>(id)].value.enclosure(bits);
  enclosure_cache_.emplace(key, v);
  return v;
}

CInterval ExprRing::enclose(const RootExpr& a, long bits) const {
  long prec = bits + 32;
  CInterval total(prec);
  for (const auto& [m, c] : a.terms_) {
    CInterval t(Interval(c, prec), Interval(prec));
    for (const auto& [s, e] : m) t = t * symbol_enclosure(s, bits + 16).pow(static_cast<unsigned>(e));
    total = total + t;
  }
  return total;
}

AlgebraicNumber ExprRing::to_algebraic(const RootExpr& a) const {
  if (a.is_constant()) return AlgebraicNumber(a.constant());
  std::vector<int> syms = a.symbols();
  std::vector<int> deg;
  size_t dim = 1;
  for (int s : syms) {
    deg.push_back(symbols_[static_cast<size_t>(s)].minpoly.degree());
    dim *= static_cast<size_t>(deg.back());
  }
  if (dim > 2048) throw std::runtime_error("tensor algebra too large for minimal polynomial computation");
  auto monomial_of = [&](size_t idx) {
    ExprMonomial m;
    for (size_t k = 0; k < syms.size(); ++k) {
      auto d = static_cast<size_t>(deg[k]);
      int e = static_cast<int>(idx % d);
      idx /= d;
      if (e) m.emplace_back(syms[k], e);
    }
    return m;
  };
  auto index_of = [&](const ExprMonomial& m) {
    size_t idx = 0, stride = 1;
    size_t j = 0;
    for (size_t k = 0; k < syms.size(); ++k) {
      int e = 0;
      if (j < m.size() && m[j].first == syms[k]) e = m[j++].second;
      idx += static_cast<size_t>(e) * stride;
      stride *= static_cast<size_t>(deg[k]);
    }
    return idx;
  };
  RationalMatrix mat(static_cast<int>(dim), static_cast<int>(dim));
  for (size_t col = 0; col < dim; ++col) {
    RootExpr basis;
    basis.terms_[monomial_of(col)] = 1;
    RootExpr prod = mul(a, basis);
    for (const auto& [m, c] : prod.terms_) mat(static_cast<int>(index_of(m)), static_cast<int>(col)) = c;
  }
  Poly chi = char_poly(mat);
  return select_root(chi, [&](long bits) { return enclose(a, bits); });
}

bool ExprRing::is_zero(const RootExpr& a) const {
  if (a.is_constant()) return a.constant() == 0;
  CInterval e = enclose(a, 64);
  if (!e.re.contains_zero() || !e.im.contains_zero()) return false;
  return to_algebraic(a).is_zero();
}

std::string ExprRing::to_string(const RootExpr& a) const {
  if (a.terms_.empty()) return "0";
  std::string s;
  for (auto it = a.terms_.rbegin(); it != a.terms_.rend(); ++it) {
    const auto& [m, c] = *it;
    Rational mag = loopterm::abs(c);
    if (s.empty()) s += c < 0 ? "-" : "";
    else s += c < 0 ? " - " : " + ";
    std::string mono;
    for (const auto& [sym, e] : m) {
      if (!mono.empty()) mono += "*";
      mono += name(sym);
      if (e > 1) mono += "^" + std::to_string(e);
    }
    if (mono.empty()) s += mag.get_str();
    else if (mag == 1) s += mono;
    else s += mag.get_str() + "*" + mono;
  }
  return s;
}

}  // namespace loopterm
