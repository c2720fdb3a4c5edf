#include "loopterm/sas.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace loopterm {

std::string SExpr::to_string() const {
  if (!is_list) return atom;
  std::string s = "(";
  for (size_t i = 0; i < list.size(); ++i) s += (i ? " " : "") + list[i].to_string();
  return s + ")";
}

std::vector<SExpr> parse_sexprs(const std::string& text) {
  std::vector<SExpr> stack(1);
  stack[0].is_list = true;
  size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == ';') {
      while (i < text.size() && text[i] != '\n') ++i;
    } else if (c == '(') {
      SExpr e;
      e.is_list = true;
      stack.push_back(e);
      ++i;
    } else if (c == ')') {
      if (stack.size() < 2) throw std::runtime_error("unbalanced ')'");
      SExpr e = std::move(stack.back());
      stack.pop_back();
      stack.back().list.push_back(std::move(e));
      ++i;
    } else if (c == '"' || c == '|') {
      size_t j = text.find(c, i + 1);
      if (j == std::string::npos) throw std::runtime_error("unterminated literal");
      SExpr e;
      e.atom = text.substr(i, j - i + 1);
      stack.back().list.push_back(std::move(e));
      i = j + 1;
    } else {
      size_t j = i;
      while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j])) && text[j] != '(' &&
             text[j] != ')' && text[j] != ';')
        ++j;
      SExpr e;
      e.atom = text.substr(i, j - i);
      stack.back().list.push_back(std::move(e));
      i = j;
    }
  }
  if (stack.size() != 1) throw std::runtime_error("unbalanced '('");
  return std::move(stack[0].list);
}

Rational simplest_rational(const Rational& lo, const Rational& hi) {
  if (lo > hi) throw std::invalid_argument("simplest_rational: empty interval");
  if (lo <= 0 && hi >= 0) return 0;
  if (hi < 0) return -simplest_rational(-hi, -lo);
  Integer fl = floor_div(lo);
  if (fl == lo) return lo;
  if (Rational(fl + 1) <= hi) return Rational(fl + 1);
  Rational r = Rational(fl) + 1 / simplest_rational(1 / (hi - fl), 1 / (lo - fl));
  r.canonicalize();
  return r;
}

namespace {

Rational decimal(const std::string& s) {
  if (s.empty() || s.find('?') != std::string::npos) throw std::runtime_error("inexact numeral: " + s);
  size_t dot = s.find('.');
  if (dot == std::string::npos) return Rational(Integer(s));
  std::string frac = s.substr(dot + 1);
  Integer den = 1;
  for (size_t i = 0; i < frac.size(); ++i) den *= 10;
  Rational q(Integer(s.substr(0, dot) + frac), den);
  q.canonicalize();
  return q;
}

// Univariate polynomial in the root-obj variable.
Poly upoly(const SExpr& e) {
  if (!e.is_list) {
    if (!e.atom.empty() && (std::isalpha(static_cast<unsigned char>(e.atom[0])) || e.atom[0] == '_'))
      return Poly({0, 1});
    return Poly(decimal(e.atom));
  }
  const std::string& op = e.list.at(0).atom;
  if (op == "^") {
    Poly b = upoly(e.list.at(1));
    long k = decimal(e.list.at(2).atom).get_num().get_si();
    Poly r(1);
    for (long i = 0; i < k; ++i) r = r * b;
    return r;
  }
  if (op == "-" && e.list.size() == 2) return Poly(0) - upoly(e.list[1]);
  if (op == "/" && e.list.size() == 3) {
    Poly d = upoly(e.list[2]);
    if (d.degree() != 0) throw std::runtime_error("division by a non-constant");
    return upoly(e.list[1]) * Poly(Rational(1 / d.coeff(0)));
  }
  if (op == "+" || op == "-" || op == "*") {
    Poly acc = upoly(e.list.at(1));
    for (size_t i = 2; i < e.list.size(); ++i) {
      Poly b = upoly(e.list[i]);
      acc = op == "+" ? acc + b : op == "-" ? acc - b : acc * b;
    }
    return acc;
  }
  throw std::runtime_error("unexpected polynomial term: " + e.to_string());
}

AlgebraicNumber value(const SExpr& e) {
  if (!e.is_list) return decimal(e.atom);
  const std::string& op = e.list.at(0).atom;
  if (op == "-" && e.list.size() == 2) return -value(e.list[1]);
  if (op == "root-obj") {
    Poly p = upoly(e.list.at(1));
    long k = decimal(e.list.at(2).atom).get_num().get_si();
    std::vector<AlgebraicNumber> real;
    for (auto& r : isolate_roots(p))
      if (r.is_real()) real.push_back(r);
    std::sort(real.begin(), real.end(),
              [](const AlgebraicNumber& a, const AlgebraicNumber& b) { return compare_real(a, b) < 0; });
    if (k < 1 || k > static_cast<long>(real.size())) throw std::runtime_error("root-obj index out of range");
    return real[static_cast<size_t>(k - 1)];
  }
  if (op == "+" || op == "-" || op == "*" || op == "/") {
    AlgebraicNumber acc = value(e.list.at(1));
    for (size_t i = 2; i < e.list.size(); ++i) {
      AlgebraicNumber b = value(e.list[i]);
      acc = op == "+" ? acc + b : op == "-" ? acc - b : op == "*" ? acc * b : acc / b;
    }
    return acc;
  }
  throw std::runtime_error("unsupported model value: " + e.to_string());
}

void collect_defines(const SExpr& e, std::map<std::string, AlgebraicNumber>& out) {
  if (!e.is_list) return;
  if (e.list.size() == 5 && !e.list[0].is_list && e.list[0].atom == "define-fun" && e.list[2].is_list &&
      e.list[2].list.empty() && e.list[3].atom == "Real") {
    out[e.list[1].atom] = value(e.list[4]);
    return;
  }
  for (const auto& g : e.list) collect_defines(g, out);
}

}  // namespace

std::map<std::string, AlgebraicNumber> parse_model(const std::string& text) {
  std::map<std::string, AlgebraicNumber> out;
  for (const auto& e : parse_sexprs(text)) collect_defines(e, out);
  return out;
}

}  // namespace loopterm
