#include "loopterm/loop_spec.hpp"

#include <cctype>
#include <functional>
#include <set>

namespace loopterm {

ParseError::ParseError(const std::string& msg, int line, int column)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
      line_(line),
      column_(column) {}

namespace {

enum class Tok { Ident, Number, Symbol, End };

struct Token {
  Tok kind;
  std::string text;
  int line, column;
};

std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  size_t i = 0;
  auto advance = [&](size_t k) {
    for (size_t t = 0; t < k; ++t) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    int l = line, cl = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      out.push_back({Tok::Ident, src.substr(i, j - i), l, cl});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      if (j < src.size() && (src[j] == '.' || src[j] == 'e' || src[j] == 'E'))
        throw ParseError("decimal literals are not allowed; write an exact fraction", l, cl);
      out.push_back({Tok::Number, src.substr(i, j - i), l, cl});
      advance(j - i);
      continue;
    }
    static const char* two[] = {":=", ">=", "<=", "&&"};
    bool matched = false;
    for (const char* s : two)
      if (src.compare(i, 2, s) == 0) {
        out.push_back({Tok::Symbol, s, l, cl});
        advance(2);
        matched = true;
        break;
      }
    if (matched) continue;
    if (std::string("+-*/^(){};,<>").find(c) == std::string::npos)
      throw ParseError(std::string("unexpected character '") + c + "'", l, cl);
    out.push_back({Tok::Symbol, std::string(1, c), l, cl});
    advance(1);
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

using Resolver = std::function<int(const Token&)>;

class Parser {
 public:
  Parser(std::vector<Token> toks, int nvars, Resolver resolve)
      : toks_(std::move(toks)), nvars_(nvars), resolve_(std::move(resolve)) {}

  const Token& peek() const { return toks_[pos_]; }
  bool is(const char* sym) const { return peek().kind == Tok::Symbol && peek().text == sym; }
  bool is_word(const char* w) const { return peek().kind == Tok::Ident && peek().text == w; }
  Token take() { return toks_[pos_++]; }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, peek().line, peek().column); }
  void expect(const char* sym) {
    if (!is(sym)) fail(std::string("expected '") + sym + "'" + found());
    ++pos_;
  }
  void expect_word(const char* w) {
    if (!is_word(w)) fail(std::string("expected '") + w + "'" + found());
    ++pos_;
  }
  std::string found() const {
    if (peek().kind == Tok::End) return " at end of input";
    return ", found '" + peek().text + "'";
  }
  void set_nvars(int n) { nvars_ = n; }

  QPoly expr() {
    QPoly acc(nvars_);
    bool first = true;
    for (;;) {
      bool negate = false;
      if (is("+") || is("-")) {
        negate = take().text == "-";
      } else if (!first) {
        break;
      }
      QPoly t = term();
      acc = negate ? acc - t : acc + t;
      first = false;
      if (!is("+") && !is("-")) break;
    }
    return acc;
  }

 private:
  QPoly term() {
    QPoly acc = power();
    for (;;) {
      if (is("*")) {
        take();
        acc = acc * power();
      } else if (is("/")) {
        const Token& at = take();
        QPoly d = power();
        if (d.total_degree() > 0) throw ParseError("division by a non-constant expression", at.line, at.column);
        Rational c = d.is_zero() ? Rational(0) : d.terms.begin()->second;
        if (c == 0) throw ParseError("division by zero", at.line, at.column);
        acc = acc * Rational(1 / c);
      } else {
        break;
      }
    }
    return acc;
  }

  QPoly power() {
    QPoly base = atom();
    if (is("^")) {
      take();
      if (peek().kind != Tok::Number) fail("expected a nonnegative integer exponent" + found());
      Token e = take();
      if (e.text.size() > 4) throw ParseError("exponent too large", e.line, e.column);
      base = pow(base, static_cast<unsigned>(std::stoul(e.text)));
    }
    return base;
  }

  QPoly atom() {
    if (is("(")) {
      take();
      QPoly p = expr();
      expect(")");
      return p;
    }
    if (is("-")) {
      take();
      return -power();
    }
    if (peek().kind == Tok::Number) return qpoly_constant(nvars_, Rational(Integer(take().text)));
    if (peek().kind == Tok::Ident) {
      Token t = take();
      return qpoly_var(nvars_, resolve_(t));
    }
    fail("expected an expression" + found());
  }

  std::vector<Token> toks_;
  size_t pos_ = 0;
  int nvars_;
  Resolver resolve_;
};

int indexed_var(const std::string& name) {
  if (name.size() < 2 || name[0] != 'x') return -1;
  for (size_t i = 1; i < name.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(name[i]))) return -1;
  if (name[1] == '0' || name.size() > 6) return -1;
  return std::stoi(name.substr(1));
}

const std::set<std::string> kKeywords = {"vars", "while"};

}  // namespace

QPoly parse_polynomial(const std::string& text, int nvars) {
  auto toks = lex(text);
  int maxidx = 0;
  for (const auto& t : toks)
    if (t.kind == Tok::Ident) {
      int k = indexed_var(t.text);
      if (k < 0) throw ParseError("unknown variable '" + t.text + "' (expected x1, x2, ...)", t.line, t.column);
      maxidx = std::max(maxidx, k);
    }
  if (nvars < 0) nvars = std::max(maxidx, 1);
  Parser p(toks, nvars, [nvars](const Token& t) {
    int k = indexed_var(t.text);
    if (k > nvars) throw ParseError("unknown variable '" + t.text + "'", t.line, t.column);
    return k - 1;
  });
  QPoly r = p.expr();
  if (p.peek().kind != Tok::End) p.fail("trailing input" + p.found());
  return r;
}

LoopSpec parse_loop(const std::string& text) {
  LoopSpec spec;
  std::map<std::string, int> index;
  Parser p(lex(text), 0, [&index](const Token& t) {
    auto it = index.find(t.text);
    if (it == index.end()) throw ParseError("unknown variable '" + t.text + "'", t.line, t.column);
    return it->second;
  });

  p.expect_word("vars");
  while (!p.is(";")) {
    if (p.is(",")) {
      p.take();
      continue;
    }
    if (p.peek().kind != Tok::Ident) p.fail("expected a variable name" + p.found());
    Token v = p.take();
    if (kKeywords.count(v.text)) throw ParseError("'" + v.text + "' is reserved", v.line, v.column);
    if (index.count(v.text)) throw ParseError("variable '" + v.text + "' declared twice", v.line, v.column);
    index[v.text] = static_cast<int>(spec.vars.size());
    spec.vars.push_back(v.text);
  }
  p.take();
  if (spec.vars.empty()) p.fail("no variables declared");
  int n = spec.num_vars();
  p.set_nvars(n);

  p.expect_word("while");
  p.expect("(");
  for (;;) {
    QPoly lhs = p.expr();
    if (p.is(">=") || p.is("<="))
      p.fail("non-strict guards are not supported; use '>'");
    bool greater = p.is(">");
    if (!greater && !p.is("<")) p.fail("expected '>' in guard" + p.found());
    p.take();
    QPoly rhs = p.expr();
    spec.guards.push_back(greater ? lhs - rhs : rhs - lhs);
    if (p.is(",") || p.is("&&")) {
      p.take();
      continue;
    }
    break;
  }
  p.expect(")");
  p.expect("{");

  spec.update = RationalMatrix(n, n);
  std::vector<bool> assigned(static_cast<size_t>(n), false);
  while (!p.is("}")) {
    if (p.peek().kind != Tok::Ident) p.fail("expected an assignment" + p.found());
    Token target = p.take();
    auto it = index.find(target.text);
    if (it == index.end()) throw ParseError("unknown variable '" + target.text + "'", target.line, target.column);
    int row = it->second;
    if (assigned[static_cast<size_t>(row)])
      throw ParseError("variable '" + target.text + "' assigned twice", target.line, target.column);
    assigned[static_cast<size_t>(row)] = true;
    p.expect(":=");
    Token at = p.peek();
    QPoly rhs = p.expr();
    for (const auto& [e, c] : rhs.terms) {
      int deg = 0;
      for (int x : e) deg += x;
      if (deg != 1)
        throw ParseError("update of '" + target.text + "' must be a linear combination of variables", at.line,
                         at.column);
      for (int j = 0; j < n; ++j)
        if (e[static_cast<size_t>(j)] == 1) spec.update(row, j) = c;
    }
    if (p.is(";")) {
      p.take();
    } else if (!p.is("}")) {
      p.fail("expected ';'" + p.found());
    }
  }
  Token close = p.take();
  for (int i = 0; i < n; ++i)
    if (!assigned[static_cast<size_t>(i)])
      throw ParseError("variable '" + spec.vars[static_cast<size_t>(i)] + "' is never assigned", close.line,
                       close.column);
  if (p.peek().kind != Tok::End) p.fail("trailing input" + p.found());
  spec.validate();
  return spec;
}

}  // namespace loopterm
