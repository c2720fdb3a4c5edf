#include "loopterm/sas.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/stat.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstdlib>
#include <cstring>
#include <optional>
#include <random>
#include <sstream>

namespace loopterm {

std::string to_string(SolverOutcome::Tag t) {
  switch (t) {
    case SolverOutcome::Tag::Sat: return "sat";
    case SolverOutcome::Tag::Unsat: return "unsat";
    case SolverOutcome::Tag::Unknown: return "unknown";
  }
  return "?";
}

namespace {

class Eliminator {
 public:
  explicit Eliminator(Layout& layout) : L(layout) {}

  Formula run(const Formula& f) {
    using K = Formula::Kind;
    switch (f.kind) {
      case K::True:
      case K::False:
      case K::Atom:
      case K::Not: return f;
      case K::And:
      case K::Or: {
        std::vector<Formula> xs;
        for (const auto& g : f.args) xs.push_back(run(g));
        return f.kind == K::And ? Formula::conj(std::move(xs)) : Formula::disj(std::move(xs));
      }
      case K::Forall:
      case K::Exists: return quant(f.kind == K::Forall, f.torus, f.parity, run(f.args[0]));
    }
    return f;
  }

 private:
  Formula substitute_parity(const Formula& f, const Rational& z) {
    using K = Formula::Kind;
    switch (f.kind) {
      case K::Atom: return Formula::atom(substitute_value(f.poly, L.parity_var(), z), f.rel);
      case K::And:
      case K::Or: {
        std::vector<Formula> xs;
        for (const auto& g : f.args) xs.push_back(substitute_parity(g, z));
        return f.kind == K::And ? Formula::conj(std::move(xs)) : Formula::disj(std::move(xs));
      }
      case K::Not: return Formula::negation(substitute_parity(f.args[0], z));
      case K::Forall: return Formula::forall(f.torus, f.parity, substitute_parity(f.args[0], z));
      case K::Exists: return Formula::exists(f.torus, f.parity, substitute_parity(f.args[0], z));
      default: return f;
    }
  }

  std::vector<int> occurring(const Formula& f, const std::vector<int>& ids) {
    std::vector<int> out;
    for (int t : ids)
      if (mentions(f, t)) out.push_back(t);
    return out;
  }

  bool mentions(const Formula& f, int t) {
    if (f.kind == Formula::Kind::Atom) return uses_var(f.poly, L.cos_var(t)) || uses_var(f.poly, L.sin_var(t));
    for (const auto& g : f.args)
      if (mentions(g, t)) return true;
    return false;
  }

  Formula quant(bool forall, std::vector<int> ids, bool parity, Formula body) {
    using K = Formula::Kind;
    if (parity) {
      Formula a = substitute_parity(body, 1), b = substitute_parity(body, -1);
      std::vector<Formula> xs;
      xs.push_back(std::move(a));
      xs.push_back(std::move(b));
      body = forall ? Formula::conj(std::move(xs)) : Formula::disj(std::move(xs));
    }
    ids = occurring(body, ids);
    if (ids.empty()) return body;
    if ((forall && body.kind == K::And) || (!forall && body.kind == K::Or)) {
      std::vector<Formula> xs;
      for (const auto& g : body.args) xs.push_back(quant(forall, ids, false, g));
      return body.kind == K::And ? Formula::conj(std::move(xs)) : Formula::disj(std::move(xs));
    }
    if (body.kind == K::Atom)
      if (auto r = linear_atom(forall, ids, body.poly, body.rel)) return *r;
    return forall ? Formula::forall(ids, false, body) : Formula::exists(ids, false, body);
  }

  int amplitude(const QPoly& def) {
    for (size_t k = 0; k < L.amplitudes.size(); ++k) {
      int n = std::max(def.nvars, L.amplitudes[k].nvars);
      if (lift(def, n).terms == lift(L.amplitudes[k], n).terms) return L.amplitude_var(static_cast<int>(k));
    }
    L.amplitudes.push_back(def);
    return L.amplitude_var(static_cast<int>(L.amplitudes.size()) - 1);
  }

  // p = p0 + sum_t (a_t y_t1 + b_t y_t2) ranges over [p0 - R, p0 + R] with R = sum_t sqrt(a_t^2 + b_t^2).
  std::optional<Formula> linear_atom(bool forall, const std::vector<int>& ids, const QPoly& p, Rel rel) {
    std::vector<int> bound;
    for (int t : ids) {
      bound.push_back(L.cos_var(t));
      bound.push_back(L.sin_var(t));
    }
    QPoly p0(p.nvars);
    std::map<int, QPoly> lin;
    for (const auto& [e, c] : p.terms) {
      int deg = 0, which = -1;
      for (int v : bound)
        if (v < p.nvars && e[static_cast<size_t>(v)] != 0) {
          deg += e[static_cast<size_t>(v)];
          which = v;
        }
      if (deg > 1) return std::nullopt;
      Exponents f = e;
      if (which >= 0) f[static_cast<size_t>(which)] = 0;
      QPoly& dst = which < 0 ? p0 : lin.try_emplace(which, QPoly(p.nvars)).first->second;
      dst.terms[f] += c;
    }
    for (const auto& [v, q] : lin)
      for (const auto& [e, c] : q.terms)
        for (int w = L.nx; w <= L.parity_var(); ++w)
          if (w < q.nvars && e[static_cast<size_t>(w)] != 0) return std::nullopt;
    for (const auto& [e, c] : p0.terms)
      for (int w = L.nx; w <= L.parity_var(); ++w)
        if (w < p0.nvars && e[static_cast<size_t>(w)] != 0) return std::nullopt;
    std::vector<int> amps;
    for (int t : ids) {
      QPoly a = lin.count(L.cos_var(t)) ? lin.at(L.cos_var(t)) : QPoly(p.nvars);
      QPoly b = lin.count(L.sin_var(t)) ? lin.at(L.sin_var(t)) : QPoly(p.nvars);
      if (a.is_zero() && b.is_zero()) continue;
      amps.push_back(amplitude(padd(pmul(a, a), pmul(b, b))));
    }
    int n = L.size();
    QPoly P = lift(p0, n), R(n);
    for (int v : amps) R = R + qpoly_var(n, v);
    if (amps.empty()) return Formula::atom(P, rel);
    auto at = [](QPoly q, Rel r) { return Formula::atom(std::move(q), r); };
    auto both = [](Formula a, Formula b, bool conj) {
      std::vector<Formula> xs;
      xs.push_back(std::move(a));
      xs.push_back(std::move(b));
      return conj ? Formula::conj(std::move(xs)) : Formula::disj(std::move(xs));
    };
    if (forall) {
      switch (rel) {
        case Rel::Gt: return at(P - R, Rel::Gt);
        case Rel::Ge: return at(P - R, Rel::Ge);
        case Rel::Lt: return at(P + R, Rel::Lt);
        case Rel::Le: return at(P + R, Rel::Le);
        case Rel::Eq: return both(at(P, Rel::Eq), at(R, Rel::Eq), true);
        case Rel::Ne: return both(at(P - R, Rel::Gt), at(P + R, Rel::Lt), false);
      }
    } else {
      switch (rel) {
        case Rel::Gt: return at(P + R, Rel::Gt);
        case Rel::Ge: return at(P + R, Rel::Ge);
        case Rel::Lt: return at(P - R, Rel::Lt);
        case Rel::Le: return at(P - R, Rel::Le);
        case Rel::Eq: return both(at(P - R, Rel::Le), at(P + R, Rel::Ge), true);
        case Rel::Ne: return both(at(R, Rel::Gt), at(P, Rel::Ne), false);
      }
    }
    return std::nullopt;
  }

  Layout& L;
};

bool mentions_x(const Formula& f, int nx) {
  if (f.kind == Formula::Kind::Atom) {
    for (int v = 0; v < nx; ++v)
      if (uses_var(f.poly, v)) return true;
    return false;
  }
  for (const auto& g : f.args)
    if (mentions_x(g, nx)) return true;
  return false;
}

bool amplitudes_mention_x(const Layout& L) {
  for (const auto& a : L.amplitudes)
    for (int v = 0; v < L.nx; ++v)
      if (uses_var(a, v)) return true;
  return false;
}

std::string first_line(const std::string& s) {
  size_t i = s.find_first_not_of(" \t\r\n");
  if (i == std::string::npos) return "";
  size_t j = s.find('\n', i);
  return s.substr(i, j == std::string::npos ? std::string::npos : j - i);
}

}  // namespace

TorusFormula eliminate(const TorusFormula& f) {
  TorusFormula out;
  out.layout = f.layout;
  Eliminator el(out.layout);
  out.formula = el.run(to_nnf(f.formula));
  return out;
}

ProcessResult run_process(const std::vector<std::string>& argv, const std::string& input, long timeout_ms) {
  ProcessResult res;
  if (argv.empty()) return res;
  int in[2], out[2], err[2];
  if (pipe(in) != 0) return res;
  if (pipe(out) != 0) {
    close(in[0]);
    close(in[1]);
    return res;
  }
  if (pipe(err) != 0) {
    close(in[0]);
    close(in[1]);
    close(out[0]);
    close(out[1]);
    return res;
  }
  pid_t pid = fork();
  if (pid < 0) {
    for (int fd : {in[0], in[1], out[0], out[1], err[0], err[1]}) close(fd);
    return res;
  }
  if (pid == 0) {
    dup2(in[0], 0);
    dup2(out[1], 1);
    dup2(err[1], 2);
    for (int fd : {in[0], in[1], out[0], out[1], err[0], err[1]}) close(fd);
    std::vector<char*> args;
    for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
    args.push_back(nullptr);
    execvp(args[0], args.data());
    const char msg[] = "exec failed\n";
    ssize_t ignored = write(2, msg, sizeof msg - 1);
    (void)ignored;
    _exit(127);
  }
  close(in[0]);
  close(out[1]);
  close(err[1]);
  signal(SIGPIPE, SIG_IGN);
  fcntl(in[1], F_SETFL, O_NONBLOCK);
  auto deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(timeout_ms);
  size_t written = 0;
  int win = in[1];
  if (input.empty()) {
    close(win);
    win = -1;
  }
  bool out_open = true, err_open = true;
  char buf[4096];
  while (out_open || err_open) {
    long left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now()).count();
    if (left <= 0) {
      res.timed_out = true;
      break;
    }
    std::vector<pollfd> fds;
    if (out_open) fds.push_back({out[0], POLLIN, 0});
    if (err_open) fds.push_back({err[0], POLLIN, 0});
    if (win >= 0) fds.push_back({win, POLLOUT, 0});
    int r = poll(fds.data(), fds.size(), static_cast<int>(std::min(left, 1000L)));
    if (r < 0 && errno != EINTR) break;
    for (const auto& p : fds) {
      if (p.revents == 0) continue;
      if (p.fd == win) {
        ssize_t w = write(win, input.data() + written, input.size() - written);
        if (w > 0) written += static_cast<size_t>(w);
        if (w < 0 && errno != EAGAIN) written = input.size();
        if (written >= input.size()) {
          close(win);
          win = -1;
        }
        continue;
      }
      ssize_t n = read(p.fd, buf, sizeof buf);
      if (n > 0) {
        (p.fd == out[0] ? res.out : res.err).append(buf, static_cast<size_t>(n));
      } else if (n == 0 || errno != EAGAIN) {
        (p.fd == out[0] ? out_open : err_open) = false;
      }
    }
  }
  if (win >= 0) close(win);
  if (res.timed_out) kill(pid, SIGKILL);
  close(out[0]);
  close(err[0]);
  int status = 0;
  waitpid(pid, &status, 0);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  res.launched = !(res.exit_code == 127 && res.err.find("exec failed") != std::string::npos);
  return res;
}

std::vector<std::string> default_solver_command() {
  const char* path = std::getenv("PATH");
  if (!path) return {};
  std::istringstream is(path);
  std::string dir;
  while (std::getline(is, dir, ':')) {
    std::string cand = (dir.empty() ? "." : dir) + "/z3";
    struct stat st;
    if (stat(cand.c_str(), &st) == 0 && S_ISREG(st.st_mode) && access(cand.c_str(), X_OK) == 0)
      return {cand, "-in", "-smt2"};
  }
  return {};
}

std::vector<std::string> solver_command(const std::string& spec) {
  std::istringstream is(spec);
  std::vector<std::string> argv;
  for (std::string w; is >> w;) argv.push_back(w);
  if (argv.size() == 1 && argv[0] == "none") return {};
  if (argv.size() == 1) {
    const std::string& a = argv[0];
    std::string base = a.substr(a.find_last_of('/') == std::string::npos ? 0 : a.find_last_of('/') + 1);
    if (base == "z3") {
      argv.push_back("-in");
      argv.push_back("-smt2");
    }
  }
  return argv;
}

namespace {

std::optional<RationalVector> certified(const TorusFormula& f, const RationalVector& x, const Rational& eps) {
  if (certify_model(f, x, eps) == Truth::True) return x;
  return std::nullopt;
}

std::optional<RationalVector> from_model(const TorusFormula& f, const std::map<std::string, AlgebraicNumber>& m,
                                         const Rational& eps) {
  const Layout& L = f.layout;
  std::vector<AlgebraicNumber> vals;
  bool exact = true;
  for (int i = 0; i < L.nx; ++i) {
    auto it = m.find(L.name(i));
    vals.push_back(it == m.end() ? AlgebraicNumber(0) : it->second);
    exact = exact && vals.back().is_rational();
  }
  if (exact) {
    RationalVector x;
    for (const auto& v : vals) x.push_back(v.rational_value());
    return certified(f, x, eps);
  }
  // Irrational model: try the simplest rationals in shrinking enclosures.
  for (long bits : {4, 8, 16, 32, 64, 128}) {
    RationalVector x;
    for (const auto& v : vals) {
      if (v.is_rational()) {
        x.push_back(v.rational_value());
        continue;
      }
      Rational w(1);
      w /= Integer(1) << static_cast<unsigned long>(bits);
      AlgebraicNumber r = v.refine(w);
      x.push_back(simplest_rational(r.box().re_lo, r.box().re_hi));
    }
    if (auto ok = certified(f, x, eps)) return ok;
  }
  return std::nullopt;
}

std::optional<RationalVector> sample_search(const TorusFormula& f, const SolverConfig& cfg) {
  int n = f.layout.nx;
  std::vector<RationalVector> cands;
  cands.push_back(RationalVector(static_cast<size_t>(n), Rational(0)));
  for (int i = 0; i < n; ++i)
    for (int s : {1, -1}) {
      RationalVector x(static_cast<size_t>(n), Rational(0));
      x[static_cast<size_t>(i)] = s;
      cands.push_back(x);
    }
  std::mt19937_64 rng(cfg.seed);
  std::uniform_int_distribution<int> num(-9, 9), den(1, 4);
  for (int k = 0; k < cfg.samples; ++k) {
    RationalVector x;
    for (int i = 0; i < n; ++i) {
      Rational q(num(rng), den(rng));
      q.canonicalize();
      x.push_back(q);
    }
    cands.push_back(x);
  }
  for (const auto& x : cands)
    if (auto ok = certified(f, x, cfg.eps)) return ok;
  return std::nullopt;
}

}  // namespace

// Models are re-certified against the eliminated system: elimination is an exact
// equivalence, and its amplitude atoms are decided exactly where torus minima are not.
SolverOutcome solve(const TorusFormula& f, const SolverConfig& cfg) {
  SolverOutcome res;
  TorusFormula g = eliminate(f);
  RationalVector zero(static_cast<size_t>(f.layout.nx), Rational(0));
  if (g.formula.kind == Formula::Kind::False) {
    res.tag = SolverOutcome::Tag::Unsat;
    res.method = "exact";
    return res;
  }
  bool ground = !mentions_x(g.formula, g.layout.nx) && !amplitudes_mention_x(g.layout);
  if (ground && !has_quantifier(g.formula)) {
    Truth t = certify_model(g, zero, cfg.eps);
    if (t != Truth::Undetermined) {
      res.method = "exact";
      if (t == Truth::True) {
        res.tag = SolverOutcome::Tag::Sat;
        res.model = zero;
      } else {
        res.tag = SolverOutcome::Tag::Unsat;
      }
      return res;
    }
  }
  if (!cfg.command.empty()) {
    std::string script = emit_query(g);
    ProcessResult pr = run_process(cfg.command, script, cfg.timeout_ms);
    res.method = "solver";
    if (!pr.launched) {
      res.reason = "solver could not be started: " + cfg.command[0];
      return res;
    }
    if (pr.timed_out) {
      res.reason = "solver timeout after " + std::to_string(cfg.timeout_ms) + " ms";
      return res;
    }
    std::string head = first_line(pr.out);
    if (head == "unsat") {
      res.tag = SolverOutcome::Tag::Unsat;
      return res;
    }
    if (head == "sat") {
      try {
        auto model = parse_model(pr.out.substr(pr.out.find("sat") + 3));
        if (auto x = from_model(g, model, cfg.eps)) {
          res.tag = SolverOutcome::Tag::Sat;
          res.model = *x;
          return res;
        }
        res.reason = "solver model failed re-certification";
      } catch (const std::exception& e) {
        res.reason = std::string("unreadable solver model: ") + e.what();
      }
    } else if (head == "unknown") {
      res.reason = "solver returned unknown";
    } else {
      std::string msg = first_line(pr.err).empty() ? head : first_line(pr.err);
      res.reason = "solver failure: " + (msg.empty() ? "exit code " + std::to_string(pr.exit_code) : msg);
    }
    if (auto x = sample_search(g, cfg)) {
      res.tag = SolverOutcome::Tag::Sat;
      res.model = *x;
      res.method = "sampling";
      res.reason.clear();
    }
    return res;
  }
  res.method = "sampling";
  if (auto x = sample_search(g, cfg)) {
    res.tag = SolverOutcome::Tag::Sat;
    res.model = *x;
    return res;
  }
  res.reason = "no external solver configured; the system needs quantifier elimination over the reals";
  return res;
}

}  // namespace loopterm
