#include "loopterm/simulator.hpp"

#include "loopterm/factor.hpp"

#include <algorithm>
#include <random>

namespace loopterm {

namespace {

long state_bits(const RationalVector& x) {
  long b = 0;
  for (const auto& q : x) b = std::max(b, bit_size(q));
  return b;
}

bool guards_hold(const LoopSpec& spec, const RationalVector& x, std::vector<Rational>* values) {
  bool ok = true;
  for (const auto& g : spec.guards) {
    Rational v = eval(g, x);
    if (values) values->push_back(v);
    if (v <= 0) ok = false;
  }
  return ok;
}

Rational small_rational(std::mt19937_64& rng, int bound) {
  std::uniform_int_distribution<int> num(-bound, bound), den(1, bound);
  Rational q(num(rng), den(rng));
  q.canonicalize();
  return q;
}

std::vector<RationalVector> eigen_directions(const RationalMatrix& a) {
  std::vector<RationalVector> out;
  Poly cp = char_poly(a);
  for (const auto& f : irreducible_factors(cp)) {
    if (f.degree() != 1) continue;
    Rational lambda = -f.coeff(0) / f.coeff(1);
    RationalMatrix m = a - RationalMatrix::identity(a.rows()).scaled(lambda);
    for (auto& v : nullspace(m)) out.push_back(v);
  }
  return out;
}

}  // namespace

RunResult simulate(const LoopSpec& spec, const RationalVector& x0, long max_iter, bool record_trace) {
  RunResult r;
  RationalVector x = x0;
  for (long n = 0; n < max_iter; ++n) {
    r.max_bits = std::max(r.max_bits, state_bits(x));
    std::vector<Rational> vals;
    bool ok = guards_hold(spec, x, record_trace ? &vals : nullptr);
    if (record_trace) r.trace.push_back(std::move(vals));
    if (!ok) {
      r.tag = RunResult::Tag::Terminated;
      r.steps = n;
      return r;
    }
    x = spec.update * x;
  }
  r.tag = RunResult::Tag::BudgetExceeded;
  r.steps = max_iter;
  return r;
}

std::vector<long> failing_steps(const LoopSpec& spec, const RationalVector& x0, long max_iter) {
  std::vector<long> out;
  RationalVector x = x0;
  for (long n = 0; n < max_iter; ++n) {
    if (!guards_hold(spec, x, nullptr)) out.push_back(n);
    x = spec.update * x;
  }
  return out;
}

std::vector<Candidate> falsify_search(const LoopSpec& spec, const SearchBudget& budget) {
  int nv = spec.num_vars();
  std::vector<Candidate> pool;
  auto add = [&](RationalVector x, std::string origin) {
    if (static_cast<int>(pool.size()) < budget.samples) pool.push_back({std::move(x), 0, std::move(origin)});
  };
  std::mt19937_64 rng(budget.seed);

  for (auto& v : eigen_directions(spec.update)) {
    add(v, "eigenvector");
    RationalVector w = v;
    for (auto& q : w) q = -q;
    add(w, "eigenvector");
  }
  // small integer points, which reach integer roots of gadget polynomials
  for (int k = 0; k < budget.samples / 3; ++k) {
    RationalVector x;
    std::uniform_int_distribution<int> d(-4, 4);
    for (int i = 0; i < nv; ++i) x.push_back(Rational(d(rng)));
    add(x, "integer");
  }
  while (static_cast<int>(pool.size()) < budget.samples) {
    RationalVector x;
    for (int i = 0; i < nv; ++i) x.push_back(small_rational(rng, 9));
    add(x, "random");
  }
  for (auto& c : pool) c.survived = simulate(spec, c.x0, budget.max_iter).steps;
  std::stable_sort(pool.begin(), pool.end(),
                   [](const Candidate& a, const Candidate& b) { return a.survived > b.survived; });
  if (static_cast<int>(pool.size()) > budget.keep) pool.resize(static_cast<size_t>(budget.keep));
  return pool;
}

}  // namespace loopterm
