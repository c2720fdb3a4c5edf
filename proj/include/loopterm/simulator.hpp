#pragma once
// Exact execution of loops and a seeded search for long-surviving inputs.

#include "loopterm/loop_spec.hpp"

#include <optional>

namespace loopterm {

struct RunResult {
  enum class Tag { Terminated, BudgetExceeded } tag = Tag::BudgetExceeded;
  long steps = 0;  // Terminated: first n with some guard <= 0 at A^n X0; else the budget
  std::vector<std::vector<Rational>> trace;  // guard values per evaluated step, if requested
  long max_bits = 0;                         // largest state coordinate bit size seen
};

RunResult simulate(const LoopSpec& spec, const RationalVector& x0, long max_iter, bool record_trace = false);

// Steps n < max_iter at which some guard fails, without stopping at the first.
std::vector<long> failing_steps(const LoopSpec& spec, const RationalVector& x0, long max_iter);

struct Candidate {
  RationalVector x0;
  long survived = 0;  // steps before the first guard failure, capped at the budget
  std::string origin;
};

struct SearchBudget {
  int samples = 200;
  long max_iter = 1000;
  unsigned long seed = 1;
  int keep = 5;
};

// Random, integer-grid and rational eigenvector samples, longest survivors first.
// Deterministic for a fixed seed.
std::vector<Candidate> falsify_search(const LoopSpec& spec, const SearchBudget& budget);

}  // namespace loopterm
