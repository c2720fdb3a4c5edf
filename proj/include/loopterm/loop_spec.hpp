#pragma once
// Loops `while (P_1(X) > 0, ..., P_m(X) > 0) { X := A X }` and their DSL.

#include "loopterm/matrix.hpp"
#include "loopterm/mpoly.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace loopterm {

struct LoopSpec {
  std::vector<std::string> vars;
  RationalMatrix update;
  std::vector<QPoly> guards;

  int num_vars() const { return static_cast<int>(vars.size()); }
  // Throws std::invalid_argument on violated invariants.
  void validate() const;
  friend bool operator==(const LoopSpec& a, const LoopSpec& b) {
    return a.vars == b.vars && a.update == b.update && a.guards == b.guards;
  }
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, int line, int column);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_, column_;
};

LoopSpec parse_loop(const std::string& text);
std::string print_loop(const LoopSpec& spec);

// Polynomial over variables x1..xk (k = largest index used, or `nvars` if given).
QPoly parse_polynomial(const std::string& text, int nvars = -1);

struct GadgetInput {
  QPoly f;  // integer coefficients, nonzero
};
GadgetInput gadget_input(const QPoly& f);
LoopSpec diophantine_gadget(const GadgetInput& g);

}  // namespace loopterm
