#pragma once
// Complete factorization of rational polynomials into irreducibles over Q.

#include "loopterm/poly.hpp"

#include <utility>
#include <vector>

namespace loopterm {

struct Factorization {
  Rational unit;                              // leading coefficient of the input
  std::vector<std::pair<Poly, int>> factors;  // monic irreducible, sorted
};

Factorization factor_rational(const Poly& p);
// Irreducible monic factors of a squarefree polynomial.
std::vector<Poly> irreducible_factors(const Poly& p);
bool is_irreducible(const Poly& p);

}  // namespace loopterm
