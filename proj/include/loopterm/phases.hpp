#pragma once
// Roots of unity, arguments of algebraic numbers, heights and multiplicative
// independence of unit-modulus algebraic numbers.

#include "loopterm/algebraic.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace loopterm {

Poly cyclotomic(unsigned k);
unsigned long euler_phi(unsigned long k);

struct ArgumentClass {
  bool rational = false;  // arg/(2 pi) rational
  unsigned long period = 0;  // minimal q with (a/|a|)^q = 1
  unsigned long residue = 0;  // a/|a| = exp(2 pi i residue/period)
  std::string to_string() const;
};

ArgumentClass classify_argument(const AlgebraicNumber& a);
// exp(2 pi i residue/period)
AlgebraicNumber root_of_unity(unsigned long period, unsigned long residue);
// a / |a|
AlgebraicNumber unit_part(const AlgebraicNumber& a);
// Enclosure of arg(a)/(2 pi) in [0, 1).
Interval turn_fraction(const AlgebraicNumber& a, long bits);

// Absolute logarithmic height.
Interval height(const AlgebraicNumber& a, long prec);

// B_k = ceil((11 (m-1) D^3)^(m-1) * prod_j logA_j / logA_k), each logA_j >= 1.
std::vector<Integer> baker_bound(const std::vector<Interval>& log_a, unsigned long degree);

struct IndependenceResult {
  enum class Tag { ProvedDependent, ProvedIndependent, Unresolved } tag = Tag::Unresolved;
  std::vector<long> relation;  // for ProvedDependent; first nonzero entry positive
  std::vector<Integer> bounds;
  std::string to_string() const;
};

IndependenceResult check_independence(const std::vector<AlgebraicNumber>& phases, long cap);
bool verify_relation(const std::vector<AlgebraicNumber>& phases, const std::vector<long>& n);

}  // namespace loopterm
