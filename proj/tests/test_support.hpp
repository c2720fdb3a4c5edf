#pragma once
// Shared fixtures for the test binaries.

#include "loopterm/matrix.hpp"

#include <random>

namespace loopterm::testing {

inline RationalMatrix example_matrix() {
  return RationalMatrix::from_rows({
      {1, Rational(-2, 5), 0, 0, 0},
      {2, Rational(1, 5), 0, 0, 0},
      {0, 0, 0, 2, 0},
      {0, 0, Rational(-1, 2), -1, 0},
      {0, 0, 0, 0, Rational(-1, 2)},
  });
}

inline Rational random_rational(std::mt19937_64& rng, int bound) {
  std::uniform_int_distribution<int> num(-bound, bound), den(1, bound);
  return Rational(num(rng), den(rng));
}

inline RationalMatrix random_matrix(std::mt19937_64& rng, int n, int bound) {
  RationalMatrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Rational q = random_rational(rng, bound);
      q.canonicalize();
      a(i, j) = q;
    }
  return a;
}

inline RationalVector random_vector(std::mt19937_64& rng, int n, int bound) {
  RationalVector v;
  for (int i = 0; i < n; ++i) {
    Rational q = random_rational(rng, bound);
    q.canonicalize();
    v.push_back(q);
  }
  return v;
}

}  // namespace loopterm::testing
