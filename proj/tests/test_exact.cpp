#include "doctest.h"
#include "loopterm/factor.hpp"
#include "loopterm/matrix.hpp"
#include "test_support.hpp"

#include <random>

using namespace loopterm;

namespace {

// det(xI - A) by cofactor expansion over polynomial entries.
Poly cofactor_det(const std::vector<std::vector<Poly>>& m) {
  size_t n = m.size();
  if (n == 1) return m[0][0];
  Poly total;
  for (size_t c = 0; c < n; ++c) {
    std::vector<std::vector<Poly>> minor;
    for (size_t r = 1; r < n; ++r) {
      std::vector<Poly> row;
      for (size_t k = 0; k < n; ++k)
        if (k != c) row.push_back(m[r][k]);
      minor.push_back(row);
    }
    Poly term = m[0][c] * cofactor_det(minor);
    if (c % 2) total -= term;
    else total += term;
  }
  return total;
}

Poly cofactor_char_poly(const RationalMatrix& a) {
  std::vector<std::vector<Poly>> m(static_cast<size_t>(a.rows()));
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) {
      Poly e(-a(i, j));
      if (i == j) e += Poly::x();
      m[static_cast<size_t>(i)].push_back(e);
    }
  return cofactor_det(m);
}

Poly product(const Factorization& f) {
  Poly p(f.unit);
  for (const auto& [g, e] : f.factors) p *= g.pow(static_cast<unsigned>(e));
  return p;
}

}  // namespace

TEST_CASE("char_poly of the running example matrix") {
  Poly expected({Rational(1, 2), Rational(9, 10), Rational(1, 5), Rational(7, 10), Rational(3, 10), 1});
  CHECK(char_poly(testing::example_matrix()) == expected);
}

TEST_CASE("char_poly of identity is (x-1)^3") {
  Poly e = (Poly::x() - Poly(1)).pow(3);
  CHECK(char_poly(RationalMatrix::identity(3)) == e);
}

TEST_CASE("char_poly rejects non-square input") {
  CHECK_THROWS_AS(char_poly(RationalMatrix(2, 3)), std::invalid_argument);
}

TEST_CASE("char_poly agrees with cofactor expansion and Cayley-Hamilton") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    int n = 1 + trial % 5;
    RationalMatrix a = testing::random_matrix(rng, n, 9);
    Poly p = char_poly(a);
    CHECK(p.degree() == n);
    CHECK(p.lc() == 1);
    if (n <= 4) CHECK(p == cofactor_char_poly(a));
    CHECK(eval_poly(p, a).is_zero());
  }
}

TEST_CASE("factor the running example characteristic polynomial") {
  Factorization f = factor_rational(char_poly(testing::example_matrix()));
  REQUIRE(f.factors.size() == 3);
  CHECK(f.factors[0].first == Poly({Rational(1, 2), 1}));
  CHECK(f.factors[1].first == Poly({1, Rational(-6, 5), 1}));
  CHECK(f.factors[2].first == Poly({1, 1, 1}));
  for (const auto& fe : f.factors) CHECK(fe.second == 1);
}

TEST_CASE("factor small cases") {
  Factorization f = factor_rational(Poly({-1, 0, 1}));
  REQUIRE(f.factors.size() == 2);
  CHECK(f.factors[0].first == Poly({-1, 1}));
  CHECK(f.factors[1].first == Poly({1, 1}));

  Poly sq = (Poly({-2, 0, 1}) * Poly({-2, 0, 1})) * Poly({0, 1}) * Rational(3);
  Factorization g = factor_rational(sq);
  CHECK(product(g) == sq);
  REQUIRE(g.factors.size() == 2);
  CHECK(g.factors[1].second == 2);

  // x^4 + 1 is irreducible over Q but splits modulo every prime.
  CHECK(is_irreducible(Poly({1, 0, 0, 0, 1})));
  CHECK(factor_rational(Poly({1, 0, 0, 0, 1})).factors.size() == 1);
  // x^8 - 1 = (x-1)(x+1)(x^2+1)(x^4+1)
  CHECK(factor_rational(Poly::monomial(1, 8) - Poly(1)).factors.size() == 4);
}

TEST_CASE("factor products of random irreducible cubics") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> d(-9, 9);
  int done = 0;
  while (done < 25) {
    Poly a({d(rng), d(rng), d(rng), 1 + (d(rng) + 9) % 4});
    Poly b({d(rng), d(rng), d(rng), 1 + (d(rng) + 9) % 3});
    if (!is_irreducible(a) || !is_irreducible(b) || a.monic() == b.monic()) continue;
    Factorization f = factor_rational(a * b);
    REQUIRE(f.factors.size() == 2);
    std::vector<Poly> want{a.monic(), b.monic()};
    std::sort(want.begin(), want.end());
    CHECK(f.factors[0].first == want[0]);
    CHECK(f.factors[1].first == want[1]);
    CHECK(product(f) == a * b);
    ++done;
  }
}

TEST_CASE("factor re-multiplies exactly on random polynomials") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> d(-5, 5);
  for (int trial = 0; trial < 30; ++trial) {
    Poly p(1);
    int parts = 1 + trial % 4;
    for (int i = 0; i < parts; ++i) {
      int deg = 1 + static_cast<int>(rng() % 3);
      std::vector<Rational> c;
      for (int k = 0; k < deg; ++k) c.emplace_back(d(rng), 1 + static_cast<int>(rng() % 3));
      c.emplace_back(1 + static_cast<int>(rng() % 2));
      p *= Poly(c);
    }
    Factorization f = factor_rational(p);
    CHECK(product(f) == p);
    for (const auto& fe : f.factors) CHECK(fe.first.lc() == 1);
  }
}

TEST_CASE("mat_apply_iter") {
  RationalMatrix h = RationalMatrix::from_rows({{Rational(1, 2)}});
  CHECK(mat_apply_iter(h, {1}, 3) == RationalVector{Rational(1, 8)});
  RationalVector ones(5, Rational(1));
  CHECK(mat_apply_iter(testing::example_matrix(), ones, 1)[4] == Rational(-1, 2));
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    RationalMatrix a = testing::random_matrix(rng, 3, 9);
    RationalVector x = testing::random_vector(rng, 3, 9);
    CHECK(mat_apply_iter(a, x, 7) == mat_apply_iter(a, mat_apply_iter(a, x, 3), 4));
  }
}

TEST_CASE("rational literal parsing") {
  CHECK(parse_rational("-2/5") == Rational(-2, 5));
  CHECK(parse_rational("4/6") == Rational(2, 3));
  CHECK_THROWS(parse_rational("0.5"));
  CHECK_THROWS(parse_rational("1/0"));
  CHECK(sqrt_upper(2, 30) * sqrt_upper(2, 30) >= 2);
  CHECK(sqrt_lower(2, 30) * sqrt_lower(2, 30) <= 2);
}

TEST_CASE("Sturm counting") {
  Poly p = Poly({-2, 0, 1}) * Poly({-3, 1});
  CHECK(count_real_roots(p, -10, 10) == 3);
  CHECK(count_real_roots(p, 0, 2) == 1);
}
