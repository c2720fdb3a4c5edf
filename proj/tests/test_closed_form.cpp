#include "loopterm/closed_form.hpp"
#include "test_support.hpp"

#include <doctest.h>

using namespace loopterm;

namespace {

const EigenGroup* group_of(const ClosedForm& cf, const Poly& factor) {
  for (const auto& g : cf.groups)
    if (g.factor == factor) return &g;
  return nullptr;
}

CInterval at_root(const Poly& c, const AlgebraicNumber& root, long prec) {
  CInterval y = root.enclosure(prec);
  CInterval v(Interval(Rational(0), prec), Interval(Rational(0), prec));
  for (int i = c.degree(); i >= 0; --i) v = v * y + CInterval(Interval(c.coeff(i), prec), Interval(Rational(0), prec));
  return v;
}

bool near(const CInterval& v, const Rational& re, const Rational& im) { return v.re.contains(re) && v.im.contains(im); }

// Value of a real form at n, built from enclosures of xi^n (independent of cos/sin).
std::vector<Interval> eval_real_form(const RealForm& rf, const RationalVector& x, long n, long prec) {
  std::vector<Interval> out(static_cast<size_t>(rf.dim), Interval(Rational(0), prec));
  for (const auto& t : rf.terms) {
    CInterval p = t.eigenvalue.enclosure(prec).pow(static_cast<unsigned>(n));
    for (int j = 0; j < rf.dim; ++j)
      for (size_t l = 0; l < t.cos_part[static_cast<size_t>(j)].size(); ++l) {
        Interval np(Rational(Integer(n)) , prec);
        Interval nl = np.pow(static_cast<unsigned>(l));
        Interval cs(Rational(0), prec), sn(Rational(0), prec);
        for (int m = 0; m < rf.dim; ++m) {
          Interval xm(x[static_cast<size_t>(m)], prec);
          cs += t.cos_part[static_cast<size_t>(j)][l][static_cast<size_t>(m)].enclosure(prec).re * xm;
          if (t.pair) sn += t.sin_part[static_cast<size_t>(j)][l][static_cast<size_t>(m)].enclosure(prec).re * xm;
        }
        Interval term = cs * p.re;
        if (t.pair) term += sn * p.im;
        out[static_cast<size_t>(j)] += nl * term;
      }
  }
  return out;
}

}  // namespace

TEST_CASE("closed form of the five-dimensional example") {
  ClosedForm cf = closed_form(testing::example_matrix());
  CHECK(cf.shift == 0);
  REQUIRE(cf.groups.size() == 3);
  const EigenGroup* half = group_of(cf, Poly({Rational(1, 2), Rational(1)}));
  REQUIRE(half);
  for (int j = 0; j < 5; ++j)
    for (int m = 0; m < 5; ++m) CHECK(half->coeff[static_cast<size_t>(j)][0][static_cast<size_t>(m)] == Poly(j == 4 && m == 4 ? 1 : 0));

  const EigenGroup* rot = group_of(cf, Poly({Rational(1), Rational(-6, 5), Rational(1)}));
  REQUIRE(rot);
  REQUIRE(rot->roots.size() == 2);
  for (const auto& root : rot->roots) {
    bool upper = root.box().im_lo > 0;
    CHECK(root.box().contains_point(Rational(3, 5), Rational(upper ? 4 : -4, 5)));
    CInterval c1 = at_root(rot->coeff[0][0][0], root, 96), c2 = at_root(rot->coeff[0][0][1], root, 96);
    // (2 -+ i)/4 x1 +- i/4 x2
    CHECK(near(c1, Rational(1, 2), Rational(upper ? -1 : 1, 4)));
    CHECK(near(c2, Rational(0), Rational(upper ? 1 : -1, 4)));
  }
}

TEST_CASE("identity and Jordan blocks") {
  ClosedForm id = closed_form(RationalMatrix::identity(2));
  REQUIRE(id.groups.size() == 1);
  CHECK(id.groups[0].multiplicity == 2);
  CHECK(id.groups[0].coeff[0][0][0] == Poly(1));
  CHECK(id.groups[0].coeff[0][0][1] == Poly());
  CHECK(id.groups[0].coeff[0][1][0] == Poly());

  ClosedForm jb = closed_form(RationalMatrix::from_rows({{2, 1}, {0, 2}}));
  for (long n = 0; n < 12; ++n) {
    RationalVector v = eval_closed_form(jb, {0, 1}, n);
    CHECK(v[0] == Rational(Integer(n)) * Rational(Integer(1) << static_cast<unsigned>(n)) / 2);
    CHECK(v[1] == Rational(Integer(1) << static_cast<unsigned>(n)));
  }
}

TEST_CASE("eigenvalue zero: shift and nilpotent matrices") {
  ClosedForm nil = closed_form(RationalMatrix::from_rows({{0, 1, 0}, {0, 0, 1}, {0, 0, 0}}));
  CHECK(nil.shift == 3);
  CHECK(nil.groups.empty());
  for (long n = 0; n < 6; ++n)
    CHECK(eval_closed_form(nil, {1, 2, 3}, n) == mat_apply_iter(nil.a, {1, 2, 3}, static_cast<unsigned long>(n)));

  RationalMatrix a = RationalMatrix::from_rows({{0, 1, 0}, {0, 0, 0}, {0, 0, Rational(3, 2)}});
  ClosedForm cf = closed_form(a);
  CHECK(cf.shift == 2);
  for (long n = 0; n < 8; ++n)
    CHECK(eval_closed_form(cf, {1, 1, 1}, n) == mat_apply_iter(a, {1, 1, 1}, static_cast<unsigned long>(n)));
}

TEST_CASE("random matrices: exact evaluation and enclosures match iteration") {
  std::mt19937_64 rng(2024);
  Rational tiny(1);
  tiny /= Rational(Integer(1) << 64);
  for (int trial = 0; trial < 12; ++trial) {
    int n = 2 + trial % 3;
    RationalMatrix a = testing::random_matrix(rng, n, 9);
    RationalVector x = testing::random_vector(rng, n, 9);
    ClosedForm cf = closed_form(a);
    RationalVector it = x;
    for (long k = 0; k <= 25; ++k) {
      if (k > 0) it = a * it;
      CHECK(eval_closed_form(cf, x, k) == it);
      if (k >= cf.shift && k % 5 == 0) {
        auto enc = enclose_closed_form(cf, x, k, 64);
        for (int j = 0; j < n; ++j) {
          CHECK(enc[static_cast<size_t>(j)].re.contains(it[static_cast<size_t>(j)]));
          CHECK(enc[static_cast<size_t>(j)].im.contains(Rational(0)));
          CHECK(enc[static_cast<size_t>(j)].re.width() <= tiny);
        }
      }
    }
  }
}

TEST_CASE("repeated eigenvalues") {
  // (x^2 + 1)^2 block structure plus a double real root.
  RationalMatrix a = RationalMatrix::from_rows({
      {0, -1, 1, 0, 0, 0},
      {1, 0, 0, 1, 0, 0},
      {0, 0, 0, -1, 0, 0},
      {0, 0, 1, 0, 0, 0},
      {0, 0, 0, 0, Rational(1, 3), 1},
      {0, 0, 0, 0, 0, Rational(1, 3)},
  });
  ClosedForm cf = closed_form(a);
  RationalVector x{1, -2, 3, Rational(1, 2), 5, 7};
  RationalVector it = x;
  for (long k = 0; k <= 20; ++k) {
    if (k > 0) it = a * it;
    CHECK(eval_closed_form(cf, x, k) == it);
  }
}

TEST_CASE("real form of the example") {
  ClosedForm cf = closed_form(testing::example_matrix());
  RealForm rf = realify(cf);
  std::vector<std::string> names{"x1", "x2", "x3", "x4", "x5"};
  const RealTerm* rot = nullptr;
  const RealTerm* third = nullptr;
  for (const auto& t : rf.terms) {
    if (t.pair && t.eigenvalue.minpoly() == Poly({Rational(1), Rational(-6, 5), Rational(1)})) rot = &t;
    if (t.pair && t.eigenvalue.minpoly() == Poly({1, 1, 1})) third = &t;
  }
  REQUIRE(rot);
  REQUIRE(third);
  auto q = [](const AlgebraicNumber& a) { return a.rational_value(); };
  // f1 = x1 cos + (x1 - x2)/2 sin, f2 = x2 cos + (5x1 - x2)/2 sin
  CHECK(q(rot->cos_part[0][0][0]) == 1);
  CHECK(q(rot->cos_part[0][0][1]) == 0);
  CHECK(q(rot->sin_part[0][0][0]) == Rational(1, 2));
  CHECK(q(rot->sin_part[0][0][1]) == Rational(-1, 2));
  CHECK(q(rot->cos_part[1][0][1]) == 1);
  CHECK(q(rot->sin_part[1][0][0]) == Rational(5, 2));
  CHECK(q(rot->sin_part[1][0][1]) == Rational(-1, 2));
  // f3 = x3 cos + (sqrt3 x3 + 4 sqrt3 x4)/3 sin
  CHECK(q(third->cos_part[2][0][2]) == 1);
  AlgebraicNumber s33 = third->sin_part[2][0][2], s34 = third->sin_part[2][0][3];
  CHECK(s33.minpoly() == Poly({Rational(-1, 3), 0, 1}));
  CHECK(s33.sign() > 0);
  CHECK(s34.minpoly() == Poly({Rational(-16, 3), 0, 1}));
  CHECK(to_string(rf, 4, names) == "x5*(-1/2)^n");
  CHECK(to_string(rf, 0, names) == "x1*cos(n*t1) + (1/2*x1 - 1/2*x2)*sin(n*t1)");
}

TEST_CASE("real forms agree with iteration") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 6; ++trial) {
    int n = 2 + trial % 2;
    RationalMatrix a = testing::random_matrix(rng, n, 6);
    RationalVector x = testing::random_vector(rng, n, 6);
    ClosedForm cf = closed_form(a);
    RealForm rf = realify(cf);
    RationalVector it = x;
    for (long k = 0; k <= 20; ++k) {
      if (k > 0) it = a * it;
      if (k < cf.shift) continue;
      auto v = eval_real_form(rf, x, k, 256);
      for (int j = 0; j < n; ++j) CHECK(v[static_cast<size_t>(j)].contains(it[static_cast<size_t>(j)]));
    }
  }
  ClosedForm diag = closed_form(RationalMatrix::from_rows({{2, 0}, {0, Rational(-1, 3)}}));
  for (const auto& t : realify(diag).terms) CHECK_FALSE(t.pair);
}
