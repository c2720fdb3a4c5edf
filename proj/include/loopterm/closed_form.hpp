#pragma once
// Closed form of A^n X as an exponential polynomial in n.
//
// For every irreducible factor g of the characteristic polynomial (other than x)
// the coefficient polynomials are stored once, as elements of Q[y]/(g); the
// coefficient attached to a root xi of g is obtained by substituting y = xi.
// The representation is exact for n >= shift, where shift is the multiplicity
// of the eigenvalue 0.

#include "loopterm/algebraic.hpp"
#include "loopterm/matrix.hpp"
#include "loopterm/root_expr.hpp"

#include <string>
#include <vector>

namespace loopterm {

struct EigenGroup {
  Poly factor;  // monic irreducible, factor(0) != 0
  int multiplicity = 0;
  std::vector<AlgebraicNumber> roots;
  // coeff[j][l][m]: coefficient of n^l * x_{m+1} in coordinate j, as a polynomial in y.
  std::vector<std::vector<std::vector<Poly>>> coeff;

  int max_degree() const { return multiplicity - 1; }
};

struct ClosedForm {
  RationalMatrix a;
  Poly charpoly;
  int shift = 0;
  std::vector<EigenGroup> groups;

  int dim() const { return a.rows(); }
};

ClosedForm closed_form(const RationalMatrix& a);

// Exact A^n x0 (iterates directly when n < shift).
RationalVector eval_closed_form(const ClosedForm& cf, const RationalVector& x0, long n);

// Per-coordinate enclosures of sum over eigenvalues of p(n) xi^n, evaluated at the
// isolated roots. Widths at most 2^-bits. Requires n >= shift.
std::vector<CInterval> enclose_closed_form(const ClosedForm& cf, const RationalVector& x0, long n, long bits);

// Real trigonometric form. Real eigenvalues give xi^n * sum n^l c(X); a conjugate
// pair r e^{+-i t} gives r^n * sum n^l (c(X) cos(n t) + s(X) sin(n t)).
struct RealTerm {
  AlgebraicNumber eigenvalue;  // real, or the member of its pair with positive imaginary part
  AlgebraicNumber modulus;
  bool pair = false;
  // [j][l][m], real algebraic numbers; sin_part is empty for real eigenvalues.
  std::vector<std::vector<std::vector<AlgebraicNumber>>> cos_part, sin_part;
};

struct RealForm {
  int dim = 0;
  int shift = 0;
  std::vector<RealTerm> terms;
};

RealForm realify(const ClosedForm& cf);
std::string to_string(const RealForm& rf, int coordinate, const std::vector<std::string>& names);
std::string to_string(const ClosedForm& cf, const std::vector<std::string>& names);

AlgebraicNumber imaginary_unit();

// Binds the eigenvalues of a closed form to symbols of an ExprRing. Both roots of
// a quadratic factor share one symbol (the second is the trace minus the first).
class EigenSymbols {
 public:
  EigenSymbols(const ClosedForm& cf, ExprRing& ring);
  // Value of p(y) at root r of group g.
  RootExpr at(int g, int r, const Poly& p) const;
  RootExpr root(int g, int r) const { return at(g, r, Poly::x()); }
  // Index of the root of group g conjugate to root r.
  int conjugate(int g, int r) const { return conj_[static_cast<size_t>(g)][static_cast<size_t>(r)]; }

 private:
  struct Slot {
    int symbol = -1;  // -1 for a rational root
    Poly image;       // polynomial in the symbol giving this root
  };
  const ClosedForm* cf_;
  ExprRing* ring_;
  std::vector<std::vector<Slot>> slots_;
  std::vector<std::vector<int>> conj_;
};

// Short display of a real algebraic number: exact rational, or root(...) with a decimal.
std::string display(const AlgebraicNumber& a);

}  // namespace loopterm
