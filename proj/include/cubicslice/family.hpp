#pragma once

#include <complex>

namespace cubicslice {

using cplx = std::complex<double>;

// A cubic polynomial P_{lambda,c}(z) = lambda z (1 - (1+1/c)z/2 + z^2/(3c)):
// 0 is fixed with multiplier lambda, the critical points are 1 and c.
struct CubicSlicePoint {
  cplx lambda;
  cplx c;
};

// Coordinates of the unmarked conjugacy class: v identifies c with 1/c,
// (a, b2) the class of the monic centred form z^3 + a z + b with b2 = b^2.
struct UnmarkedCoords {
  cplx v;
  cplx a;
  cplx b2;
};

cplx eval_cubic(const CubicSlicePoint& p, cplx z);
cplx eval_cubic_deriv(const CubicSlicePoint& p, cplx z);

UnmarkedCoords coordinates(const CubicSlicePoint& p);

// Inverts v = (c + 1/c)/2, returning the branch with |c| >= 1.
cplx c_from_v(cplx v);

// Number of markings (lambda, v) of the unmarked class (a, b2): 1, 2 or 3.
// Equality tests use relative tolerance 1e-12.
int fiber_cardinality(cplx a, cplx b2);

// Radius of a trap in the basin of infinity: |z| > R escapes.
double escape_radius(const CubicSlicePoint& p);

// e^{2 pi i p/q} from cos/sin in double precision.
cplx root_of_unity(long long p, long long q);

// The quadratic limit Q_lambda(z) = lambda z (1 - z/2) of P_{lambda,c} as
// c -> infinity.
cplx eval_quadratic(cplx lambda, cplx z);

}  // namespace cubicslice
