#pragma once

#include <stdexcept>
#include <vector>

#include "cubicslice/family.hpp"

namespace cubicslice {

// lambda^n == lambda for some 2 <= n <= N: the linearizing series does not
// exist (lambda a low-order root of unity).
struct SmallDivisorZero : std::runtime_error {
  explicit SmallDivisorZero(const std::string& what) : std::runtime_error(what) {}
};

struct OutsideDisk : std::runtime_error {
  explicit OutsideDisk(const std::string& what) : std::runtime_error(what) {}
};

// Coefficients b_1..b_N of the linearizing parametrization psi(z) = sum b_n z^n,
// stored rescaled: scaled[n-1] = b_n * scale^n. The rescaling keeps stored
// magnitudes inside [1e-100, 1e100]; the true coefficients grow like r^-n and
// leave double range long before N when r < 1.
struct CoeffSequence {
  std::vector<cplx> scaled;
  double scale = 1.0;

  int order() const { return static_cast<int>(scaled.size()); }
  // log |b_n|, computed without forming b_n. -inf when b_n = 0.
  double log_abs(int n) const;
  // b_n itself; may overflow to inf for extreme n, prefer log_abs.
  cplx coeff(int n) const;
};

struct RadiusEstimate {
  double r_hat = 0.0;          // geometric mean of the two estimators
  double r_tail = 0.0;         // 1 / max window |b_n|^{1/n}
  double r_fit = 0.0;          // exp(-slope) of log|b_n| vs n
  double uncertainty = 0.0;    // |log(r_tail / r_fit)|
  bool degenerate = false;     // all window coefficients zero; r fields +inf
};

// Solves lambda^n b_n = lambda b_n + a2 [psi^2]_n + a3 [psi^3]_n, b_1 = 1,
// for the map f(z) = lambda z + a2 z^2 + a3 z^3. O(N^2).
CoeffSequence linearize(cplx a2, cplx a3, cplx lambda, int order);

// Coefficients (a2, a3) of P_{lambda,c} and the two convenience drivers.
std::pair<cplx, cplx> cubic_coeffs(const CubicSlicePoint& p);
CoeffSequence linearize_cubic(const CubicSlicePoint& p, int order);
CoeffSequence linearize_quadratic(cplx lambda, int order);

// Cauchy-Hadamard estimate over the tail window [(1-window)N, N]. N >= 64.
RadiusEstimate hadamard_radius(const CoeffSequence& s, double window = 0.5);

struct PsiValue {
  cplx value;
  bool truncated = false;  // last term exceeded 1e-10 x result magnitude
};

// Partial sum of psi at z. Throws OutsideDisk when |z| >= r_hat.
PsiValue eval_psi(const CoeffSequence& s, cplx z, double r_hat);
PsiValue eval_psi(const CoeffSequence& s, cplx z);

}  // namespace cubicslice
