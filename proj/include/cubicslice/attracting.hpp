#pragma once

#include <vector>

#include "cubicslice/family.hpp"
#include "cubicslice/series.hpp"

namespace cubicslice {

enum class OrbitTag { AttractedToZero, Escaped, Undecided };

struct OrbitClass {
  OrbitTag tag = OrbitTag::Undecided;
  int iterations_used = 0;
};

// Extended linearizing coordinate phi(z) = lim P^n(z)/lambda^n on the basin
// of 0. Escaped / Undecided are reported, not thrown.
struct PhiResult {
  cplx value{0.0, 0.0};
  bool escaped = false;
  bool undecided = false;
  int iterations = 0;
};

// |phi|, with Escaped mapped to +infinity (and Undecided to NaN).
double phi_mag(const PhiResult& p);

OrbitClass classify_orbit(const CubicSlicePoint& p, cplx z, int max_iter = 100000);
PhiResult phi(const CubicSlicePoint& p, cplx z, int max_iter = 100000);

enum class MainCritical { CritOne, CritC, Both, NoMatch };

struct AttractingRadius {
  double r = 0.0;             // series estimate of the conformal radius of U
  RadiusEstimate estimate;
  PhiResult phi_1;
  PhiResult phi_c;
  MainCritical main = MainCritical::NoMatch;
  double tolerance_used = 0.0;
};

// Series radius of P_{lambda,c} plus phi at both critical points; the main
// critical point is the one whose |phi| matches r within tolerance
// max(1e-3, 3 x estimator uncertainty). NoMatch (neither within 10x the
// tolerance) is reported on the value so grid sweeps can record it per pixel.
AttractingRadius radius_attracting(const CubicSlicePoint& p, int order = 4096);

struct ZCurvePoint {
  int ray_index = 0;
  cplx c;
  cplx psi;            // phi(c) / phi(1), modulus 1 on the curve
  unsigned flags = 0;
};

// Flag bits for ZCurvePoint.
inline constexpr unsigned kZRayFallbackScan = 1u;  // bisection bracket failed, dense scan used
inline constexpr unsigned kZRayNoPolish = 2u;      // |phi(c)|=|phi(1)| polish did not bracket

struct ZCurveOptions {
  int order = 1024;    // series order for the CritC/CritOne classification
  int threads = 0;
  int max_iter = 100000;
};

// Traces Z_lambda: for each ray arg c = 2 pi k / n_rays, bisects |c| between
// a CritC and a CritOne classification, then polishes the crossing on the
// locus |phi(c)| = |phi(1)|. Points ordered by ray angle.
std::vector<ZCurvePoint> zcurve(cplx lambda, int n_rays, const ZCurveOptions& opt = {});

// |c| beyond which P_{lambda,c} has a quadratic-like restriction with
// critical point 1, so c escapes (49/(49/2-17)) (1/2 + 7/(3|lambda|)).
double quadratic_like_bound(cplx lambda);

}  // namespace cubicslice
