#include "cubicslice/family.hpp"

#include <cmath>
#include <numbers>

namespace cubicslice {

namespace {
constexpr double kEqTol = 1e-12;

bool close(cplx x, cplx y, double scale) {
  return std::abs(x - y) <= kEqTol * std::max(1.0, scale);
}
}  // namespace

cplx eval_cubic(const CubicSlicePoint& p, cplx z) {
  const cplx u = 1.0 / p.c;
  return p.lambda * z * (1.0 - 0.5 * (1.0 + u) * z + (u / 3.0) * z * z);
}

cplx eval_cubic_deriv(const CubicSlicePoint& p, cplx z) {
  const cplx u = 1.0 / p.c;
  return p.lambda * (1.0 - (1.0 + u) * z + u * z * z);
}

UnmarkedCoords coordinates(const CubicSlicePoint& p) {
  UnmarkedCoords out;
  out.v = 0.5 * (p.c + 1.0 / p.c);
  out.a = 0.5 * p.lambda * (1.0 - out.v);
  const cplx t = 1.0 + (out.v - 2.0) * p.lambda / 3.0;
  out.b2 = (p.lambda / 3.0) * (0.5 * (out.v + 1.0)) * t * t;
  return out;
}

cplx c_from_v(cplx v) {
  // The two roots of c^2 - 2vc + 1 are reciprocal; keep the one with
  // |c| >= 1, preferring v + sqrt(v^2-1) when both lie on the unit circle.
  const cplx s = std::sqrt(v * v - 1.0);
  cplx c = v + s;
  if (std::abs(c) < 1.0) c = v - s;
  if (std::abs(c) < 0.5) c = 1.0 / c;  // guard against cancellation near v = -1
  return c;
}

int fiber_cardinality(cplx a, cplx b2) {
  const double scale = std::max(std::abs(a), std::abs(b2));
  if (close(b2, 0.0, scale)) {
    if (close(a, 0.0, scale)) return 1;        // z^3
    if (close(a, 1.0, scale)) return 1;        // z + z^3, triple fixed point
    if (close(a, 1.5, scale)) return 1;        // both critical points fixed
    return 2;                                  // symmetric, b = 0
  }
  // Double fixed point iff the discriminant of z^3 + (a-1)z + b vanishes:
  // disc = -4(a-1)^3 - 27 b^2.
  const cplx pm1 = a - 1.0;
  const cplx disc = -4.0 * pm1 * pm1 * pm1 - 27.0 * b2;
  const double dscale = 4.0 * std::pow(std::max(1.0, std::abs(pm1)), 3) +
                        27.0 * std::abs(b2);
  if (std::abs(disc) <= kEqTol * dscale) {
    // Critical fixed point iff b2 + (a/3)(1 - 2a/3)^2 = 0; combined with
    // disc = 0 this is the single class (a, b2) = (4/3, -4/729).
    const cplx w = 1.0 - 2.0 * a / 3.0;
    const cplx crit = b2 + (a / 3.0) * w * w;
    if (std::abs(crit) <= kEqTol * std::max(1.0, std::abs(b2))) return 1;
    return 2;
  }
  return 3;
}

double escape_radius(const CubicSlicePoint& p) {
  const double ac = std::abs(p.c);
  const double al = std::abs(p.lambda);
  return std::max({std::sqrt(6.0 * ac / al), 6.0 * std::abs(p.c + 1.0),
                   std::sqrt(12.0 * ac)});
}

cplx root_of_unity(long long p, long long q) {
  const double t = 2.0 * std::numbers::pi * static_cast<double>(p) /
                   static_cast<double>(q);
  return {std::cos(t), std::sin(t)};
}

cplx eval_quadratic(cplx lambda, cplx z) {
  return lambda * z * (1.0 - 0.5 * z);
}

}  // namespace cubicslice
