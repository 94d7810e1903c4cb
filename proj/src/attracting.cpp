#include "cubicslice/attracting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "cubicslice/parallel.hpp"

namespace cubicslice {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Contraction radius: for |z| below this, |P(z)| < |z| strictly, so the
// orbit is attracted. Derived from |P(z)| <= |lambda||z|(1 + K|z|) with
// K = |1+1/c|/2 + |z|/(3|c|).
double contraction_radius(const CubicSlicePoint& p) {
  const double al = std::abs(p.lambda);
  const double k0 = 0.5 * std::abs(1.0 + 1.0 / p.c) + 1.0 / (3.0 * std::abs(p.c));
  return std::min(1.0, 0.5 * (1.0 / al - 1.0) / k0);
}

}  // namespace

double phi_mag(const PhiResult& p) {
  if (p.escaped) return kInf;
  if (p.undecided) return std::numeric_limits<double>::quiet_NaN();
  return std::abs(p.value);
}

OrbitClass classify_orbit(const CubicSlicePoint& p, cplx z, int max_iter) {
  const double esc = escape_radius(p);
  const double eps = contraction_radius(p);
  for (int n = 0; n < max_iter; ++n) {
    const double m = std::abs(z);
    if (m > esc) return {OrbitTag::Escaped, n};
    if (m <= eps) return {OrbitTag::AttractedToZero, n};
    z = eval_cubic(p, z);
  }
  return {OrbitTag::Undecided, max_iter};
}

PhiResult phi(const CubicSlicePoint& p, cplx z, int max_iter) {
  // phi(z) = z * prod_n P(z_n)/(lambda z_n); the literal z_n/lambda^n
  // underflows doubles near n ~ 800 for |lambda| = 0.4 while the product
  // form stays O(1) per factor. One refinement pass: stop once the factor
  // is within 1e-13 of 1 inside the contraction zone.
  PhiResult out;
  const double esc = escape_radius(p);
  const double eps = contraction_radius(p);
  const cplx u = 1.0 / p.c;
  cplx w = z;
  for (int n = 0; n < max_iter; ++n) {
    const double m = std::abs(z);
    if (m > esc) {
      out.escaped = true;
      out.iterations = n;
      return out;
    }
    const cplx factor = 1.0 - 0.5 * (1.0 + u) * z + (u / 3.0) * z * z;
    if (m <= eps && std::abs(factor - 1.0) <= 1e-13) {
      out.value = w;
      out.iterations = n;
      return out;
    }
    w *= factor;
    z = p.lambda * z * factor;
  }
  out.undecided = true;
  out.iterations = max_iter;
  return out;
}

AttractingRadius radius_attracting(const CubicSlicePoint& p, int order) {
  AttractingRadius out;
  const CoeffSequence seq = linearize_cubic(p, order);
  out.estimate = hadamard_radius(seq);
  out.r = out.estimate.r_hat;
  out.phi_1 = phi(p, cplx(1.0));
  out.phi_c = phi(p, p.c);
  out.tolerance_used = std::max(1e-3, 3.0 * out.estimate.uncertainty);

  const double m1 = std::abs(phi_mag(out.phi_1) - out.r) / out.r;
  const double mc = std::abs(phi_mag(out.phi_c) - out.r) / out.r;
  const bool in1 = m1 <= out.tolerance_used;
  const bool inc = mc <= out.tolerance_used;
  if (in1 && inc) {
    out.main = MainCritical::Both;
  } else if (in1) {
    out.main = MainCritical::CritOne;
  } else if (inc) {
    out.main = MainCritical::CritC;
  } else if (std::min(m1, mc) <= 10.0 * out.tolerance_used) {
    out.main = (m1 <= mc) ? MainCritical::CritOne : MainCritical::CritC;
  } else {
    out.main = MainCritical::NoMatch;
  }
  return out;
}

double quadratic_like_bound(cplx lambda) {
  return (49.0 / (49.0 / 2.0 - 17.0)) * (0.5 + 7.0 / (3.0 * std::abs(lambda)));
}

namespace {

// log|phi(c)| - log|phi(1)| along the slice; vanishes on Z_lambda.
double phi_gap(cplx lambda, cplx c, int max_iter) {
  const CubicSlicePoint pt{lambda, c};
  const double mc = phi_mag(phi(pt, c, max_iter));
  const double m1 = phi_mag(phi(pt, cplx(1.0), max_iter));
  if (mc == kInf && m1 == kInf) return 0.0;  // not expected on a ray
  if (mc == kInf) return kInf;
  if (m1 == kInf) return -kInf;
  return std::log(mc) - std::log(m1);
}

struct RayResult {
  ZCurvePoint point;
  bool ok = false;
};

RayResult trace_ray(cplx lambda, int ray, int n_rays, const ZCurveOptions& opt) {
  RayResult res;
  res.point.ray_index = ray;
  const double angle = 2.0 * std::numbers::pi * ray / n_rays;
  const cplx dir{std::cos(angle), std::sin(angle)};
  const double bound = quadratic_like_bound(lambda);

  auto classify = [&](double rho) {
    return radius_attracting({lambda, rho * dir}, opt.order).main;
  };

  double lo = 1.0 / bound;
  double hi = bound;
  unsigned flags = 0;

  const MainCritical at_lo = classify(lo);
  const MainCritical at_hi = classify(hi);
  if (at_lo != MainCritical::CritC || at_hi != MainCritical::CritOne) {
    // Classification not as Theorem ll predicts at the extremes (estimator
    // failure); fall back to a dense scan for the transition.
    flags |= kZRayFallbackScan;
    const int samples = 512;
    double prev_rho = lo;
    MainCritical prev = at_lo;
    bool found = false;
    for (int i = 1; i <= samples; ++i) {
      const double rho = lo * std::pow(hi / lo, static_cast<double>(i) / samples);
      const MainCritical cls = classify(rho);
      if ((prev == MainCritical::CritC || prev == MainCritical::Both) &&
          cls == MainCritical::CritOne) {
        lo = prev_rho;
        hi = rho;
        found = true;
        break;
      }
      prev = cls;
      prev_rho = rho;
    }
    if (!found) return res;
  } else {
    // Bisection in log rho on the classification. Both/NoMatch mean the
    // matching band around the curve was hit: shrink to that band and let
    // the polish take over from there.
    for (int it = 0; it < 40 && hi / lo > 1.0 + 1e-6; ++it) {
      const double mid = std::sqrt(lo * hi);
      const MainCritical cls = classify(mid);
      if (cls == MainCritical::CritOne) {
        hi = mid;
      } else if (cls == MainCritical::CritC) {
        lo = mid;
      } else {
        lo = std::max(lo, mid / 1.06);
        hi = std::min(hi, mid * 1.06);
        break;
      }
    }
  }

  // Polish on the necessary condition |phi(c)| = |phi(1)| (Eq. rpc gives
  // equality when both critical points sit on the boundary of U). The
  // classification bracket pins the right component of this locus; the
  // bracket can sit off the curve by the matching-band width, so expand by
  // a fixed factor until the sign changes.
  double a = lo, b = hi;
  double sa = phi_gap(lambda, a * dir, opt.max_iter);
  double sb = phi_gap(lambda, b * dir, opt.max_iter);
  for (int grow = 0; grow < 20 && sa * sb > 0.0; ++grow) {
    a /= 1.05;
    b *= 1.05;
    sa = phi_gap(lambda, a * dir, opt.max_iter);
    sb = phi_gap(lambda, b * dir, opt.max_iter);
  }
  double rho_star;
  if (sa * sb <= 0.0) {
    for (int it = 0; it < 100 && b / a > 1.0 + 1e-14; ++it) {
      const double mid = std::sqrt(a * b);
      const double sm = phi_gap(lambda, mid * dir, opt.max_iter);
      if ((sm <= 0.0) == (sa <= 0.0)) {
        a = mid;
        sa = sm;
      } else {
        b = mid;
        sb = sm;
      }
    }
    rho_star = std::sqrt(a * b);
  } else {
    flags |= kZRayNoPolish;
    rho_star = std::sqrt(lo * hi);
  }

  const cplx c_star = rho_star * dir;
  const CubicSlicePoint pt{lambda, c_star};
  const PhiResult pc = phi(pt, c_star, opt.max_iter);
  const PhiResult p1 = phi(pt, cplx(1.0), opt.max_iter);
  res.point.c = c_star;
  res.point.psi = pc.value / p1.value;
  res.point.flags = flags;
  res.ok = !pc.escaped && !p1.escaped && !pc.undecided && !p1.undecided;

  // On Z_lambda both critical points are on the boundary of U, so both
  // |phi| must match the series radius. A zero of the phi gap that fails
  // this is a spurious component of the necessary-condition locus.
  if (res.ok) {
    const AttractingRadius check = radius_attracting({lambda, c_star}, opt.order);
    const double m1 = std::abs(phi_mag(check.phi_1) - check.r) / check.r;
    const double mc = std::abs(phi_mag(check.phi_c) - check.r) / check.r;
    res.ok = std::max(m1, mc) <= 10.0 * check.tolerance_used;
  }
  return res;
}

}  // namespace

std::vector<ZCurvePoint> zcurve(cplx lambda, int n_rays, const ZCurveOptions& opt) {
  if (!(std::abs(lambda) > 0.0 && std::abs(lambda) < 1.0)) {
    throw std::invalid_argument("zcurve: need 0 < |lambda| < 1");
  }
  if (n_rays < 16) throw std::invalid_argument("zcurve: n_rays < 16");
  std::vector<RayResult> results(n_rays);
  parallel_for(n_rays, resolve_threads(opt.threads), [&](long k) {
    results[k] = trace_ray(lambda, static_cast<int>(k), n_rays, opt);
  });
  std::vector<ZCurvePoint> out;
  out.reserve(n_rays);
  for (auto& r : results) {
    if (r.ok) out.push_back(r.point);
  }
  return out;
}

}  // namespace cubicslice
