#include "cubicslice/parabolic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>

#include <mpfr.h>

namespace cubicslice {

namespace {

// Polynomials in u, plain coefficient vectors. Degrees stay tight: the
// z^m coefficient of any iterate has u-degree at most m-1, so nothing here
// ever exceeds degree q for the z-degrees we keep.
using upoly = std::vector<cplx>;

upoly mul(const upoly& a, const upoly& b, int cap) {
  if (a.empty() || b.empty()) return {};
  const int deg = std::min<int>(cap, static_cast<int>(a.size() + b.size()) - 2);
  upoly out(deg + 1, cplx(0.0));
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == cplx(0.0)) continue;
    const size_t jmax = std::min(b.size(), static_cast<size_t>(deg + 1) - i);
    for (size_t j = 0; j < jmax; ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

void add_scaled(upoly& acc, const upoly& a, cplx s, int shift, int cap) {
  const int need = static_cast<int>(a.size()) + shift;
  if (static_cast<int>(acc.size()) < std::min(need, cap + 1)) {
    acc.resize(std::min(need, cap + 1), cplx(0.0));
  }
  for (size_t i = 0; i < a.size(); ++i) {
    const int k = static_cast<int>(i) + shift;
    if (k > cap) break;
    acc[k] += s * a[i];
  }
}

}  // namespace

cplx UPoly::eval(cplx u) const {
  cplx acc(0.0);
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * u + *it;
  return acc;
}

double UPoly::eval_scale(cplx u) const {
  double acc = 0.0;
  const double au = std::abs(u);
  double uk = 1.0;
  for (const auto& ck : coeffs) {
    acc += std::abs(ck) * uk;
    uk *= au;
  }
  return acc;
}

UPoly cq_poly(long long p, long long q) {
  if (q < 1 || std::gcd(p, q) != 1) {
    throw std::invalid_argument("cq_poly: need gcd(p,q)=1, q >= 1");
  }
  const cplx lambda = root_of_unity(p, q);
  const int n_top = static_cast<int>(q) + 1;
  const int ucap = static_cast<int>(q);

  // Resonant normal form. The linearizing recursion
  //   h_n = (lambda^n - lambda)^{-1} (a2 [h^2]_n + a3 [h^3]_n)
  // runs cleanly for n = 2..q (gcd(p,q) = 1 keeps the divisors away from
  // zero below n = q+1); the obstructed numerator at n = q+1 is the normal
  // form coefficient A, and the q-th iterate picks up
  //   C = q lambda^{q-1} A,
  // with lambda^{q-1} = conj(lambda). Composing P with itself q times gives
  // the same polynomial in exact arithmetic but blows up intermediate
  // z-coefficients, which costs the small end coefficients all their
  // accuracy by q ~ 55; the recursion keeps every intermediate on the
  // scale of the answer.
  const upoly a2 = {-0.5 * lambda, -0.5 * lambda};     // -lambda (1+u)/2
  const upoly a3 = {cplx(0.0), lambda / 3.0};          // lambda u / 3
  std::vector<upoly> h(n_top + 1), sq(n_top + 1);
  h[1] = {cplx(1.0)};

  upoly obstruction;
  cplx lam_n = lambda;
  for (int n = 2; n <= n_top; ++n) {
    lam_n *= lambda;
    upoly s2;
    for (int i = 1; i <= n - 1; ++i) {
      add_scaled(s2, mul(h[i], h[n - i], ucap), cplx(1.0), 0, ucap);
    }
    sq[n] = s2;
    upoly s3;
    for (int i = 1; i <= n - 2; ++i) {
      add_scaled(s3, mul(h[i], sq[n - i], ucap), cplx(1.0), 0, ucap);
    }
    upoly num;
    add_scaled(num, mul(a2, s2, ucap), cplx(1.0), 0, ucap);
    add_scaled(num, mul(a3, s3, ucap), cplx(1.0), 0, ucap);
    if (n <= static_cast<int>(q)) {
      const cplx divisor = lam_n - lambda;
      for (auto& ck : num) ck /= divisor;
      h[n] = std::move(num);
    } else {
      obstruction = std::move(num);
    }
  }

  UPoly out;
  out.p = p;
  out.q = q;
  out.coeffs = std::move(obstruction);
  out.coeffs.resize(ucap + 1, cplx(0.0));
  const cplx factor = static_cast<double>(q) * std::conj(lambda);
  for (auto& ck : out.coeffs) ck *= factor;
  if (out.coeffs.back() == cplx(0.0)) {
    throw ZeroLeading("cq_poly: leading coefficient vanished");
  }
  return out;
}

cplx quadratic_c(long long p, long long q) {
  if (q < 1 || std::gcd(p, q) != 1) {
    throw std::invalid_argument("quadratic_c: need gcd(p,q)=1, q >= 1");
  }
  // Scalar version of the normal-form route in cq_poly, for Q_lambda.
  const cplx lambda = root_of_unity(p, q);
  const cplx a2 = -0.5 * lambda;
  const int n_top = static_cast<int>(q) + 1;
  std::vector<cplx> h(n_top + 1, cplx(0.0)), sq(n_top + 1, cplx(0.0));
  h[1] = 1.0;
  cplx c0(0.0);
  cplx lam_n = lambda;
  for (int n = 2; n <= n_top; ++n) {
    lam_n *= lambda;
    cplx s2(0.0);
    for (int i = 1; i <= n - 1; ++i) s2 += h[i] * h[n - i];
    sq[n] = s2;
    if (n <= static_cast<int>(q)) {
      h[n] = a2 * s2 / (lam_n - lambda);
    } else {
      c0 = static_cast<double>(q) * std::conj(lambda) * a2 * s2;
    }
  }
  if (!(std::abs(c0) > 0.0) || !std::isfinite(std::abs(c0))) {
    throw ZeroLeading("quadratic_c: z^{q+1} coefficient underflowed");
  }
  return c0;
}

namespace {

cplx horner(const std::vector<cplx>& a, cplx x) {
  cplx acc(0.0);
  for (auto it = a.rbegin(); it != a.rend(); ++it) acc = acc * x + *it;
  return acc;
}

// Compensated (double-double) Horner, for sharpening the Aberth sweep once
// plain evaluation noise stalls it. Error-free transforms via fma.
struct dd {
  double hi = 0.0, lo = 0.0;
};

inline dd two_sum(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  return {s, (a - (s - bb)) + (b - bb)};
}

inline dd dd_add(dd a, dd b) {
  dd s = two_sum(a.hi, b.hi);
  s.lo += a.lo + b.lo;
  return two_sum(s.hi, s.lo);
}

inline dd dd_mul(dd a, dd b) {
  const double p = a.hi * b.hi;
  dd r{p, std::fma(a.hi, b.hi, -p)};
  r.lo += a.hi * b.lo + a.lo * b.hi;
  return two_sum(r.hi, r.lo);
}

cplx horner_dd(const std::vector<cplx>& a, cplx x) {
  const dd xr{x.real(), 0.0}, xi{x.imag(), 0.0};
  dd re{}, im{};
  for (auto it = a.rbegin(); it != a.rend(); ++it) {
    const dd rr = dd_mul(re, xr);
    const dd ii = dd_mul(im, xi);
    const dd ri = dd_mul(re, xi);
    const dd ir = dd_mul(im, xr);
    re = dd_add(dd_add(rr, dd{-ii.hi, -ii.lo}), dd{it->real(), 0.0});
    im = dd_add(dd_add(ri, ir), dd{it->imag(), 0.0});
  }
  return {re.hi + re.lo, im.hi + im.lo};
}

// MPFR-backed complex value for the final Newton polish. The coefficient
// spread of C-hat grows like e^{0.4 q} (already ~1e10 at q = 89, ~1e24 at
// q = 144), which puts the plain-double Horner noise floor far above the
// 1e-10 residual gate near the roots; the polish runs at 320 bits.
struct MpfrComplex {
  mpfr_t re, im;
  explicit MpfrComplex(mpfr_prec_t prec) {
    mpfr_init2(re, prec);
    mpfr_init2(im, prec);
    mpfr_set_zero(re, 1);
    mpfr_set_zero(im, 1);
  }
  MpfrComplex(const MpfrComplex&) = delete;
  MpfrComplex& operator=(const MpfrComplex&) = delete;
  ~MpfrComplex() {
    mpfr_clear(re);
    mpfr_clear(im);
  }
  void set(cplx z) {
    mpfr_set_d(re, z.real(), MPFR_RNDN);
    mpfr_set_d(im, z.imag(), MPFR_RNDN);
  }
  cplx get() const {
    return {mpfr_get_d(re, MPFR_RNDN), mpfr_get_d(im, MPFR_RNDN)};
  }
};

class MpfrPolisher {
 public:
  explicit MpfrPolisher(const std::vector<cplx>& coeffs)
      : coeffs_(coeffs), tmp_(kPrec), t2_(kPrec), u_(kPrec), trial_(kPrec),
        p_(kPrec), d_(kPrec) {}


  // In-place damped Newton refinement; returns |p(u)| at the refined root.
  double polish(cplx& root, int iterations) {
    u_.set(root);
    eval(u_, p_, /*derivative=*/false);
    double pmag = std::abs(p_.get());
    for (int it = 0; it < iterations; ++it) {
      eval(u_, d_, /*derivative=*/true);
      const cplx pv = p_.get();
      const cplx dv = d_.get();
      if (std::abs(dv) == 0.0 || pmag == 0.0) break;
      cplx step = pv / dv;
      double trial_mag = pmag;
      for (int halve = 0; halve < 8; ++halve) {
        mpfr_sub_d(trial_.re, u_.re, step.real(), MPFR_RNDN);
        mpfr_sub_d(trial_.im, u_.im, step.imag(), MPFR_RNDN);
        eval(trial_, p_, false);
        trial_mag = std::abs(p_.get());
        if (trial_mag <= pmag || halve == 7) break;
        step *= 0.5;
      }
      mpfr_set(u_.re, trial_.re, MPFR_RNDN);
      mpfr_set(u_.im, trial_.im, MPFR_RNDN);
      pmag = trial_mag;
      if (std::abs(step) <= 1e-40 * (1.0 + std::abs(root))) break;
    }
    root = u_.get();
    eval(u_, p_, false);
    return std::abs(p_.get());
  }

 private:
  static constexpr mpfr_prec_t kPrec = 320;

  // Horner at u_ into out; optionally of the derivative.
  void eval(const MpfrComplex& u, MpfrComplex& out, bool derivative) {
    mpfr_set_zero(out.re, 1);
    mpfr_set_zero(out.im, 1);
    const int n = static_cast<int>(coeffs_.size()) - 1;
    for (int k = n; k >= (derivative ? 1 : 0); --k) {
      // out *= u   (tmp = re*ur - im*ui; t2 = re*ui + im*ur)
      mpfr_mul(tmp_.re, out.re, u.re, MPFR_RNDN);
      mpfr_fms(tmp_.re, out.im, u.im, tmp_.re, MPFR_RNDN);
      mpfr_neg(tmp_.re, tmp_.re, MPFR_RNDN);
      mpfr_mul(t2_.re, out.re, u.im, MPFR_RNDN);
      mpfr_fma(t2_.re, out.im, u.re, t2_.re, MPFR_RNDN);
      mpfr_set(out.re, tmp_.re, MPFR_RNDN);
      mpfr_set(out.im, t2_.re, MPFR_RNDN);
      const double mult = derivative ? static_cast<double>(k) : 1.0;
      mpfr_add_d(out.re, out.re, mult * coeffs_[k].real(), MPFR_RNDN);
      mpfr_add_d(out.im, out.im, mult * coeffs_[k].imag(), MPFR_RNDN);
    }
  }

  const std::vector<cplx>& coeffs_;
  MpfrComplex tmp_, t2_, u_, trial_, p_, d_;
};

// One Aberth run: a plain-double phase until it converges or stalls at its
// evaluation noise floor, then a compensated phase that drops the floor far
// below the root separation 2 pi / q. Roots settle individually (an almost
// singular Aberth denominator occasionally kicks one root violently, which
// would otherwise keep the whole sweep alive forever). True when the roots
// are localized well enough for the extended-precision polish to finish.
bool aberth_pass(const std::vector<cplx>& monic, const std::vector<cplx>& deriv,
                 std::vector<cplx>& roots, int max_sweeps, int& sweeps_used) {
  const int n = static_cast<int>(roots.size());
  std::vector<char> settled(n, 0);
  double best = std::numeric_limits<double>::infinity();
  int since_best = 0;
  bool compensated = false;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double worst = 0.0;
    bool all_settled = true;
    for (int i = 0; i < n; ++i) {
      if (settled[i]) continue;
      const cplx pv =
          compensated ? horner_dd(monic, roots[i]) : horner(monic, roots[i]);
      const cplx dv = horner(deriv, roots[i]);
      cplx newton = (dv == cplx(0.0)) ? cplx(0.0) : pv / dv;
      cplx rep(0.0);
      for (int j = 0; j < n; ++j) {
        if (j != i) rep += 1.0 / (roots[i] - roots[j]);
      }
      const cplx denom = 1.0 - newton * rep;
      cplx step = (denom == cplx(0.0)) ? newton : newton / denom;
      const double limit = 0.5 * (1.0 + std::abs(roots[i]));
      if (std::abs(step) > limit) step *= limit / std::abs(step);
      roots[i] -= step;
      if (!std::isfinite(std::abs(roots[i])) || std::abs(roots[i]) > 1e3) {
        roots[i] = std::polar(1.0, 2.0 * std::numbers::pi * i / n);
        worst = 1.0;
        all_settled = false;
        continue;
      }
      const double rel = std::abs(step) / (1.0 + std::abs(roots[i]));
      if (compensated && rel < 5e-14) {
        settled[i] = 1;
      } else {
        all_settled = false;
        worst = std::max(worst, rel);
      }
    }
    if (all_settled || (!compensated && worst < 1e-13)) {
      sweeps_used = sweep + 1;
      return true;
    }
    if (worst < 0.95 * best) {
      best = std::min(best, worst);
      since_best = 0;
    } else if (++since_best >= 40) {
      if (!compensated) {
        compensated = true;
        best = std::numeric_limits<double>::infinity();
        since_best = 0;
      } else if (best < 1e-3) {
        sweeps_used = sweep + 1;
        return true;
      } else {
        break;
      }
    }
  }
  sweeps_used = max_sweeps;
  return false;
}

}  // namespace

RootReport cq_roots(const UPoly& poly, std::uint64_t seed) {
  const int n = poly.degree();
  if (n < 1) throw std::invalid_argument("cq_roots: degree < 1");
  const cplx lead = poly.coeffs.back();

  // Normalize by the leading coefficient for conditioning.
  std::vector<cplx> monic(poly.coeffs.size());
  for (size_t k = 0; k < poly.coeffs.size(); ++k) monic[k] = poly.coeffs[k] / lead;
  std::vector<cplx> deriv(n);
  for (int k = 1; k <= n; ++k) deriv[k - 1] = static_cast<double>(k) * monic[k];

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(-0.3, 0.3);

  RootReport report;
  const double alead = std::abs(lead);
  MpfrPolisher polisher(poly.coeffs);
  std::string last_failure = "Aberth iteration did not settle in 500 sweeps";
  bool converged = false;
  for (double radius : {1.0, 0.5, 2.0}) {
    std::vector<cplx> roots(n);
    for (int i = 0; i < n; ++i) {
      const double ang =
          2.0 * std::numbers::pi * (i + 0.25 + jitter(rng)) / n;
      roots[i] = radius * cplx(std::cos(ang), std::sin(ang));
    }
    int sweeps = 0;
    if (!aberth_pass(monic, deriv, roots, 500, sweeps)) continue;

    // Newton polish on the original coefficients at extended precision. A
    // root rounded to one double already has residual ~eps x coefficient
    // spread (over the 1e-10 gate past q ~ 55), so the gate is applied to
    // the polished root before rounding.
    std::vector<double> residuals(n, 0.0);
    auto polish_one = [&](int i) {
      const double pv = polisher.polish(roots[i], 40);
      residuals[i] =
          pv / (alead * std::pow(std::max(1.0, std::abs(roots[i])), n));
    };
    for (int i = 0; i < n; ++i) polish_one(i);

    // A candidate can strand on a plateau (leaving some basin doubly
    // targeted); with every other root placed, Vieta's root sum pins the
    // missing one exactly, so a single offender is recoverable in place.
    std::vector<int> bad;
    for (int i = 0; i < n; ++i) {
      if (residuals[i] > 1e-12) bad.push_back(i);
    }
    if (bad.size() == 1) {
      cplx sum(0.0);
      for (int j = 0; j < n; ++j) {
        if (j != bad[0]) sum += roots[j];
      }
      roots[bad[0]] = -monic[n - 1] - sum;
      polish_one(bad[0]);
    }
    double max_residual = 0.0;
    for (int i = 0; i < n; ++i) max_residual = std::max(max_residual, residuals[i]);
    if (max_residual > 1e-10) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "residual %.3e", max_residual);
      last_failure = buf;
      continue;
    }
    // Two Aberth candidates falling into one Newton basin would leave a
    // root of the polynomial unaccounted for.
    bool duplicated = false;
    for (int i = 0; i < n && !duplicated; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (std::abs(roots[i] - roots[j]) < 1e-10 *
            std::max(1.0, std::abs(roots[i]))) {
          duplicated = true;
          break;
        }
      }
    }
    if (duplicated) {
      last_failure = "basin collision during polish";
      continue;
    }
    report.roots = std::move(roots);
    report.sweeps = sweeps;
    report.max_residual = max_residual;
    converged = true;
    break;
  }
  if (!converged) {
    throw NoConvergence("cq_roots: " + last_failure);
  }

  // Multiplicity diagnostics: clusters within the pairing threshold.
  report.cluster_sizes.assign(n, 1);
  for (int i = 0; i < n; ++i) {
    int count = 0;
    for (int j = 0; j < n; ++j) {
      if (std::abs(report.roots[i] - report.roots[j]) < 1e-7) ++count;
    }
    report.cluster_sizes[i] = count;
  }
  return report;
}

DiracMeasure parabolic_measure(long long p, long long q, std::uint64_t seed) {
  const UPoly poly = cq_poly(p, q);
  const RootReport roots = cq_roots(poly, seed);
  DiracMeasure out;
  out.points.reserve(roots.roots.size());
  const double w = 2.0 * std::numbers::pi / static_cast<double>(q);
  for (const auto& u : roots.roots) {
    out.points.push_back(1.0 / u);
    out.weights.push_back(w);
  }
  out.total_mass = 2.0 * std::numbers::pi;
  return out;
}

ParabolicData asymptotic_size(const UPoly& poly, cplx c) {
  if (c == cplx(0.0)) throw std::invalid_argument("asymptotic_size: c = 0");
  ParabolicData out;
  const cplx u = 1.0 / c;
  out.C = poly.eval(u);
  const double scale = poly.eval_scale(u);
  if (std::abs(out.C) <= 1e-12 * scale) {
    out.C = 0.0;
    out.m = 2 * poly.q;
    out.L = std::numeric_limits<double>::infinity();
  } else {
    out.m = poly.q;
    out.L = std::pow(std::abs(out.C), -1.0 / static_cast<double>(poly.q));
  }
  return out;
}

ParabolicData asymptotic_size(long long p, long long q, cplx c) {
  return asymptotic_size(cq_poly(p, q), c);
}

}  // namespace cubicslice
