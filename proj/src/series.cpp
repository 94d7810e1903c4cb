#include "cubicslice/series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cubicslice {

namespace {

constexpr double kRescaleHi = 1e100;
constexpr double kRescaleLo = 1e-100;
constexpr double kDivisorZero = 1e-10;

// Multiplies entry k of each array by t^k, k = 1..n. Running power: t is
// always a move towards magnitude 1, so intermediates cannot overflow.
void rescale_prefix(std::vector<cplx>& b, std::vector<cplx>& sq, double t, int n) {
  double tk = 1.0;
  for (int k = 1; k <= n; ++k) {
    tk *= t;
    b[k - 1] *= tk;
    if (k - 2 >= 0 && k - 2 < static_cast<int>(sq.size())) sq[k - 2] *= tk;
  }
}

}  // namespace

double CoeffSequence::log_abs(int n) const {
  const double m = std::abs(scaled[n - 1]);
  if (m == 0.0) return -std::numeric_limits<double>::infinity();
  return std::log(m) - n * std::log(scale);
}

cplx CoeffSequence::coeff(int n) const {
  return scaled[n - 1] * std::pow(scale, -static_cast<double>(n));
}

CoeffSequence linearize(cplx a2, cplx a3, cplx lambda, int order) {
  if (lambda == cplx(0.0)) throw SmallDivisorZero("lambda = 0");
  CoeffSequence out;
  out.scale = 1.0;
  auto& b = out.scaled;           // b[k-1] = b_k * scale^k
  b.assign(order, cplx(0.0));
  b[0] = 1.0;                     // b_1 = 1, scale starts at 1
  if (order < 2) return out;

  // sq[m-2] = [psi^2]_m * scale^m; both convolutions inherit the scaling
  // because [psi^k]_m is homogeneous of degree m in the b's indices.
  const bool cubic = (a3 != cplx(0.0));
  std::vector<cplx> sq(order - 1, cplx(0.0));

  cplx lam_n = lambda;  // lambda^n
  for (int n = 2; n <= order; ++n) {
    lam_n *= lambda;
    const cplx divisor = lam_n - lambda;
    if (std::abs(divisor) < kDivisorZero * std::abs(lambda)) {
      throw SmallDivisorZero("lambda^" + std::to_string(n) + " = lambda");
    }

    cplx s2(0.0);
    for (int i = 1; i <= n - 1; ++i) s2 += b[i - 1] * b[n - i - 1];
    sq[n - 2] = s2;

    cplx s3(0.0);
    if (cubic) {
      for (int i = 1; i <= n - 2; ++i) s3 += b[i - 1] * sq[n - i - 2];
    }

    cplx bn = (a2 * s2 + a3 * s3) / divisor;
    b[n - 1] = bn;

    const double m = std::abs(bn);
    if (m > kRescaleHi || (m > 0.0 && m < kRescaleLo)) {
      const double t = std::exp(-std::log(m) / n);  // makes |b_n * t^n| = 1
      rescale_prefix(b, sq, t, n);
      out.scale *= t;
    }
  }
  return out;
}

std::pair<cplx, cplx> cubic_coeffs(const CubicSlicePoint& p) {
  const cplx u = 1.0 / p.c;
  return {-0.5 * p.lambda * (1.0 + u), p.lambda * u / 3.0};
}

CoeffSequence linearize_cubic(const CubicSlicePoint& p, int order) {
  auto [a2, a3] = cubic_coeffs(p);
  return linearize(a2, a3, p.lambda, order);
}

CoeffSequence linearize_quadratic(cplx lambda, int order) {
  return linearize(-0.5 * lambda, cplx(0.0), lambda, order);
}

RadiusEstimate hadamard_radius(const CoeffSequence& s, double window) {
  const int n_total = s.order();
  if (n_total < 64) throw std::invalid_argument("hadamard_radius: order < 64");
  const int lo = std::max(2, static_cast<int>((1.0 - window) * n_total));

  RadiusEstimate est;
  const double inf = std::numeric_limits<double>::infinity();

  // r_tail: -log r = max over the window of log|b_n| / n.
  double max_rate = -inf;
  // r_fit: least squares log|b_n| = A + B n, r = exp(-B).
  double sn = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int n = lo; n <= n_total; ++n) {
    const double la = s.log_abs(n);
    if (la == -inf) continue;
    max_rate = std::max(max_rate, la / n);
    const double x = n;
    sn += 1;
    sx += x;
    sy += la;
    sxx += x * x;
    sxy += x * la;
  }
  if (sn < 2) {
    est.degenerate = true;
    est.r_hat = est.r_tail = est.r_fit = inf;
    return est;
  }
  const double slope = (sn * sxy - sx * sy) / (sn * sxx - sx * sx);
  const double log_r_tail = -max_rate;
  const double log_r_fit = -slope;
  est.r_tail = std::exp(log_r_tail);
  est.r_fit = std::exp(log_r_fit);
  est.r_hat = std::exp(0.5 * (log_r_tail + log_r_fit));
  est.uncertainty = std::abs(log_r_tail - log_r_fit);
  return est;
}

PsiValue eval_psi(const CoeffSequence& s, cplx z, double r_hat) {
  if (!(std::abs(z) < r_hat)) throw OutsideDisk("eval_psi: |z| >= r_hat");
  // Terms b_n z^n = scaled[n-1] (z/scale)^n. The running power (z/scale)^n
  // alone can leave double range while the product stays small, so it is
  // carried as mantissa * 2^e.
  const cplx zs = z / s.scale;
  cplx mant(1.0, 0.0);
  long e2 = 0;
  cplx sum(0.0);
  double last = 0.0;
  for (int n = 1; n <= s.order(); ++n) {
    mant *= zs;
    const double m = std::abs(mant);
    if (m != 0.0 && (m > 1e150 || m < 1e-150)) {
      int k = 0;
      std::frexp(m, &k);
      mant = {std::ldexp(mant.real(), -k), std::ldexp(mant.imag(), -k)};
      e2 += k;
    }
    const cplx raw = s.scaled[n - 1] * mant;
    const int e = static_cast<int>(std::clamp<long>(e2, -1 << 24, 1 << 24));
    const cplx term = {std::ldexp(raw.real(), e), std::ldexp(raw.imag(), e)};
    sum += term;
    last = std::abs(term);
  }
  PsiValue out;
  out.value = sum;
  out.truncated = last > 1e-10 * std::abs(sum);
  return out;
}

PsiValue eval_psi(const CoeffSequence& s, cplx z) {
  return eval_psi(s, z, hadamard_radius(s).r_hat);
}

}  // namespace cubicslice
