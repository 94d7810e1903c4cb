#include "cubicslice/rotation.hpp"

#include <cmath>

namespace cubicslice {

RotationNumber RotationNumber::golden(int depth) {
  RotationNumber r;
  r.partial_quotients.assign(depth, 1);
  r.float_hint = (std::sqrt(5.0) - 1.0) / 2.0;
  return r;
}

double RotationNumber::value() const {
  double x = 0.0;
  for (auto it = partial_quotients.rbegin(); it != partial_quotients.rend(); ++it) {
    x = 1.0 / (static_cast<double>(*it) + x);
  }
  return x;
}

std::vector<Convergent> convergents(const RotationNumber& r, int depth) {
  if (depth > r.depth()) {
    throw DepthExceeded("convergents: depth " + std::to_string(depth) +
                        " > available prefix " + std::to_string(r.depth()));
  }
  std::vector<Convergent> out;
  out.reserve(depth);
  std::int64_t p_prev = 1, q_prev = 0;  // p_{-1}, q_{-1}
  std::int64_t p_cur = 0, q_cur = 1;    // p_0, q_0
  for (int k = 0; k < depth; ++k) {
    const std::int64_t a = r.partial_quotients[k];
    const __int128 pw = static_cast<__int128>(a) * p_cur + p_prev;
    const __int128 qw = static_cast<__int128>(a) * q_cur + q_prev;
    if (qw > INT64_MAX || pw > INT64_MAX) {
      throw DepthExceeded("convergents: denominator overflows 64 bits");
    }
    p_prev = p_cur; p_cur = static_cast<std::int64_t>(pw);
    q_prev = q_cur; q_cur = static_cast<std::int64_t>(qw);
    out.push_back({p_cur, q_cur});
  }
  return out;
}

RotationNumber cf_expand(double x, int depth) {
  if (!(x > 0.0 && x < 1.0)) throw std::invalid_argument("cf_expand: x not in (0,1)");
  RotationNumber r;
  r.float_hint = x;
  double frac = x;
  for (int k = 0; k < depth; ++k) {
    const double inv = 1.0 / frac;
    auto a = static_cast<std::int64_t>(std::floor(inv));
    double rem = inv - static_cast<double>(a);
    // floor can land just below an integer from rounding noise
    if (rem > 1.0 - 1e-12) {
      a += 1;
      rem = 0.0;
    }
    r.partial_quotients.push_back(a);
    if (rem < 1e-14) {
      r.terminating = true;
      return r;
    }
    frac = rem;
  }
  if (depth > 30) {
    throw PrecisionExhausted("cf_expand: depth " + std::to_string(depth) +
                             " unreachable in double precision");
  }
  return r;
}

double brjuno_sum(const RotationNumber& r, int depth) {
  if (r.terminating && depth >= r.depth()) {
    throw std::domain_error("brjuno_sum: rational rotation number");
  }
  const auto conv = convergents(r, depth);
  double sum = 0.0;
  std::int64_t q_prev = 1;  // q_0
  for (int k = 0; k < depth; ++k) {
    sum += std::log(static_cast<double>(conv[k].q)) / static_cast<double>(q_prev);
    q_prev = conv[k].q;
  }
  return sum;
}

bool bounded_type(const RotationNumber& r, std::int64_t bound) {
  for (auto a : r.partial_quotients) {
    if (a > bound) return false;
  }
  return !r.partial_quotients.empty();
}

}  // namespace cubicslice
