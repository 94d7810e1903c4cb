#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cubicslice {

struct DepthExceeded : std::runtime_error {
  explicit DepthExceeded(const std::string& what) : std::runtime_error(what) {}
};

struct PrecisionExhausted : std::runtime_error {
  explicit PrecisionExhausted(const std::string& what) : std::runtime_error(what) {}
};

// A rotation number theta in (0,1) given by its continued fraction
// [0; a_1, a_2, ...]. The partial quotients are exact integers; float
// expansions degrade past depth ~30 while q_n must be exact well beyond.
struct RotationNumber {
  std::vector<std::int64_t> partial_quotients;
  std::optional<double> float_hint;
  bool terminating = false;  // expansion of a rational, ends exactly

  static RotationNumber golden(int depth = 64);

  int depth() const { return static_cast<int>(partial_quotients.size()); }
  double value() const;
};

struct Convergent {
  std::int64_t p = 0;
  std::int64_t q = 1;
};

// p_k = a_k p_{k-1} + p_{k-2}, q_k likewise; each p_k/q_k in lowest terms.
// Throws DepthExceeded when depth > available prefix.
std::vector<Convergent> convergents(const RotationNumber& r, int depth);

// Gauss-map expansion of x in (0,1), truncated at depth or when the
// remainder drops below 1e-14 (then marked terminating). Throws
// PrecisionExhausted for depth > 30 on a non-terminating expansion.
RotationNumber cf_expand(double x, int depth);

// Truncated Brjuno-type sum  sum_{k<depth} log(q_{k+1}) / q_k  (q_0 = 1).
// Throws std::domain_error on a terminating (rational) rotation number.
double brjuno_sum(const RotationNumber& r, int depth);

bool bounded_type(const RotationNumber& r, std::int64_t bound);

}  // namespace cubicslice
