#include <doctest.h>

#include <cmath>
#include <random>

#include "cubicslice/family.hpp"

using namespace cubicslice;

namespace {
std::mt19937_64 rng(20240817);

cplx random_cplx(double lo, double hi) {
  std::uniform_real_distribution<double> mag(lo, hi);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * M_PI);
  return std::polar(mag(rng), ang(rng));
}
}  // namespace

TEST_CASE("origin is fixed and the multiplier is lambda") {
  for (int i = 0; i < 20; ++i) {
    const CubicSlicePoint p{random_cplx(0.1, 2.0), random_cplx(0.2, 5.0)};
    CHECK(std::abs(eval_cubic(p, cplx(0.0))) == 0.0);
    const double h = 1e-7;
    const cplx fd = eval_cubic(p, cplx(h)) / h;
    CHECK(std::abs(fd - p.lambda) < 1e-5);
  }
}

TEST_CASE("the critical value relation P(c) = lambda c (3-c)/6 kills c = 3") {
  const CubicSlicePoint p{cplx(1.0), cplx(3.0)};
  CHECK(std::abs(eval_cubic(p, cplx(3.0))) < 1e-15);
}

TEST_CASE("analytic derivative vanishes exactly at 1 and c") {
  for (int i = 0; i < 20; ++i) {
    const CubicSlicePoint p{random_cplx(0.1, 2.0), random_cplx(0.2, 5.0)};
    CHECK(std::abs(eval_cubic_deriv(p, cplx(1.0))) < 1e-12);
    CHECK(std::abs(eval_cubic_deriv(p, p.c)) < 1e-12 * std::max(1.0, std::abs(p.c)));
  }
}

TEST_CASE("coordinate map hits the worked cases") {
  const cplx lam(0.3, 0.7);
  const auto at_one = coordinates({lam, cplx(1.0)});
  CHECK(std::abs(at_one.v - 1.0) < 1e-15);
  CHECK(std::abs(at_one.a) < 1e-15);
  const cplx expect = (lam / 3.0) * (lam / 3.0 - 1.0) * (lam / 3.0 - 1.0);
  CHECK(std::abs(at_one.b2 - expect) < 1e-15);

  const auto sym = coordinates({cplx(1.0), cplx(-1.0)});
  CHECK(std::abs(sym.v + 1.0) < 1e-15);
  CHECK(std::abs(sym.a - 1.0) < 1e-15);
  CHECK(std::abs(sym.b2) < 1e-15);

  const auto degen = coordinates({cplx(1.0), cplx(-3.0)});
  CHECK(std::abs(degen.v + 5.0 / 3.0) < 1e-14);
  CHECK(std::abs(degen.a - 4.0 / 3.0) < 1e-14);
  CHECK(std::abs(degen.b2 + 4.0 / 729.0) < 1e-14);
}

TEST_CASE("coordinates agree for c and 1/c") {
  for (int i = 0; i < 50; ++i) {
    const cplx lam = random_cplx(0.1, 2.0);
    const cplx c = random_cplx(0.2, 5.0);
    const auto a = coordinates({lam, c});
    const auto b = coordinates({lam, 1.0 / c});
    CHECK(std::abs(a.v - b.v) < 1e-12 * std::max(1.0, std::abs(a.v)));
    CHECK(std::abs(a.a - b.a) < 1e-12 * std::max(1.0, std::abs(a.a)));
    CHECK(std::abs(a.b2 - b.b2) < 1e-12 * std::max(1.0, std::abs(a.b2)));
  }
}

TEST_CASE("fibre cardinality cases") {
  CHECK(fiber_cardinality(cplx(0.0), cplx(0.0)) == 1);
  CHECK(fiber_cardinality(cplx(1.0), cplx(0.0)) == 1);
  CHECK(fiber_cardinality(cplx(1.5), cplx(0.0)) == 1);
  CHECK(fiber_cardinality(cplx(2.0), cplx(0.0)) == 2);
  CHECK(fiber_cardinality(cplx(4.0 / 3.0), cplx(-4.0 / 729.0)) == 1);
  // double fixed point, no critical fixed point: -4(a-1)^3 = 27 b2 at a = 0
  CHECK(fiber_cardinality(cplx(0.0), cplx(4.0 / 27.0)) == 2);
  CHECK(fiber_cardinality(cplx(0.7, 0.1), cplx(0.3, -0.4)) == 3);
}

TEST_CASE("escape radius formula values") {
  CHECK(escape_radius({cplx(1.0), cplx(1.0)}) == doctest::Approx(12.0));
  CHECK(escape_radius({cplx(1.0), cplx(-1.0)}) == doctest::Approx(std::sqrt(12.0)));
  CHECK(escape_radius({cplx(0.5), cplx(1.0)}) == doctest::Approx(12.0));
}

TEST_CASE("symmetry: c^-1 P_{l,c}(c z) = P_{l,1/c}(z)") {
  for (int i = 0; i < 200; ++i) {
    const cplx lam = random_cplx(0.1, 1.5);
    const cplx c = random_cplx(0.1, 8.0);
    const cplx z = random_cplx(0.0, 4.0);
    const cplx lhs = eval_cubic({lam, c}, c * z) / c;
    const cplx rhs = eval_cubic({lam, 1.0 / c}, z);
    const double scale = std::max(1.0, std::abs(rhs));
    CHECK(std::abs(lhs - rhs) < 1e-12 * scale);
  }
}

TEST_CASE("quadratic limit as c -> infinity") {
  const cplx lam(0.0, 0.2);
  const CubicSlicePoint p{lam, cplx(1e8)};
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const cplx z = random_cplx(0.0, 10.0);
    worst = std::max(worst, std::abs(eval_cubic(p, z) - eval_quadratic(lam, z)));
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("v inversion picks the |c| >= 1 branch") {
  CHECK(std::abs(c_from_v(cplx(1.0)) - 1.0) < 1e-15);
  CHECK(std::abs(c_from_v(cplx(-1.0)) + 1.0) < 1e-15);
  for (int i = 0; i < 100; ++i) {
    const cplx c = random_cplx(1.0, 6.0);
    const cplx v = 0.5 * (c + 1.0 / c);
    const cplx back = c_from_v(v);
    CHECK(std::abs(back) >= 1.0 - 1e-12);
    const bool same = std::abs(back - c) < 1e-9 * std::abs(c);
    const bool inverse = std::abs(back - 1.0 / c) < 1e-9;
    CHECK((same || inverse));
    if (std::abs(c) > 1.0 + 1e-6) CHECK(same);
  }
}

TEST_CASE("root_of_unity lands on the circle") {
  const cplx w = root_of_unity(3, 7);
  CHECK(std::abs(std::abs(w) - 1.0) < 1e-15);
  cplx pw(1.0);
  for (int i = 0; i < 7; ++i) pw *= w;
  CHECK(std::abs(pw - 1.0) < 1e-14);
}
