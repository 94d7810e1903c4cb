#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "cubicslice/parabolic.hpp"

using namespace cubicslice;

namespace {

std::mt19937_64 rng(513201);

// Brute-force oracle: compose P_{lambda,1/u} with itself q times as a
// series in z with dense u-polynomial coefficients, no degree caps, and
// return the z^{q+1} coefficient. Written independently of the engine.
std::vector<cplx> oracle_cq(long long p, long long q) {
  const cplx lam = root_of_unity(p, q);
  const int zmax = static_cast<int>(q) + 1;
  using Poly = std::vector<cplx>;
  using Series = std::vector<Poly>;

  auto mul_poly = [](const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return Poly{};
    Poly r(a.size() + b.size() - 1, cplx(0.0));
    for (size_t i = 0; i < a.size(); ++i) {
      for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    }
    return r;
  };
  auto add_into = [](Poly& acc, const Poly& a, cplx s, int shift) {
    if (acc.size() < a.size() + shift) acc.resize(a.size() + shift, cplx(0.0));
    for (size_t i = 0; i < a.size(); ++i) acc[i + shift] += s * a[i];
  };
  auto mul_series = [&](const Series& a, const Series& b) {
    Series r(zmax + 1);
    for (int i = 1; i <= zmax; ++i) {
      for (int j = 1; i + j <= zmax; ++j) {
        if (a[i].empty() || b[j].empty()) continue;
        add_into(r[i + j], mul_poly(a[i], b[j]), cplx(1.0), 0);
      }
    }
    return r;
  };

  Series w(zmax + 1);
  w[1] = {cplx(1.0)};
  for (long long step = 0; step < q; ++step) {
    const Series w2 = mul_series(w, w);
    const Series w3 = mul_series(w2, w);
    Series next(zmax + 1);
    for (int m = 1; m <= zmax; ++m) {
      Poly acc;
      add_into(acc, w[m], cplx(1.0), 0);
      add_into(acc, w2[m], cplx(-0.5), 0);
      add_into(acc, w2[m], cplx(-0.5), 1);
      add_into(acc, w3[m], cplx(1.0 / 3.0), 1);
      for (auto& v : acc) v *= lam;
      next[m] = std::move(acc);
    }
    w = std::move(next);
  }
  w[zmax].resize(q + 1, cplx(0.0));
  return w[zmax];
}

double coeff_distance(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  REQUIRE(a.size() == b.size());
  double scale = 0.0, diff = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    scale = std::max(scale, std::abs(a[i]));
    diff = std::max(diff, std::abs(a[i] - b[i]));
  }
  return diff / std::max(1.0, scale);
}

const std::pair<long long, long long> kGolden[] = {
    {1, 1}, {1, 2}, {2, 3}, {3, 5}, {5, 8},
    {8, 13}, {13, 21}, {21, 34}, {34, 55}, {55, 89}};

}  // namespace

TEST_CASE("oracle reproduces the hand compositions for q = 1, 2") {
  const auto q1 = oracle_cq(0, 1);
  REQUIRE(q1.size() == 2);
  CHECK(std::abs(q1[0] + 0.5) < 1e-15);
  CHECK(std::abs(q1[1] + 0.5) < 1e-15);

  const auto q2 = oracle_cq(1, 2);
  REQUIRE(q2.size() == 3);
  CHECK(std::abs(q2[0] + 0.5) < 1e-15);
  CHECK(std::abs(q2[1] + 1.0 / 3.0) < 1e-15);
  CHECK(std::abs(q2[2] + 0.5) < 1e-15);
}

TEST_CASE("bivariate engine matches the oracle") {
  for (auto [p, q] : {std::pair<long long, long long>{0, 1}, {1, 2}, {1, 3},
                      {2, 5}, {3, 8}, {5, 13}}) {
    const auto poly = cq_poly(p, q);
    CHECK(coeff_distance(poly.coeffs, oracle_cq(p, q)) < 1e-12);
  }
}

TEST_CASE("quadratic z^{q+1} coefficient") {
  CHECK(std::abs(quadratic_c(0, 1) + 0.5) < 1e-15);
  CHECK(std::abs(quadratic_c(1, 2) + 0.5) < 1e-15);
  for (auto [p, q] : kGolden) CHECK(std::abs(quadratic_c(p, q)) > 0.0);
}

TEST_CASE("leading coefficient of C-hat equals the quadratic coefficient") {
  for (auto [p, q] : {std::pair<long long, long long>{1, 3}, {3, 5}, {5, 8},
                      {8, 13}}) {
    const auto poly = cq_poly(p, q);
    const cplx c0 = quadratic_c(p, q);
    CHECK(std::abs(poly.coeffs.back() - c0) < 1e-12 * std::abs(c0));
  }
}

TEST_CASE("palindrome defect is tiny for the golden convergents") {
  for (auto [p, q] : kGolden) {
    const auto poly = cq_poly(p, q);
    double scale = 0.0, defect = 0.0;
    for (long long k = 0; k <= q; ++k) {
      scale = std::max(scale, std::abs(poly.coeffs[k]));
      defect = std::max(defect, std::abs(poly.coeffs[k] - poly.coeffs[q - k]));
    }
    CHECK(defect / scale < 1e-10);
  }
}

TEST_CASE("roots for q = 1 and q = 2") {
  const auto r1 = cq_roots(cq_poly(0, 1));
  REQUIRE(r1.roots.size() == 1);
  CHECK(std::abs(r1.roots[0] + 1.0) < 1e-14);

  const auto r2 = cq_roots(cq_poly(1, 2));
  REQUIRE(r2.roots.size() == 2);
  for (const auto& u : r2.roots) {
    CHECK(std::abs(std::abs(u) - 1.0) < 1e-14);
    CHECK(std::abs(u.real() + 1.0 / 3.0) < 1e-14);
    CHECK(std::abs(std::abs(u.imag()) - 2.0 * std::sqrt(2.0) / 3.0) < 1e-14);
  }
}

TEST_CASE("root multiset is closed under u -> 1/u") {
  const auto rep = cq_roots(cq_poly(8, 13));
  for (const auto& u : rep.roots) {
    double best = 1e9;
    for (const auto& w : rep.roots) best = std::min(best, std::abs(1.0 / u - w));
    CHECK(best < 1e-8);
  }
}

TEST_CASE("C-hat is reconstructed from its roots and leading coefficient") {
  const auto poly = cq_poly(13, 21);
  const auto rep = cq_roots(poly);
  std::uniform_real_distribution<double> mag(0.3, 3.0);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * M_PI);
  for (int t = 0; t < 20; ++t) {
    const cplx u = std::polar(mag(rng), ang(rng));
    cplx prod = poly.coeffs.back();
    for (const auto& root : rep.roots) prod *= (u - root);
    CHECK(std::abs(prod - poly.eval(u)) < 1e-8 * poly.eval_scale(u));
  }
}

TEST_CASE("atoms multiply to modulus one (the potential vanishes at 0)") {
  for (auto [p, q] : {std::pair<long long, long long>{3, 5}, {8, 13}, {21, 34}}) {
    const auto mu = parabolic_measure(p, q);
    double sum_log = 0.0;
    for (const auto& c : mu.points) sum_log += std::log(std::abs(c));
    CHECK(std::abs(sum_log) < 1e-8);
  }
}

TEST_CASE("measure structure: q atoms of weight 2pi/q inside the kappa annulus") {
  const auto mu = parabolic_measure(8, 13);
  REQUIRE(mu.points.size() == 13);
  CHECK(mu.total_mass == 2.0 * std::numbers::pi);
  for (double w : mu.weights) CHECK(w == 2.0 * std::numbers::pi / 13.0);
  for (const auto& c : mu.points) {
    CHECK(std::abs(c) <= 40.0);
    CHECK(std::abs(c) >= 1.0 / 40.0);
  }
}

TEST_CASE("asymptotic size at the two worked parameters") {
  const auto at_one = asymptotic_size(0, 1, cplx(1.0));
  CHECK(std::abs(at_one.C + 1.0) < 1e-15);
  CHECK(at_one.L == doctest::Approx(1.0));
  CHECK(at_one.m == 1);

  const auto at_minus = asymptotic_size(0, 1, cplx(-1.0));
  CHECK(std::isinf(at_minus.L));
  CHECK(at_minus.m == 2);
}

TEST_CASE("orbit decay fits the asymptotic size") {
  // |P^n(z)| ~ L / n^{1/m} for orbits attracted to the parabolic point
  const auto data = asymptotic_size(0, 1, cplx(1.0));
  const CubicSlicePoint p{cplx(1.0), cplx(1.0)};
  cplx z(0.1);
  double fitted = 0.0;
  for (int n = 1; n <= 100000; ++n) {
    z = eval_cubic(p, z);
    if (n == 100000) fitted = std::abs(z) * std::pow(n, 1.0 / data.m);
  }
  CHECK(std::abs(fitted - data.L) / data.L < 0.05);
}

TEST_CASE("asymptotic size scales as a length under c -> 1/c") {
  const auto poly = cq_poly(1, 2);
  for (const cplx c : {cplx(1.7, -0.3), cplx(0.4, 0.8)}) {
    const auto direct = asymptotic_size(poly, c);
    const auto inverted = asymptotic_size(poly, 1.0 / c);
    REQUIRE(direct.m == 2);
    REQUIRE(inverted.m == 2);
    CHECK(std::abs(inverted.L - direct.L / std::abs(c)) < 1e-8 * direct.L);
  }
}

TEST_CASE("log-size identity against the atom potential") {
  const long long p = 3, q = 5;
  const auto poly = cq_poly(p, q);
  const auto mu = parabolic_measure(p, q);
  const double log_lq =
      -std::log(std::abs(quadratic_c(p, q))) / static_cast<double>(q);
  std::uniform_real_distribution<double> mag(0.5, 2.5);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * M_PI);
  for (int t = 0; t < 10; ++t) {
    const cplx c = std::polar(mag(rng), ang(rng));
    const auto data = asymptotic_size(poly, c);
    if (data.m != q) continue;
    double atom_sum = 0.0;
    for (const auto& atom : mu.points) atom_sum += std::log(std::abs(c - atom));
    const double rhs = -log_lq - std::log(std::abs(c)) + atom_sum / q;
    CHECK(std::abs(-std::log(data.L) - rhs) < 1e-8);
  }
}
