#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "cubicslice/potential.hpp"
#include "cubicslice/series.hpp"

using namespace cubicslice;

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
std::mt19937_64 rng(424243);
}  // namespace

TEST_CASE("potential of the q = 1 measure is log|z + 1|") {
  const auto mu = parabolic_measure(0, 1);
  for (const cplx z : {cplx(0.3, 0.4), cplx(2.0, -1.0), cplx(-0.2, 0.05)}) {
    CHECK(dirac_potential(mu, z) ==
          doctest::Approx(std::log(std::abs(z + 1.0))).epsilon(1e-12));
  }
  CHECK(std::isinf(dirac_potential(mu, cplx(-1.0))));
}

TEST_CASE("parabolic potentials vanish at the origin") {
  for (auto [p, q] : {std::pair<long long, long long>{1, 2}, {3, 5}, {8, 13},
                      {13, 21}}) {
    CHECK(std::abs(dirac_potential(parabolic_measure(p, q), cplx(0.0))) < 1e-8);
  }
}

TEST_CASE("potential tends to log|z| at infinity (mass 2pi)") {
  const auto mu = parabolic_measure(3, 5);
  const cplx z(7.3e5, -4.1e5);
  CHECK(std::abs(dirac_potential(mu, z) - std::log(std::abs(z))) < 1e-5);
}

TEST_CASE("potential is exactly invariant under atom relabeling") {
  auto mu = parabolic_measure(8, 13);
  auto shuffled = mu;
  std::shuffle(shuffled.points.begin(), shuffled.points.end(), rng);
  for (const cplx z : {cplx(0.7, 0.1), cplx(-1.3, 2.2)}) {
    CHECK(dirac_potential(mu, z) == dirac_potential(shuffled, z));
  }
}

TEST_CASE("grid mass of a log pole recovers 2pi on both estimators") {
  GridField f = GridField::make(cplx(0.0), 3.0, 256);
  const cplx z0(0.1, 0.2);
  for (int iy = 0; iy < f.height; ++iy) {
    for (int ix = 0; ix < f.width; ++ix) {
      f.at(ix, iy) = std::log(std::abs(f.point(ix, iy) - z0));
    }
  }
  const auto gm = grid_mass(f);
  CHECK(std::abs(gm.laplacian - kTwoPi) < 0.02 * kTwoPi);
  CHECK(std::abs(gm.asymptotic - kTwoPi) < 0.02 * kTwoPi);
}

TEST_CASE("grid mass of the zero field is zero") {
  GridField f = GridField::make(cplx(0.0), 3.0, 64);
  const auto gm = grid_mass(f);
  CHECK(gm.laplacian == 0.0);
  CHECK(gm.asymptotic == 0.0);
}

TEST_CASE("grid mass of the mu_{1/2} potential with atoms masked") {
  const auto mu = parabolic_measure(1, 2);
  GridField f = GridField::make(cplx(0.0), 3.0, 256);
  for (int iy = 0; iy < f.height; ++iy) {
    for (int ix = 0; ix < f.width; ++ix) {
      f.at(ix, iy) = dirac_potential(mu, f.point(ix, iy));
    }
  }
  for (const auto& atom : mu.points) f.mask_disk(atom, 2.0 * f.step);
  const auto gm = grid_mass(f);
  CHECK(std::abs(gm.laplacian - kTwoPi) < 0.02 * kTwoPi);
  CHECK(std::abs(gm.asymptotic - kTwoPi) < 0.02 * kTwoPi);
}

TEST_CASE("over-masked grids are rejected") {
  GridField f = GridField::make(cplx(0.0), 3.0, 64);
  f.mask_disk(cplx(0.0), 0.5);  // ~2% of the interior
  CHECK_THROWS_AS(grid_mass(f), MaskTooLarge);
}

TEST_CASE("weak-star gap: identity, Lipschitz shift, golden trend") {
  const auto dict = TestDictionary::standard();
  const auto mu = parabolic_measure(3, 5);
  CHECK(weak_star_gap(mu, mu, dict) == 0.0);

  DiracMeasure a{{cplx(0.4, 0.3)}, {1.0}, 1.0};
  DiracMeasure b{{cplx(0.4 + 1e-3, 0.3)}, {1.0}, 1.0};
  // max gradient of the narrow bumps: exp(-1/2)/sigma at sigma = 0.15
  const double grad = std::exp(-0.5) / 0.15;
  CHECK(weak_star_gap(a, b, dict) <= 1e-3 * grad * 1.0001);

  const double g23 = weak_star_gap(parabolic_measure(1, 2),
                                   parabolic_measure(2, 3), dict);
  const double g2134 = weak_star_gap(parabolic_measure(13, 21),
                                     parabolic_measure(21, 34), dict);
  CHECK(g2134 < g23);
}

TEST_CASE("siegel potential: reproducible value, symmetry, origin limit") {
  const auto theta = RotationNumber::golden();
  const int order = 16384;

  const auto at5 = siegel_potential(theta, cplx(5.0), order);
  CHECK(at5.uncertainty < 0.02);
  CHECK(std::isfinite(at5.value));

  // u(c) = u(1/c) + log|c|
  const auto at2 = siegel_potential(theta, cplx(2.0), order);
  const auto athalf = siegel_potential(theta, cplx(0.5), order);
  CHECK(std::abs(at2.value - athalf.value - std::log(2.0)) <
        3.0 * (at2.uncertainty + athalf.uncertainty));

  // u(0) = 0, probed at |c| = 1e-3
  const auto near0 = siegel_potential(theta, cplx(1e-3), order);
  CHECK(std::abs(near0.value) < std::max(0.02, 3.0 * near0.uncertainty));
}

TEST_CASE("golden q-th iterate coefficients obey the Siegel-radius bound") {
  // |C_n(c)|^{1/q_n} <= 1/r_theta(c) + 0.05 at c = 3 for the last three
  // convergents computed (here up to q = 89).
  const auto theta = RotationNumber::golden();
  const auto conv = convergents(theta, 10);
  const cplx lam = std::polar(1.0, kTwoPi * theta.value());
  const auto est = hadamard_radius(linearize_cubic({lam, cplx(3.0)}, 16384));
  const double bound = 1.0 / est.r_hat + 0.05;
  for (int n = 7; n < 10; ++n) {
    const auto poly = cq_poly(conv[n].p, conv[n].q);
    const double cn = std::abs(poly.eval(cplx(1.0 / 3.0)));
    CHECK(std::pow(cn, 1.0 / conv[n].q) <= bound);
  }
}

TEST_CASE("convergence table: ordered rows, vanishing origin values") {
  ConvergenceOptions opt;
  opt.order = 2048;
  const auto report = convergence_table(RotationNumber::golden(), 5, opt);
  REQUIRE(report.rows.size() == 5);
  for (size_t i = 0; i < report.rows.size(); ++i) {
    if (i > 0) CHECK(report.rows[i].q > report.rows[i - 1].q);
    CHECK(std::abs(report.rows[i].u_n_at_zero) < 1e-8);
    CHECK(std::isfinite(report.rows[i].sup_gap));
  }
  CHECK(report.rows[4].sup_gap < report.rows[0].sup_gap);
}
