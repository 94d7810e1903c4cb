#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "cubicslice/family.hpp"

namespace cubicslice {

struct NoConvergence : std::runtime_error {
  explicit NoConvergence(const std::string& what) : std::runtime_error(what) {}
};

struct ZeroLeading : std::runtime_error {
  explicit ZeroLeading(const std::string& what) : std::runtime_error(what) {}
};

// The z^{q+1} coefficient of P_{lambda,c}^q as a polynomial in u = 1/c,
// lambda = e^{2 pi i p/q}. Degree exactly q and palindromic (Lemma-level
// facts; the engine produces them, the tests check them).
struct UPoly {
  std::vector<cplx> coeffs;  // coeffs[k] multiplies u^k, size q+1
  long long p = 0;
  long long q = 1;

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  cplx eval(cplx u) const;
  // sum |coeff_k| |u|^k, the natural magnitude scale at u.
  double eval_scale(cplx u) const;
};

// Weighted point masses; built from the roots of the UPoly this is
// mu_{p/q} = (2 pi / q) sum delta_{c_i} with total mass exactly 2 pi.
struct DiracMeasure {
  std::vector<cplx> points;
  std::vector<double> weights;
  double total_mass = 0.0;
};

struct ParabolicData {
  double L = 0.0;   // asymptotic size, +infinity when C = 0
  long long m = 0;  // petal count, q or 2q
  cplx C;           // z^{q+1} coefficient of P^q at this c
};

UPoly cq_poly(long long p, long long q);

// The z^{q+1} coefficient of Q_lambda^q (the leading coefficient of the
// UPoly). Throws ZeroLeading if it underflows.
cplx quadratic_c(long long p, long long q);

struct RootReport {
  std::vector<cplx> roots;         // all q roots, clusters repeated
  std::vector<int> cluster_sizes;  // per-root cluster size (1 = simple)
  double max_residual = 0.0;
  int sweeps = 0;
};

// Simultaneous Ehrlich-Aberth iteration from jittered unit-circle starts,
// Newton polished. Residuals are relative to |leading| max(1,|u|)^q.
// Throws NoConvergence after 500 sweeps on each of three start radii.
RootReport cq_roots(const UPoly& poly, std::uint64_t seed = 1);

DiracMeasure parabolic_measure(long long p, long long q, std::uint64_t seed = 1);

ParabolicData asymptotic_size(long long p, long long q, cplx c);
ParabolicData asymptotic_size(const UPoly& poly, cplx c);

}  // namespace cubicslice
