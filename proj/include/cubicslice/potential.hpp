#pragma once

#include <stdexcept>
#include <vector>

#include "cubicslice/family.hpp"
#include "cubicslice/parabolic.hpp"
#include "cubicslice/rotation.hpp"

namespace cubicslice {

struct MaskTooLarge : std::runtime_error {
  explicit MaskTooLarge(const std::string& what) : std::runtime_error(what) {}
};

// Rectangular sample grid of a real scalar. Samples sit at pixel centres,
// mask = 0 marks invalid samples excluded from reductions.
struct GridField {
  cplx origin;  // location of sample (0,0)
  double step = 1.0;
  int width = 0;
  int height = 0;
  std::vector<double> values;
  std::vector<std::uint8_t> mask;

  static GridField make(cplx center, double half_width, int resolution);

  cplx point(int ix, int iy) const { return origin + cplx(ix * step, iy * step); }
  double at(int ix, int iy) const { return values[static_cast<size_t>(iy) * width + ix]; }
  double& at(int ix, int iy) { return values[static_cast<size_t>(iy) * width + ix]; }
  bool valid(int ix, int iy) const { return mask[static_cast<size_t>(iy) * width + ix] != 0; }
  void set_valid(int ix, int iy, bool v) {
    mask[static_cast<size_t>(iy) * width + ix] = v ? 1 : 0;
  }
  cplx center() const;
  double half_width() const { return 0.5 * step * width; }
  // Marks every sample within `radius` of z invalid.
  void mask_disk(cplx z, double radius);
};

// Potential of the measure with the kernel (1/2pi) log|z|, so the Laplacian
// returns the measure itself and the total mass reads off directly.
double dirac_potential(const DiracMeasure& m, cplx z);

struct PotentialValue {
  double value = 0.0;
  double uncertainty = 0.0;
};

// u_theta(c) = -log r(P_{lambda,c}) + log|c| + log r(Q_lambda), both radii
// from the series estimator at the given order.
PotentialValue siegel_potential(const RotationNumber& theta, cplx c, int order);
// Same with lambda and the quadratic radius precomputed (grid sweeps).
PotentialValue siegel_potential(cplx lambda, double log_r_quad, double unc_quad,
                                cplx c, int order);

struct GridMass {
  double laplacian = 0.0;
  double asymptotic = 0.0;
};

// Two estimators of the total Laplacian mass of a sampled field: the 5-point
// stencil sum over the interior (evaluated in its telescoped boundary-flux
// form, which tolerates interior masking) and 2pi x the slope of circle
// means against log radius over the outer 20% of the window.
GridMass grid_mass(const GridField& f);

struct GaussianBump {
  cplx center;
  double sigma;
  double operator()(cplx z) const;
};

struct TestDictionary {
  std::vector<GaussianBump> items;
  // 13x13 lattice over [-3,3]^2 at widths 0.15 and 0.45.
  static TestDictionary standard();
};

std::vector<double> dict_integrals(const DiracMeasure& m, const TestDictionary& d);
// Integrals against the discrete Laplacian of a sampled potential field.
std::vector<double> dict_integrals(const GridField& potential, const TestDictionary& d);

double weak_star_gap(const DiracMeasure& a, const DiracMeasure& b,
                     const TestDictionary& d);
double weak_star_gap(const DiracMeasure& a, const GridField& b,
                     const TestDictionary& d);
double weak_star_gap(const GridField& a, const GridField& b,
                     const TestDictionary& d);

struct ConvergenceRow {
  long long p = 0;
  long long q = 1;
  double sup_gap = 0.0;
  double weak_star_gap = 0.0;
  double u_n_at_zero = 0.0;
  double seconds = 0.0;
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;           // ordered by increasing q
  double max_uncertainty = 0.0;               // of the Siegel potential field
  GridField u_theta;                          // the reference potential field
};

struct ConvergenceOptions {
  cplx center{0.0, 0.0};
  double half_width = 3.0;
  int resolution = 21;
  int order = 16384;
  int threads = 0;
  std::uint64_t seed = 1;
};

// The section-7 experiment: for each convergent p_n/q_n of theta builds
// mu_n, compares its potential u_n against u_theta on the grid (sup gap,
// atoms masked) and mu_n against the discrete Laplacian of the u_theta
// field (weak-star gap over the dictionary).
ConvergenceReport convergence_table(const RotationNumber& theta, int depth,
                                    const ConvergenceOptions& opt = {});

// Samples u_theta over the grid; samples with |c| < 0.75 step are masked.
GridField siegel_potential_field(const RotationNumber& theta, cplx center,
                                 double half_width, int resolution, int order,
                                 int threads, double* max_uncertainty = nullptr);

}  // namespace cubicslice
