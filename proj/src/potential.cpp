#include "cubicslice/potential.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>

#include "cubicslice/parallel.hpp"
#include "cubicslice/series.hpp"

namespace cubicslice {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

GridField GridField::make(cplx center, double half_width, int resolution) {
  GridField f;
  f.width = resolution;
  f.height = resolution;
  f.step = 2.0 * half_width / resolution;
  f.origin = center + cplx(-half_width + 0.5 * f.step, -half_width + 0.5 * f.step);
  f.values.assign(static_cast<size_t>(resolution) * resolution, 0.0);
  f.mask.assign(static_cast<size_t>(resolution) * resolution, 1);
  return f;
}

cplx GridField::center() const {
  return origin + cplx(0.5 * step * (width - 1), 0.5 * step * (height - 1));
}

void GridField::mask_disk(cplx z, double radius) {
  const int ix0 = static_cast<int>(std::floor((z.real() - radius - origin.real()) / step));
  const int ix1 = static_cast<int>(std::ceil((z.real() + radius - origin.real()) / step));
  const int iy0 = static_cast<int>(std::floor((z.imag() - radius - origin.imag()) / step));
  const int iy1 = static_cast<int>(std::ceil((z.imag() + radius - origin.imag()) / step));
  for (int iy = std::max(0, iy0); iy <= std::min(height - 1, iy1); ++iy) {
    for (int ix = std::max(0, ix0); ix <= std::min(width - 1, ix1); ++ix) {
      if (std::abs(point(ix, iy) - z) <= radius) set_valid(ix, iy, false);
    }
  }
}

double dirac_potential(const DiracMeasure& m, cplx z) {
  // Terms are sorted before summation so the value is exactly invariant
  // under relabeling the atoms.
  std::vector<double> terms(m.points.size());
  for (size_t i = 0; i < m.points.size(); ++i) {
    terms[i] = m.weights[i] / kTwoPi * std::log(std::abs(z - m.points[i]));
  }
  std::sort(terms.begin(), terms.end());
  double sum = 0.0;
  for (double t : terms) sum += t;
  return sum;
}

PotentialValue siegel_potential(cplx lambda, double log_r_quad, double unc_quad,
                                cplx c, int order) {
  const RadiusEstimate rp = hadamard_radius(linearize_cubic({lambda, c}, order));
  PotentialValue out;
  out.value = -std::log(rp.r_hat) + std::log(std::abs(c)) + log_r_quad;
  out.uncertainty = rp.uncertainty + unc_quad;
  return out;
}

PotentialValue siegel_potential(const RotationNumber& theta, cplx c, int order) {
  const cplx lambda = std::polar(1.0, kTwoPi * theta.value());
  const RadiusEstimate rq = hadamard_radius(linearize_quadratic(lambda, order));
  return siegel_potential(lambda, std::log(rq.r_hat), rq.uncertainty, c, order);
}

GridMass grid_mass(const GridField& f) {
  GridMass out;
  const int w = f.width, h = f.height;
  if (w < 8 || h < 8) throw std::invalid_argument("grid_mass: grid too small");

  long interior = 0, masked = 0;
  for (int iy = 1; iy < h - 1; ++iy) {
    for (int ix = 1; ix < w - 1; ++ix) {
      ++interior;
      if (!f.valid(ix, iy)) ++masked;
    }
  }
  if (masked > 0.01 * interior) {
    throw MaskTooLarge("grid_mass: " + std::to_string(masked) + " of " +
                       std::to_string(interior) + " interior samples masked");
  }

  // Stencil sum over the cells inside inset k, telescoped to the flux
  // through the contour between inset k and k-1. Identical to the literal
  // interior stencil sum when nothing is masked; unlike it, still defined
  // when atom neighbourhoods are masked. The contour must be mask-free.
  bool flux_done = false;
  for (int k = 1; k <= std::min(w, h) / 4 && !flux_done; ++k) {
    bool clean = true;
    for (int ix = k - 1; ix < w - k + 1 && clean; ++ix) {
      clean = f.valid(ix, k - 1) && f.valid(ix, h - k) &&
              f.valid(ix, k) && f.valid(ix, h - k - 1);
    }
    for (int iy = k - 1; iy < h - k + 1 && clean; ++iy) {
      clean = f.valid(k - 1, iy) && f.valid(w - k, iy) &&
              f.valid(k, iy) && f.valid(w - k - 1, iy);
    }
    if (!clean) continue;
    double flux = 0.0;
    for (int iy = k; iy <= h - 1 - k; ++iy) {
      flux += f.at(k - 1, iy) - f.at(k, iy);
      flux += f.at(w - k, iy) - f.at(w - 1 - k, iy);
    }
    for (int ix = k; ix <= w - 1 - k; ++ix) {
      flux += f.at(ix, k - 1) - f.at(ix, k);
      flux += f.at(ix, h - k) - f.at(ix, h - 1 - k);
    }
    out.laplacian = flux;
    flux_done = true;
  }
  if (!flux_done) throw MaskTooLarge("grid_mass: no mask-free flux contour");

  // Circle means against log radius over the outer 20% of the window.
  const cplx ctr = f.center();
  const double r_max = f.half_width() - f.step;
  const double r_min = 0.80 * r_max;
  const int n_radii = 16;
  const int n_angles = 720;
  double sn = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int j = 0; j < n_radii; ++j) {
    const double rho = r_min + (r_max - r_min) * j / (n_radii - 1.0);
    double mean = 0.0;
    long count = 0;
    for (int a = 0; a < n_angles; ++a) {
      const double ang = kTwoPi * a / n_angles;
      const cplx z = ctr + std::polar(rho, ang);
      // bilinear sample
      const double gx = (z.real() - f.origin.real()) / f.step;
      const double gy = (z.imag() - f.origin.imag()) / f.step;
      const int ix = static_cast<int>(std::floor(gx));
      const int iy = static_cast<int>(std::floor(gy));
      if (ix < 0 || iy < 0 || ix + 1 >= f.width || iy + 1 >= f.height) continue;
      if (!f.valid(ix, iy) || !f.valid(ix + 1, iy) || !f.valid(ix, iy + 1) ||
          !f.valid(ix + 1, iy + 1)) {
        continue;
      }
      const double tx = gx - ix, ty = gy - iy;
      const double v = (1 - tx) * (1 - ty) * f.at(ix, iy) +
                       tx * (1 - ty) * f.at(ix + 1, iy) +
                       (1 - tx) * ty * f.at(ix, iy + 1) +
                       tx * ty * f.at(ix + 1, iy + 1);
      mean += v;
      ++count;
    }
    if (count == 0) continue;
    mean /= count;
    const double x = std::log(rho);
    sn += 1; sx += x; sy += mean; sxx += x * x; sxy += x * mean;
  }
  const double slope = (sn * sxy - sx * sy) / (sn * sxx - sx * sx);
  out.asymptotic = kTwoPi * slope;
  return out;
}

double GaussianBump::operator()(cplx z) const {
  const double d2 = std::norm(z - center);
  return std::exp(-d2 / (2.0 * sigma * sigma));
}

TestDictionary TestDictionary::standard() {
  TestDictionary d;
  for (double sigma : {0.15, 0.45}) {
    for (int iy = 0; iy < 13; ++iy) {
      for (int ix = 0; ix < 13; ++ix) {
        d.items.push_back({cplx(-3.0 + 0.5 * ix, -3.0 + 0.5 * iy), sigma});
      }
    }
  }
  return d;
}

std::vector<double> dict_integrals(const DiracMeasure& m, const TestDictionary& d) {
  std::vector<double> out(d.items.size(), 0.0);
  for (size_t k = 0; k < d.items.size(); ++k) {
    double acc = 0.0;
    for (size_t i = 0; i < m.points.size(); ++i) {
      acc += m.weights[i] * d.items[k](m.points[i]);
    }
    out[k] = acc;
  }
  return out;
}

std::vector<double> dict_integrals(const GridField& f, const TestDictionary& d) {
  // mu(cell) = 5-point stencil of the potential at the cell; the integral
  // of phi is the sum of phi against those cell masses.
  std::vector<double> out(d.items.size(), 0.0);
  for (int iy = 1; iy < f.height - 1; ++iy) {
    for (int ix = 1; ix < f.width - 1; ++ix) {
      if (!f.valid(ix, iy) || !f.valid(ix - 1, iy) || !f.valid(ix + 1, iy) ||
          !f.valid(ix, iy - 1) || !f.valid(ix, iy + 1)) {
        continue;
      }
      const double cell_mass = f.at(ix - 1, iy) + f.at(ix + 1, iy) +
                               f.at(ix, iy - 1) + f.at(ix, iy + 1) -
                               4.0 * f.at(ix, iy);
      if (cell_mass == 0.0) continue;
      const cplx z = f.point(ix, iy);
      for (size_t k = 0; k < d.items.size(); ++k) {
        out[k] += cell_mass * d.items[k](z);
      }
    }
  }
  return out;
}

namespace {
double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}
}  // namespace

double weak_star_gap(const DiracMeasure& a, const DiracMeasure& b,
                     const TestDictionary& d) {
  return max_abs_diff(dict_integrals(a, d), dict_integrals(b, d));
}

double weak_star_gap(const DiracMeasure& a, const GridField& b,
                     const TestDictionary& d) {
  return max_abs_diff(dict_integrals(a, d), dict_integrals(b, d));
}

double weak_star_gap(const GridField& a, const GridField& b,
                     const TestDictionary& d) {
  return max_abs_diff(dict_integrals(a, d), dict_integrals(b, d));
}

GridField siegel_potential_field(const RotationNumber& theta, cplx center,
                                 double half_width, int resolution, int order,
                                 int threads, double* max_uncertainty) {
  const cplx lambda = std::polar(1.0, kTwoPi * theta.value());
  const RadiusEstimate rq = hadamard_radius(linearize_quadratic(lambda, order));
  const double log_rq = std::log(rq.r_hat);

  GridField f = GridField::make(center, half_width, resolution);
  std::vector<double> unc(f.values.size(), 0.0);
  parallel_for(static_cast<long>(f.values.size()), resolve_threads(threads),
               [&](long idx) {
                 const int ix = static_cast<int>(idx) % f.width;
                 const int iy = static_cast<int>(idx) / f.width;
                 const cplx c = f.point(ix, iy);
                 if (std::abs(c) < 0.75 * f.step) {
                   f.mask[idx] = 0;
                   return;
                 }
                 const PotentialValue v =
                     siegel_potential(lambda, log_rq, rq.uncertainty, c, order);
                 f.values[idx] = v.value;
                 unc[idx] = v.uncertainty;
               });
  if (max_uncertainty) {
    double m = 0.0;
    for (size_t i = 0; i < unc.size(); ++i) {
      if (f.mask[i]) m = std::max(m, unc[i]);
    }
    *max_uncertainty = m;
  }
  return f;
}

ConvergenceReport convergence_table(const RotationNumber& theta, int depth,
                                    const ConvergenceOptions& opt) {
  ConvergenceReport report;
  const auto conv = convergents(theta, depth);
  report.u_theta = siegel_potential_field(theta, opt.center, opt.half_width,
                                          opt.resolution, opt.order, opt.threads,
                                          &report.max_uncertainty);
  const TestDictionary dict = TestDictionary::standard();
  const auto theta_integrals = dict_integrals(report.u_theta, dict);

  for (const auto& pq : conv) {
    const auto t0 = std::chrono::steady_clock::now();
    ConvergenceRow row;
    row.p = pq.p;
    row.q = pq.q;
    const DiracMeasure mu = parabolic_measure(pq.p, pq.q, opt.seed);

    GridField masked = report.u_theta;  // copy mask geometry
    for (const auto& atom : mu.points) masked.mask_disk(atom, 2.0 * masked.step);

    double sup = -std::numeric_limits<double>::infinity();
    for (int iy = 0; iy < masked.height; ++iy) {
      for (int ix = 0; ix < masked.width; ++ix) {
        if (!masked.valid(ix, iy)) continue;
        const double un = dirac_potential(mu, masked.point(ix, iy));
        sup = std::max(sup, un - masked.at(ix, iy));
      }
    }
    row.sup_gap = sup;
    row.weak_star_gap = max_abs_diff(dict_integrals(mu, dict), theta_integrals);
    row.u_n_at_zero = dirac_potential(mu, cplx(0.0));
    row.seconds = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - t0).count();
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace cubicslice
