#include "cubicslice/render.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cubicslice/parallel.hpp"

namespace cubicslice {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Palette (fixed, versioned through the README so figures are comparable).
constexpr Rgba kBothAttract{250, 244, 210, 255};
constexpr Rgba kOneAttract{222, 232, 248, 255};   // crit 1 in the basin only
constexpr Rgba kCAttract{248, 226, 222, 255};     // crit c in the basin only
constexpr Rgba kNoneAttract{255, 255, 255, 255};
constexpr Rgba kUndecided{128, 128, 128, 255};
constexpr Rgba kLocusOne{170, 20, 20, 255};       // red: critical point 1
constexpr Rgba kLocusC{20, 40, 170, 255};         // blue: critical point c
constexpr Rgba kLocusBothCrit{150, 20, 150, 255};
constexpr Rgba kMasked{255, 0, 255, 255};

struct PixelData {
  OrbitTag tag1 = OrbitTag::Undecided;
  OrbitTag tagc = OrbitTag::Undecided;
  double t = kNaN;  // (log|phi(c)| - log|phi(1)|) / log|lambda|
};

OrbitTag tag_of(const PhiResult& p) {
  if (p.escaped) return OrbitTag::Escaped;
  if (p.undecided) return OrbitTag::Undecided;
  return OrbitTag::AttractedToZero;
}

PixelData eval_pixel(cplx lambda, cplx c, int max_iter) {
  PixelData px;
  if (c == cplx(0.0)) return px;
  const CubicSlicePoint pt{lambda, c};
  const PhiResult p1 = phi(pt, cplx(1.0), max_iter);
  const PhiResult pc = phi(pt, c, max_iter);
  px.tag1 = tag_of(p1);
  px.tagc = tag_of(pc);
  if (px.tag1 == OrbitTag::AttractedToZero &&
      px.tagc == OrbitTag::AttractedToZero) {
    px.t = (std::log(std::abs(pc.value)) - std::log(std::abs(p1.value))) /
           std::log(std::abs(lambda));
  }
  return px;
}

Rgba darken(Rgba c, double f) {
  return {static_cast<std::uint8_t>(c.r * f), static_cast<std::uint8_t>(c.g * f),
          static_cast<std::uint8_t>(c.b * f), c.a};
}

int code_of(const PixelData& px) {
  return static_cast<int>(px.tag1) * 3 + static_cast<int>(px.tagc);
}

SliceImage render_core(cplx lambda, cplx center, double half_width,
                       int resolution, Plane plane, SliceMode mode,
                       const RenderOptions& opt) {
  SliceImage img;
  img.width = img.height = resolution;
  img.pixels.assign(static_cast<size_t>(resolution) * resolution, kNoneAttract);
  img.raw = GridField::make(center, half_width, resolution);

  std::vector<PixelData> data(img.pixels.size());
  const int threads = resolve_threads(opt.threads);
  parallel_for(resolution, threads, [&](long iy) {
    for (int ix = 0; ix < resolution; ++ix) {
      const cplx w = img.raw.point(ix, static_cast<int>(iy));
      const cplx c = (plane == Plane::C) ? w : c_from_v(w);
      data[iy * resolution + ix] = eval_pixel(lambda, c, opt.max_iter);
    }
  });

  // Raw sidecar: classification code for pure classification, the level
  // scalar otherwise.
  for (size_t i = 0; i < data.size(); ++i) {
    if (mode == SliceMode::Classify) {
      img.raw.values[i] = code_of(data[i]);
    } else if (std::isnan(data[i].t)) {
      img.raw.mask[i] = 0;
    } else {
      img.raw.values[i] = data[i].t;
    }
  }

  const bool marked = (plane == Plane::C);
  for (int iy = 0; iy < resolution; ++iy) {
    for (int ix = 0; ix < resolution; ++ix) {
      const PixelData& px = data[static_cast<size_t>(iy) * resolution + ix];
      Rgba col;
      if (px.tag1 == OrbitTag::Undecided || px.tagc == OrbitTag::Undecided) {
        col = kUndecided;
      } else if (px.tag1 == OrbitTag::AttractedToZero &&
                 px.tagc == OrbitTag::AttractedToZero) {
        col = kBothAttract;
      } else if (px.tag1 == OrbitTag::AttractedToZero) {
        col = kOneAttract;
      } else if (px.tagc == OrbitTag::AttractedToZero) {
        col = kCAttract;
      } else {
        col = kNoneAttract;
      }

      if (mode != SliceMode::Classify && !std::isnan(px.t)) {
        const double frac = std::abs(px.t - std::round(px.t));
        if (frac < opt.equi_band) col = darken(col, 0.55);
      }

      if (mode != SliceMode::Equipotential) {
        bool diff1 = false, diffc = false;
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            const int jx = ix + dx, jy = iy + dy;
            if (jx < 0 || jy < 0 || jx >= resolution || jy >= resolution) continue;
            const PixelData& nb = data[static_cast<size_t>(jy) * resolution + jx];
            diff1 = diff1 || nb.tag1 != px.tag1;
            diffc = diffc || nb.tagc != px.tagc;
          }
        }
        if (marked) {
          if (diff1 && diffc) {
            col = kLocusBothCrit;
          } else if (diff1) {
            col = kLocusOne;
          } else if (diffc) {
            col = kLocusC;
          }
        } else if (diff1 || diffc) {
          col = kLocusOne;  // unmarked plane: single hue
        }
      }
      img.pixels[static_cast<size_t>(iy) * resolution + ix] = col;
    }
  }
  return img;
}

SliceImage downsample2(const SliceImage& big, cplx center, double half_width) {
  SliceImage out;
  out.width = out.height = big.width / 2;
  out.pixels.assign(static_cast<size_t>(out.width) * out.height, Rgba{});
  out.raw = GridField::make(center, half_width, out.width);
  for (int iy = 0; iy < out.height; ++iy) {
    for (int ix = 0; ix < out.width; ++ix) {
      int acc[4] = {0, 0, 0, 0};
      double racc = 0.0;
      bool valid = true;
      for (int dy = 0; dy < 2; ++dy) {
        for (int dx = 0; dx < 2; ++dx) {
          const size_t j =
              static_cast<size_t>(2 * iy + dy) * big.width + (2 * ix + dx);
          acc[0] += big.pixels[j].r;
          acc[1] += big.pixels[j].g;
          acc[2] += big.pixels[j].b;
          acc[3] += big.pixels[j].a;
          racc += big.raw.values[j];
          valid = valid && big.raw.mask[j];
        }
      }
      const size_t i = static_cast<size_t>(iy) * out.width + ix;
      out.pixels[i] = {static_cast<std::uint8_t>(acc[0] / 4),
                       static_cast<std::uint8_t>(acc[1] / 4),
                       static_cast<std::uint8_t>(acc[2] / 4),
                       static_cast<std::uint8_t>(acc[3] / 4)};
      out.raw.values[i] = racc / 4.0;
      out.raw.mask[i] = valid ? 1 : 0;
    }
  }
  return out;
}

SliceImage render_plane(cplx lambda, const GridSpec& g, SliceMode mode,
                        const RenderOptions& opt, Plane plane) {
  if (!(std::abs(lambda) > 0.0 && std::abs(lambda) <= 1.0)) {
    throw std::invalid_argument("render: need 0 < |lambda| <= 1");
  }
  if (g.resolution < 16) throw std::invalid_argument("render: resolution < 16");
  if (!opt.supersample) {
    return render_core(lambda, g.center, g.half_width, g.resolution, plane,
                       mode, opt);
  }
  const SliceImage big = render_core(lambda, g.center, g.half_width,
                                     2 * g.resolution, plane, mode, opt);
  return downsample2(big, g.center, g.half_width);
}

}  // namespace

SliceImage render_slice(cplx lambda, const GridSpec& g, SliceMode mode,
                        const RenderOptions& opt) {
  return render_plane(lambda, g, mode, opt, Plane::C);
}

SliceImage vslice(cplx lambda, const GridSpec& g, SliceMode mode,
                  const RenderOptions& opt) {
  return render_plane(lambda, g, mode, opt, Plane::V);
}

HeightFieldResult heightfield(cplx lambda, const GridSpec& g, int order,
                              const RenderOptions& opt) {
  if (!(std::abs(lambda) > 0.0 && std::abs(lambda) < 1.0)) {
    throw std::invalid_argument("heightfield: need 0 < |lambda| < 1");
  }
  HeightFieldResult out;
  out.field = GridField::make(g.center, g.half_width, g.resolution);
  GridField& f = out.field;
  const int threads = resolve_threads(opt.threads);
  parallel_for(g.resolution, threads, [&](long iy) {
    for (int ix = 0; ix < g.resolution; ++ix) {
      const cplx c = f.point(ix, static_cast<int>(iy));
      const size_t i = static_cast<size_t>(iy) * g.resolution + ix;
      if (std::abs(c) < 2.0 * f.step) {
        f.mask[i] = 0;
        continue;
      }
      const AttractingRadius ra = radius_attracting({lambda, c}, order);
      if (ra.main == MainCritical::NoMatch || ra.estimate.degenerate ||
          !std::isfinite(ra.r)) {
        f.mask[i] = 0;
        continue;
      }
      f.values[i] = std::log(ra.r) - std::log(std::abs(c));
    }
  });

  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (size_t i = 0; i < f.values.size(); ++i) {
    if (!f.mask[i]) continue;
    lo = std::min(lo, f.values[i]);
    hi = std::max(hi, f.values[i]);
  }
  const double span = (hi > lo) ? hi - lo : 1.0;
  out.raster.assign(f.values.size(), kMasked);
  for (size_t i = 0; i < f.values.size(); ++i) {
    if (!f.mask[i]) continue;
    const auto g8 =
        static_cast<std::uint8_t>(std::lround(255.0 * (f.values[i] - lo) / span));
    out.raster[i] = {g8, g8, g8, 255};
  }
  return out;
}

}  // namespace cubicslice
