#pragma once

#include "cubicslice/attracting.hpp"
#include "cubicslice/image.hpp"
#include "cubicslice/potential.hpp"

namespace cubicslice {

enum class Plane { C, V };

struct GridSpec {
  cplx center{0.0, 0.0};
  double half_width = 8.0;
  int resolution = 512;
  Plane plane = Plane::C;
};

enum class SliceMode { Classify, Equipotential, Both };

struct RenderOptions {
  int max_iter = 100000;
  bool supersample = false;  // 2x2 subpixel average
  int threads = 0;
  double equi_band = 0.02;   // |t - round(t)| below this draws a level line
};

struct SliceImage {
  int width = 0;
  int height = 0;
  std::vector<Rgba> pixels;
  GridField raw;  // equipotential scalar; classification code in Classify mode
};

// Per-pixel classification of both critical orbits; bifurcation locus =
// pixels whose 3x3 neighbourhood classification differs, red for the
// critical point 1, blue for c. Equipotential mode shades level lines of
// (log|phi(c)| - log|phi(1)|) / log|lambda| near integers.
SliceImage render_slice(cplx lambda, const GridSpec& g, SliceMode mode,
                        const RenderOptions& opt = {});

// Same slice drawn in the v-coordinate; v inverts to c through the |c| >= 1
// branch and the locus is single-hue (critical points are unmarked here).
SliceImage vslice(cplx lambda, const GridSpec& g, SliceMode mode,
                  const RenderOptions& opt = {});

struct HeightFieldResult {
  GridField field;            // log r(P_{lambda,c}) - log|c|
  std::vector<Rgba> raster;   // grayscale, masked samples magenta
};

// Samples log r - log|c| through radius_attracting. NoMatch pixels and a
// small disk near c = 0 are recorded in the mask.
HeightFieldResult heightfield(cplx lambda, const GridSpec& g, int order = 512,
                              const RenderOptions& opt = {});

}  // namespace cubicslice
