#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cubicslice/potential.hpp"

namespace cubicslice {

struct Rgba {
  std::uint8_t r = 0, g = 0, b = 0, a = 255;
};

// RGBA8 PNG; pixel (0,0) of the buffer is the bottom-left sample, written
// so that +imaginary points up in the final image.
void write_png(const std::string& path, int width, int height,
               const std::vector<Rgba>& pixels);

// Raw sidecar: little-endian  "SLCF" | u32 version | u32 width | u32 height |
// f64 center_re | f64 center_im | f64 half_width  followed by width x height
// f64 values row-major (row 0 at the bottom). Masked samples hold NaN.
void write_sidecar(const std::string& path, const GridField& field);
GridField read_sidecar(const std::string& path);

}  // namespace cubicslice
