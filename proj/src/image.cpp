#include "cubicslice/image.hpp"

#include <zlib.h>

#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace cubicslice {

namespace {

void put_u32_be(std::string& out, std::uint32_t v) {
  out.push_back(static_cast<char>((v >> 24) & 0xff));
  out.push_back(static_cast<char>((v >> 16) & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
  out.push_back(static_cast<char>(v & 0xff));
}

void put_chunk(std::ofstream& os, const char type[4], const std::string& data) {
  std::string head;
  put_u32_be(head, static_cast<std::uint32_t>(data.size()));
  os.write(head.data(), 4);
  std::uint32_t crc = crc32(0, reinterpret_cast<const Bytef*>(type), 4);
  crc = crc32(crc, reinterpret_cast<const Bytef*>(data.data()),
              static_cast<uInt>(data.size()));
  os.write(type, 4);
  os.write(data.data(), static_cast<std::streamsize>(data.size()));
  std::string tail;
  put_u32_be(tail, crc);
  os.write(tail.data(), 4);
}

template <class T>
void put_le(std::ofstream& os, T v) {
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  os.write(buf, sizeof(T));
}

template <class T>
T get_le(std::ifstream& is) {
  char buf[sizeof(T)];
  is.read(buf, sizeof(T));
  T v;
  std::memcpy(&v, buf, sizeof(T));
  return v;
}

}  // namespace

void write_png(const std::string& path, int width, int height,
               const std::vector<Rgba>& pixels) {
  if (static_cast<size_t>(width) * height != pixels.size()) {
    throw std::invalid_argument("write_png: size mismatch");
  }
  // Scanlines, top row first, one filter byte (0 = none) per row.
  std::vector<Bytef> raw;
  raw.reserve(static_cast<size_t>(height) * (1 + 4 * width));
  for (int row = height - 1; row >= 0; --row) {
    raw.push_back(0);
    for (int ix = 0; ix < width; ++ix) {
      const Rgba& p = pixels[static_cast<size_t>(row) * width + ix];
      raw.push_back(p.r);
      raw.push_back(p.g);
      raw.push_back(p.b);
      raw.push_back(p.a);
    }
  }
  uLongf comp_size = compressBound(static_cast<uLong>(raw.size()));
  std::string idat(comp_size, '\0');
  if (compress2(reinterpret_cast<Bytef*>(idat.data()), &comp_size, raw.data(),
                static_cast<uLong>(raw.size()), 6) != Z_OK) {
    throw std::runtime_error("write_png: deflate failed");
  }
  idat.resize(comp_size);

  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("write_png: cannot open " + path);
  static const unsigned char sig[8] = {137, 80, 78, 71, 13, 10, 26, 10};
  os.write(reinterpret_cast<const char*>(sig), 8);
  std::string ihdr;
  put_u32_be(ihdr, static_cast<std::uint32_t>(width));
  put_u32_be(ihdr, static_cast<std::uint32_t>(height));
  ihdr.push_back(8);   // bit depth
  ihdr.push_back(6);   // RGBA
  ihdr.push_back(0);   // deflate
  ihdr.push_back(0);   // filter
  ihdr.push_back(0);   // no interlace
  put_chunk(os, "IHDR", ihdr);
  put_chunk(os, "IDAT", idat);
  put_chunk(os, "IEND", "");
}

void write_sidecar(const std::string& path, const GridField& field) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("write_sidecar: cannot open " + path);
  os.write("SLCF", 4);
  put_le<std::uint32_t>(os, 1);
  put_le<std::uint32_t>(os, static_cast<std::uint32_t>(field.width));
  put_le<std::uint32_t>(os, static_cast<std::uint32_t>(field.height));
  const cplx ctr = field.center();
  put_le<double>(os, ctr.real());
  put_le<double>(os, ctr.imag());
  put_le<double>(os, field.half_width());
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (size_t i = 0; i < field.values.size(); ++i) {
    put_le<double>(os, field.mask[i] ? field.values[i] : nan);
  }
}

GridField read_sidecar(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("read_sidecar: cannot open " + path);
  char magic[4];
  is.read(magic, 4);
  if (std::memcmp(magic, "SLCF", 4) != 0) {
    throw std::runtime_error("read_sidecar: bad magic");
  }
  const auto version = get_le<std::uint32_t>(is);
  if (version != 1) throw std::runtime_error("read_sidecar: unknown version");
  const auto width = get_le<std::uint32_t>(is);
  const auto height = get_le<std::uint32_t>(is);
  const double cre = get_le<double>(is);
  const double cim = get_le<double>(is);
  const double hw = get_le<double>(is);
  if (width != height) throw std::runtime_error("read_sidecar: non-square grid");
  GridField f = GridField::make({cre, cim}, hw, static_cast<int>(width));
  for (size_t i = 0; i < f.values.size(); ++i) {
    const double v = get_le<double>(is);
    if (std::isnan(v)) {
      f.mask[i] = 0;
    } else {
      f.values[i] = v;
    }
  }
  if (!is) throw std::runtime_error("read_sidecar: truncated file");
  return f;
}

}  // namespace cubicslice
