#include "ipsep/io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>

#include "ipsep/errors.hpp"

namespace ipsep {

namespace {

static_assert(sizeof(double) == 8);

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint32_t get_u32(const unsigned char* p) {
  return std::uint32_t(p[0]) | (std::uint32_t(p[1]) << 8) | (std::uint32_t(p[2]) << 16) | (std::uint32_t(p[3]) << 24);
}

void put_f64(std::string& out, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
}

double get_f64(const unsigned char* p) {
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= std::uint64_t(p[i]) << (8 * i);
  double v;
  std::memcpy(&v, &bits, 8);
  return v;
}

}  // namespace

RawGrid read_raw_grid(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IOError("cannot open " + path);
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const auto* b = reinterpret_cast<const unsigned char*>(bytes.data());
  if (bytes.size() < 13) throw FormatError(path + ": truncated header");
  if (std::memcmp(b, "IPG1", 4) != 0) throw FormatError(path + ": bad magic");
  RawGrid g;
  const std::uint32_t rows = get_u32(b + 4);
  const std::uint32_t cols = get_u32(b + 8);
  const int dtype = b[12];
  if (dtype != 0 && dtype != 1) throw FormatError(path + ": unknown dtype");
  const std::size_t width = dtype == 0 ? 8 : 16;
  const std::size_t expect = std::size_t(rows) * cols * width;
  if (bytes.size() - 13 != expect) throw FormatError(path + ": payload length mismatch");
  g.rows = static_cast<int>(rows);
  g.cols = static_cast<int>(cols);
  g.data.resize(std::size_t(rows) * cols);
  const unsigned char* p = b + 13;
  for (auto& v : g.data) {
    if (dtype == 0) {
      v = cplx(get_f64(p), 0.0);
      p += 8;
    } else {
      v = cplx(get_f64(p), get_f64(p + 8));
      p += 16;
    }
  }
  return g;
}

void write_raw_grid(const cplx* data, int rows, int cols, const std::string& path, bool real) {
  std::string out = "IPG1";
  put_u32(out, static_cast<std::uint32_t>(rows));
  put_u32(out, static_cast<std::uint32_t>(cols));
  out.push_back(static_cast<char>(real ? 0 : 1));
  const std::size_t n = std::size_t(rows) * cols;
  out.reserve(out.size() + n * (real ? 8 : 16));
  for (std::size_t i = 0; i < n; ++i) {
    put_f64(out, data[i].real());
    if (!real) put_f64(out, data[i].imag());
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IOError("cannot write " + path);
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw IOError("write failed: " + path);
}

SampledImage read_grid(const std::string& path) {
  RawGrid g = read_raw_grid(path);
  if (g.rows != g.cols) throw SizeError(path + ": grid is not square");
  return SampledImage(g.rows, Domain::Spatial, std::move(g.data));
}

void write_grid(const SampledImage& img, const std::string& path, bool real) {
  write_raw_grid(img.data.data(), img.rows, img.cols, path, real);
}

void write_png_gray(const std::vector<unsigned char>& pixels, int rows, int cols, const std::string& path) {
  std::unique_ptr<FILE, int (*)(FILE*)> fp(std::fopen(path.c_str(), "wb"), &std::fclose);
  if (!fp) throw IOError("cannot write " + path);
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png_create_info_struct(png);
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IOError("png encoding failed: " + path);
  }
  png_init_io(png, fp.get());
  png_set_IHDR(png, info, cols, rows, 8, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int r = 0; r < rows; ++r)
    png_write_row(png, const_cast<png_bytep>(pixels.data() + std::size_t(r) * cols));
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

void write_png_magnitude(const cplx* data, int rows, int cols, const std::string& path) {
  const std::size_t n = std::size_t(rows) * cols;
  std::vector<double> mag(n);
  for (std::size_t i = 0; i < n; ++i) mag[i] = std::abs(data[i]);
  std::vector<double> sorted = mag;
  const std::size_t k = std::min(n - 1, static_cast<std::size_t>(0.99 * double(n)));
  std::nth_element(sorted.begin(), sorted.begin() + k, sorted.end());
  double scale = sorted[k];
  if (scale <= 0) scale = *std::max_element(mag.begin(), mag.end());
  std::vector<unsigned char> px(n, 0);
  if (scale > 0)
    for (std::size_t i = 0; i < n; ++i) px[i] = static_cast<unsigned char>(std::lround(255.0 * std::min(1.0, mag[i] / scale)));
  write_png_gray(px, rows, cols, path);
}

}  // namespace ipsep
