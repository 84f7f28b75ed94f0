#pragma once

#include <string>
#include <vector>

#include "ipsep/grid.hpp"

namespace ipsep {

// IPG1: "IPG1", u32 rows, u32 cols, u8 dtype (0 real f64, 1 complex f64 pairs),
// row-major little-endian payload of exact length.
SampledImage read_grid(const std::string& path);
void write_grid(const SampledImage& img, const std::string& path, bool real = false);

// Raw forms used for coefficient tables (any rows x cols).
struct RawGrid {
  int rows = 0;
  int cols = 0;
  cvec data;
};
RawGrid read_raw_grid(const std::string& path);
void write_raw_grid(const cplx* data, int rows, int cols, const std::string& path, bool real = false);

// 8-bit grayscale magnitude preview, 99th-percentile normalization.
void write_png_magnitude(const cplx* data, int rows, int cols, const std::string& path);
void write_png_gray(const std::vector<unsigned char>& pixels, int rows, int cols, const std::string& path);

}  // namespace ipsep
