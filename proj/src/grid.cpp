#include "ipsep/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ipsep/errors.hpp"
#include "ipsep/fft.hpp"

namespace ipsep {

bool is_power_of_two(long n) { return n > 0 && (n & (n - 1)) == 0; }

void require_grid_size(int n) {
  if (!is_power_of_two(n)) throw SizeError("grid size " + std::to_string(n) + " is not a power of two");
}

SampledImage::SampledImage(int n, Domain d) : rows(n), cols(n), domain(d) {
  require_grid_size(n);
  data.assign(static_cast<std::size_t>(n) * n, cplx{});
}

SampledImage::SampledImage(int n, Domain d, cvec values) : rows(n), cols(n), domain(d), data(std::move(values)) {
  require_grid_size(n);
  if (data.size() != static_cast<std::size_t>(n) * n) throw ShapeError("data length does not match grid");
}

static void require_same(const SampledImage& a, const SampledImage& b) {
  if (a.rows != b.rows || a.cols != b.cols) throw ShapeError("grid size mismatch");
  if (a.domain != b.domain) throw ShapeError("domain mismatch");
}

cplx inner(const cvec& a, const cvec& b) {
  if (a.size() != b.size()) throw ShapeError("length mismatch");
  cplx s{};
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * std::conj(b[i]);
  return s;
}

cplx inner(const SampledImage& a, const SampledImage& b) {
  require_same(a, b);
  return inner(a.data, b.data);
}

double norm2(const cvec& a) {
  double s = 0;
  for (const auto& v : a) s += std::norm(v);
  return std::sqrt(s);
}

double norm2(const SampledImage& a) { return norm2(a.data); }

static void require_square(const SampledImage& img) {
  if (img.rows != img.cols) throw SizeError("grid must be square");
  require_grid_size(img.rows);
  if (img.data.size() != static_cast<std::size_t>(img.rows) * img.cols) throw ShapeError("data length does not match grid");
}

SampledImage forward_transform(const SampledImage& img) {
  require_square(img);
  if (img.domain != Domain::Spatial) throw ShapeError("forward_transform expects a spatial image");
  SampledImage out = img;
  out.domain = Domain::Frequency;
  fft::centered_forward(out.data, out.rows);
  return out;
}

SampledImage inverse_transform(const SampledImage& img) {
  require_square(img);
  if (img.domain != Domain::Frequency) throw ShapeError("inverse_transform expects a frequency image");
  SampledImage out = img;
  out.domain = Domain::Spatial;
  fft::centered_inverse(out.data, out.rows);
  return out;
}

SampledImage resize_spectrum(const SampledImage& spec, int n) {
  if (spec.domain != Domain::Frequency) throw ShapeError("resize_spectrum expects a frequency image");
  SampledImage out(n, Domain::Frequency);
  const int m = spec.rows;
  const int lo = -std::min(m, n) / 2;
  const int hi = std::min(m, n) / 2;
  for (int a = lo; a < hi; ++a)
    for (int b = lo; b < hi; ++b) out.at(a + n / 2, b + n / 2) = spec.at(a + m / 2, b + m / 2);
  return out;
}

}  // namespace ipsep
