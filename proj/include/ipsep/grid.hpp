#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace ipsep {

using cplx = std::complex<double>;
using cvec = std::vector<cplx>;

enum class Domain { Spatial, Frequency };

// Square N x N grid, row-major. Frequency bin (p, q) holds integer frequency
// (p - N/2, q - N/2); spatial sample (p, q) sits at x = ((p - N/2)/N, (q - N/2)/N)
// on the unit torus. The first index is the first coordinate.
struct SampledImage {
  int rows = 0;
  int cols = 0;
  Domain domain = Domain::Spatial;
  cvec data;

  SampledImage() = default;
  SampledImage(int n, Domain d);
  SampledImage(int n, Domain d, cvec values);

  int size() const { return rows; }
  // Frequency half-width of the grid (unit frequency spacing).
  double extent() const { return rows / 2.0; }
  cplx& at(int p, int q) { return data[static_cast<std::size_t>(p) * cols + q]; }
  const cplx& at(int p, int q) const { return data[static_cast<std::size_t>(p) * cols + q]; }
};

bool is_power_of_two(long n);
void require_grid_size(int n);

// Integer coordinate of index p on an n-grid (p - n/2).
inline int centered(int p, int n) { return p - n / 2; }
// Index of integer coordinate v on an n-grid, wrapped periodically.
inline int wrap_index(long v, int n) {
  long r = (v + n / 2) % n;
  if (r < 0) r += n;
  return static_cast<int>(r);
}

cplx inner(const SampledImage& a, const SampledImage& b);
double norm2(const SampledImage& a);
double norm2(const cvec& a);
cplx inner(const cvec& a, const cvec& b);

SampledImage forward_transform(const SampledImage& img);
SampledImage inverse_transform(const SampledImage& img);

// Exact spectral crop / zero-pad between grid sizes (frequency domain).
SampledImage resize_spectrum(const SampledImage& spec, int n);

}  // namespace ipsep
