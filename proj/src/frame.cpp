#include "ipsep/frame.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ipsep/errors.hpp"
#include "ipsep/fft.hpp"

namespace ipsep {

cvec Frame::analyze(const cvec& x) const {
  cvec c;
  analysis(x, c);
  return c;
}

cvec Frame::synthesize(const cvec& c) const {
  cvec x;
  synthesis(c, x);
  return x;
}

void IdentityFrame::analysis(const cvec& x, cvec& c) const {
  if (x.size() != n_) throw ShapeError("identity frame: length mismatch");
  c = x;
}

void IdentityFrame::synthesis(const cvec& c, cvec& x) const {
  if (c.size() != n_) throw ShapeError("identity frame: length mismatch");
  x = c;
}

MatrixFrame::MatrixFrame(std::size_t n, std::size_t k, cvec column_major, std::string name)
    : n_(n), k_(k), b_(std::move(column_major)), name_(std::move(name)) {
  if (b_.size() != n * k) throw ShapeError("matrix frame: size mismatch");
  // B B^H = I  (Parseval) and, if square, B^H B = I.
  double err = 0;
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t s = 0; s < n; ++s) {
      cplx acc{};
      for (std::size_t c = 0; c < k; ++c) acc += b_[c * n + r] * std::conj(b_[c * n + s]);
      err = std::max(err, std::abs(acc - cplx(r == s ? 1.0 : 0.0)));
    }
  parseval_ = err < 1e-10;
  orthonormal_ = parseval_ && n == k;
}

void MatrixFrame::analysis(const cvec& x, cvec& c) const {
  if (x.size() != n_) throw ShapeError("matrix frame: length mismatch");
  c.assign(k_, cplx{});
  for (std::size_t col = 0; col < k_; ++col) {
    cplx acc{};
    for (std::size_t r = 0; r < n_; ++r) acc += x[r] * std::conj(b_[col * n_ + r]);
    c[col] = acc;
  }
}

void MatrixFrame::synthesis(const cvec& c, cvec& x) const {
  if (c.size() != k_) throw ShapeError("matrix frame: length mismatch");
  x.assign(n_, cplx{});
  for (std::size_t col = 0; col < k_; ++col)
    for (std::size_t r = 0; r < n_; ++r) x[r] += b_[col * n_ + r] * c[col];
}

MatrixFrame MatrixFrame::dft(std::size_t n) {
  cvec b(n * n);
  const double s = 1.0 / std::sqrt(double(n));
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t t = 0; t < n; ++t)
      b[k * n + t] = std::polar(s, 2 * std::numbers::pi * double(k * t % n) / double(n));
  return MatrixFrame(n, n, std::move(b), "dft");
}

MatrixFrame MatrixFrame::dct(std::size_t n) {
  cvec b(n * n);
  for (std::size_t k = 0; k < n; ++k) {
    const double a = k == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
    for (std::size_t t = 0; t < n; ++t) b[k * n + t] = a * std::cos(std::numbers::pi * (t + 0.5) * k / n);
  }
  return MatrixFrame(n, n, std::move(b), "dct");
}

MatrixFrame MatrixFrame::haar(std::size_t n) {
  if (!is_power_of_two(static_cast<long>(n))) throw SizeError("haar basis needs a power-of-two length");
  cvec b(n * n);
  std::size_t col = 0;
  for (std::size_t t = 0; t < n; ++t) b[t] = 1.0 / std::sqrt(double(n));
  ++col;
  for (std::size_t width = n; width >= 2; width /= 2) {
    const double a = 1.0 / std::sqrt(double(width));
    for (std::size_t start = 0; start < n; start += width, ++col) {
      for (std::size_t t = 0; t < width / 2; ++t) b[col * n + start + t] = a;
      for (std::size_t t = width / 2; t < width; ++t) b[col * n + start + t] = -a;
    }
  }
  return MatrixFrame(n, n, std::move(b), "haar");
}

GridFrame::GridFrame(int n) : n_(n) { require_grid_size(n); }

void GridFrame::analysis(const cvec& x, cvec& c) const {
  if (x.size() != signal_size()) throw ShapeError("signal does not match frame grid");
  cvec f = x;
  fft::centered_forward(f, n_);
  analysis_spectrum(f, c);
}

void GridFrame::synthesis(const cvec& c, cvec& x) const {
  if (c.size() != coeff_size()) throw ShapeError("coefficient table does not match frame");
  synthesis_spectrum(c, x);
  fft::centered_inverse(x, n_);
}

cvec GridFrame::atom_spectrum_at(std::size_t i) const {
  if (i >= coeff_size()) throw IndexError("coefficient index out of range");
  cvec c(coeff_size()), spec;
  c[i] = 1;
  synthesis_spectrum(c, spec);
  return spec;
}

}  // namespace ipsep
