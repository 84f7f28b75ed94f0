#include "ipsep/gabor.hpp"

#include <cmath>
#include <numbers>

#include "ipsep/errors.hpp"
#include "ipsep/fft.hpp"
#include "ipsep/windows.hpp"

namespace ipsep {

namespace {
long pmod(long a, long m) {
  long r = a % m;
  return r < 0 ? r + m : r;
}
}  // namespace

GaborSystem::GaborSystem(int n, int s) : GridFrame(n), s_(s) {
  if (s < 1 || n % (2 * s) != 0) throw ParamError("band size s must be a positive integer with 2s dividing N");
  nb_ = n / s;
  total_ = static_cast<std::size_t>(nb_) * nb_ * 4 * s * s;
  const int w = 2 * s - 1;
  window_.resize(static_cast<std::size_t>(w) * w);
  for (int d1 = -s + 1; d1 < s; ++d1)
    for (int d2 = -s + 1; d2 < s; ++d2)
      window_[(d1 + s - 1) * w + (d2 + s - 1)] = windows::gabor_window_hat_s(d1, d2, s);
  // Frame constant from a delta: the frame operator is a Fourier multiplier.
  cvec delta(signal_size(), cplx(1.0 / n, 0.0));
  cvec c;
  analysis_raw(delta, c);
  double e = 0;
  for (const auto& v : c) e += std::norm(v);
  a_ = e;  // ||delta||_2 = 1
  norm_ = 1.0 / std::sqrt(a_);
}

void GaborSystem::analysis_raw(const cvec& fhat, cvec& c) const {
  const int p = 2 * s_, w = 2 * s_ - 1, n = n_;
  const std::size_t block = static_cast<std::size_t>(p) * p;
  c.assign(total_, cplx{});
  for (int i1 = 0; i1 < nb_; ++i1) {
    const int n1 = i1 - nb_ / 2;
    for (int i2 = 0; i2 < nb_; ++i2) {
      const int n2 = i2 - nb_ / 2;
      cplx* out = c.data() + (static_cast<std::size_t>(i1) * nb_ + i2) * block;
      for (int d1 = -s_ + 1; d1 < s_; ++d1) {
        const int row = wrap_index(static_cast<long>(s_) * n1 + d1, n);
        for (int d2 = -s_ + 1; d2 < s_; ++d2) {
          const int col = wrap_index(static_cast<long>(s_) * n2 + d2, n);
          out[pmod(d1, p) * p + pmod(d2, p)] =
              fhat[static_cast<std::size_t>(row) * n + col] * window_[(d1 + s_ - 1) * w + (d2 + s_ - 1)];
        }
      }
    }
  }
  fft::dft2(c.data(), p, p, +1, nb_ * nb_);
  // e^{2 pi i <s n, m> / (2s)} = (-1)^{<n, m>}
  for (int i1 = 0; i1 < nb_; ++i1)
    for (int i2 = 0; i2 < nb_; ++i2) {
      const int n1 = i1 - nb_ / 2, n2 = i2 - nb_ / 2;
      if ((n1 & 1) == 0 && (n2 & 1) == 0) continue;
      cplx* out = c.data() + (static_cast<std::size_t>(i1) * nb_ + i2) * block;
      for (int m1 = 0; m1 < p; ++m1)
        for (int m2 = 0; m2 < p; ++m2)
          if ((n1 * m1 + n2 * m2) & 1) out[m1 * p + m2] = -out[m1 * p + m2];
    }
}

void GaborSystem::analysis_spectrum(const cvec& fhat, cvec& c) const {
  if (fhat.size() != signal_size()) throw ShapeError("spectrum does not match Gabor grid");
  analysis_raw(fhat, c);
  for (auto& v : c) v *= norm_;
}

void GaborSystem::synthesis_spectrum(const cvec& c, cvec& fhat) const {
  if (c.size() != total_) throw ShapeError("coefficient table does not match Gabor system");
  const int p = 2 * s_, w = 2 * s_ - 1, n = n_;
  const std::size_t block = static_cast<std::size_t>(p) * p;
  cvec buf = c;
  for (int i1 = 0; i1 < nb_; ++i1)
    for (int i2 = 0; i2 < nb_; ++i2) {
      const int n1 = i1 - nb_ / 2, n2 = i2 - nb_ / 2;
      if ((n1 & 1) == 0 && (n2 & 1) == 0) continue;
      cplx* blk = buf.data() + (static_cast<std::size_t>(i1) * nb_ + i2) * block;
      for (int m1 = 0; m1 < p; ++m1)
        for (int m2 = 0; m2 < p; ++m2)
          if ((n1 * m1 + n2 * m2) & 1) blk[m1 * p + m2] = -blk[m1 * p + m2];
    }
  fft::dft2(buf.data(), p, p, -1, nb_ * nb_);
  fhat.assign(signal_size(), cplx{});
  for (int i1 = 0; i1 < nb_; ++i1) {
    const int n1 = i1 - nb_ / 2;
    for (int i2 = 0; i2 < nb_; ++i2) {
      const int n2 = i2 - nb_ / 2;
      const cplx* blk = buf.data() + (static_cast<std::size_t>(i1) * nb_ + i2) * block;
      for (int d1 = -s_ + 1; d1 < s_; ++d1) {
        const int row = wrap_index(static_cast<long>(s_) * n1 + d1, n);
        for (int d2 = -s_ + 1; d2 < s_; ++d2) {
          const int col = wrap_index(static_cast<long>(s_) * n2 + d2, n);
          fhat[static_cast<std::size_t>(row) * n + col] +=
              blk[pmod(d1, p) * p + pmod(d2, p)] * (window_[(d1 + s_ - 1) * w + (d2 + s_ - 1)] * norm_);
        }
      }
    }
  }
}

GaborIndex GaborSystem::canonical(GaborIndex g) const {
  const int p = 2 * s_;
  g.m1 = static_cast<int>(pmod(g.m1, p));
  g.m2 = static_cast<int>(pmod(g.m2, p));
  g.n1 = static_cast<int>(pmod(g.n1 + nb_ / 2, nb_)) - nb_ / 2;
  g.n2 = static_cast<int>(pmod(g.n2 + nb_ / 2, nb_)) - nb_ / 2;
  return g;
}

std::size_t GaborSystem::coeff_index(const GaborIndex& gi) const {
  const GaborIndex g = canonical(gi);
  const int p = 2 * s_;
  const std::size_t band = static_cast<std::size_t>(g.n1 + nb_ / 2) * nb_ + (g.n2 + nb_ / 2);
  return band * p * p + static_cast<std::size_t>(g.m1) * p + g.m2;
}

GaborIndex GaborSystem::index_of(std::size_t coeff) const {
  if (coeff >= total_) throw IndexError("Gabor coefficient out of range");
  const int p = 2 * s_;
  const std::size_t band = coeff / (static_cast<std::size_t>(p) * p);
  const std::size_t r = coeff % (static_cast<std::size_t>(p) * p);
  GaborIndex g;
  g.n1 = static_cast<int>(band / nb_) - nb_ / 2;
  g.n2 = static_cast<int>(band % nb_) - nb_ / 2;
  g.m1 = static_cast<int>(r / p);
  g.m2 = static_cast<int>(r % p);
  return g;
}

cvec GaborSystem::atom_spectrum(const GaborIndex& gi) const {
  const GaborIndex g = canonical(gi);
  const int p = 2 * s_, w = 2 * s_ - 1, n = n_;
  cvec spec(signal_size(), cplx{});
  for (int d1 = -s_ + 1; d1 < s_; ++d1)
    for (int d2 = -s_ + 1; d2 < s_; ++d2) {
      const long xi1 = static_cast<long>(s_) * g.n1 + d1, xi2 = static_cast<long>(s_) * g.n2 + d2;
      // phase <xi, m> / (2s) reduced modulo 1 exactly in integers
      const long num = pmod(xi1 * g.m1 + xi2 * g.m2, p);
      const double val = window_[(d1 + s_ - 1) * w + (d2 + s_ - 1)] * norm_;
      spec[static_cast<std::size_t>(wrap_index(xi1, n)) * n + wrap_index(xi2, n)] =
          std::polar(val, -2 * std::numbers::pi * double(num) / p);
    }
  return spec;
}

SampledImage GaborSystem::render_atom(const GaborIndex& g) const {
  return inverse_transform(SampledImage(n_, Domain::Frequency, atom_spectrum(g)));
}

}  // namespace ipsep
