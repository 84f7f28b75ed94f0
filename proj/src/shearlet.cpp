#include "ipsep/shearlet.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <tuple>

#include <json.hpp>

#include "ipsep/errors.hpp"
#include "ipsep/fft.hpp"
#include "ipsep/io.hpp"
#include "ipsep/windows.hpp"

namespace ipsep {

int alpha_numerator(double alpha, int j) {
  if (!(alpha > 0 && alpha < 2)) throw ParamError("alpha must lie in (0, 2)");
  if (j < 1) throw ParamError("scale j must be >= 1");
  int m = static_cast<int>(std::floor(j * alpha + 0.5));
  return std::clamp(m, 0, 2 * j - 1);
}

double alpha_sequence(double alpha, int j) { return double(alpha_numerator(alpha, j)) / j; }

int shear_count(double alpha, int j) { return 1 << (2 * j - alpha_numerator(alpha, j)); }

std::string iota_name(Iota i) {
  switch (i) {
    case Iota::coarse: return "coarse";
    case Iota::h: return "h";
    case Iota::v: return "v";
    case Iota::b: return "b";
    case Iota::residual: return "residual";
  }
  return "?";
}

double shearlet_window(double alpha, int j, int l, Iota iota, double xi1, double xi2) {
  const int K = shear_count(alpha, j);
  const double w = windows::corona_W_j(xi1, xi2, j);
  if (w <= 0) return 0;
  const bool hcone = std::abs(xi2) <= std::abs(xi1);
  if (iota == Iota::h && (!hcone || std::abs(l) >= K)) return 0;
  if (iota == Iota::v && (hcone || std::abs(l) >= K)) return 0;
  if (iota == Iota::b && std::abs(l) != K) return 0;
  const double u = hcone ? K * xi2 / xi1 : K * xi1 / xi2;
  return w * windows::cone_bump(u - l);
}

namespace {

int next_pow2(long v) {
  int p = 1;
  while (p < v) p <<= 1;
  return p;
}

long pmod(long a, long m) {
  long r = a % m;
  return r < 0 ? r + m : r;
}

bool alias_free(const std::vector<std::pair<int, int>>& pts, int r, int c) {
  std::vector<unsigned char> seen(static_cast<std::size_t>(r) * c, 0);
  for (auto [a, b] : pts) {
    const std::size_t slot = pmod(a, r) * c + pmod(b, c);
    if (seen[slot]) return false;
    seen[slot] = 1;
  }
  return true;
}

}  // namespace

ShearletSystem::ShearletSystem(int n, int j_max, ShearletOptions opts) : GridFrame(n), opts_(opts), j_max_(j_max) {
  if (!(opts_.alpha > 0 && opts_.alpha < 2)) throw ParamError("alpha must lie in (0, 2)");
  if (j_max < 1) throw ParamError("J_max must be >= 1");
  if (!opts_.allow_partial_top && (1L << (2 * j_max - 1)) > n / 2)
    throw ParamError("corona of scale J_max does not fit the grid (need 2^{2J-1} <= N/2)");
  if (opts_.allow_partial_top && (1L << (2 * j_max - 3)) > n / 2)
    throw ParamError("J_max plateau lies outside the grid");
  build();
}

void ShearletSystem::build() {
  using windows::cone_bump;
  const int n = n_;
  std::map<std::tuple<int, int, int>, int> index;
  auto add_band = [&](int j, int l, Iota io) {
    Subband sb;
    sb.j = j;
    sb.l = l;
    sb.iota = io;
    index[{j, l, static_cast<int>(io)}] = static_cast<int>(subbands_.size());
    subbands_.push_back(std::move(sb));
  };
  add_band(-1, 0, Iota::coarse);
  for (int j = 1; j <= j_max_; ++j) {
    const int K = shear_count(opts_.alpha, j);
    for (int l = -K + 1; l < K; ++l) add_band(j, l, Iota::h);
    for (int l = -K + 1; l < K; ++l) add_band(j, l, Iota::v);
    add_band(j, -K, Iota::b);
    add_band(j, K, Iota::b);
  }
  const bool need_residual = static_cast<long>(n / 2) > (1L << (2 * j_max_ - 2));
  if (need_residual) add_band(j_max_ + 1, 0, Iota::residual);

  auto push = [&](int band, std::uint32_t bin, double val) {
    subbands_[band].bins.push_back(bin);
    subbands_[band].vals.push_back(val);
  };
  const double top = std::ldexp(1.0, -2 * j_max_ - 2);
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < n; ++q) {
      const double x1 = centered(p, n), x2 = centered(q, n);
      const auto bin = static_cast<std::uint32_t>(p * n + q);
      const double ph = windows::Phi_hat(x1, x2);
      if (ph > 0) push(0, bin, ph);
      for (int j = 1; j <= j_max_; ++j) {
        const double w = windows::corona_W_j(x1, x2, j);
        if (w <= 0) continue;
        const int K = shear_count(opts_.alpha, j);
        const bool hcone = std::abs(x2) <= std::abs(x1);
        const double u = hcone ? K * x2 / x1 : K * x1 / x2;
        const Iota interior = hcone ? Iota::h : Iota::v;
        for (int l = static_cast<int>(std::floor(u)) - 1; l <= static_cast<int>(std::ceil(u)) + 1; ++l) {
          if (std::abs(l) > K) continue;
          const double val = w * cone_bump(u - l);
          if (val <= 0) continue;
          const Iota io = std::abs(l) == K ? Iota::b : interior;
          push(index.at({j, l, static_cast<int>(io)}), bin, val);
        }
      }
      if (need_residual) {
        const double t = windows::Phi_hat(top * x1, top * x2);
        const double r = 1 - t * t;
        if (r > 0) push(index.at({j_max_ + 1, 0, static_cast<int>(Iota::residual)}), bin, std::sqrt(r));
      }
    }
  }
  std::erase_if(subbands_, [](const Subband& s) { return s.bins.empty(); });

  total_ = 0;
  for (auto& sb : subbands_) {
    std::vector<std::pair<int, int>> pts;
    pts.reserve(sb.bins.size());
    int lo1 = n, hi1 = -n, lo2 = n, hi2 = -n;
    for (auto bin : sb.bins) {
      const int a = centered(static_cast<int>(bin) / n, n), b = centered(static_cast<int>(bin) % n, n);
      pts.emplace_back(a, b);
      lo1 = std::min(lo1, a);
      hi1 = std::max(hi1, a);
      lo2 = std::min(lo2, b);
      hi2 = std::max(hi2, b);
    }
    int r = n, c = n;
    if (opts_.sampling == Sampling::Lattice) {
      // Model lattice: A^{-j} S^{-l} Z^2 is the rectangle 2^{-m} Z x 2^{-2j} Z for the
      // v-cone (transposed for h); boundary atoms use the half-step lattice.
      bool chosen = false;
      if (sb.iota == Iota::h || sb.iota == Iota::v || sb.iota == Iota::b) {
        const int m = alpha_numerator(opts_.alpha, sb.j);
        const int extra = sb.iota == Iota::b ? 1 : 0;
        const int coarse = std::min(n, 1 << (m + extra)), fine = std::min(n, 1 << (2 * sb.j + extra));
        r = sb.iota == Iota::h ? fine : coarse;
        c = sb.iota == Iota::h ? coarse : fine;
        chosen = alias_free(pts, r, c);
      }
      if (!chosen) {
        r = std::min(n, next_pow2(hi1 - lo1 + 1));
        c = std::min(n, next_pow2(hi2 - lo2 + 1));
        while (r > 1 && alias_free(pts, r / 2, c)) r /= 2;
        while (c > 1 && alias_free(pts, r, c / 2)) c /= 2;
      }
    }
    sb.rows = r;
    sb.cols = c;
    sb.fold.resize(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i)
      sb.fold[i] = static_cast<std::uint32_t>(pmod(pts[i].first, r) * c + pmod(pts[i].second, c));
    sb.offset = total_;
    total_ += sb.size();
  }
}

int ShearletSystem::find(int j, int l, Iota iota) const {
  for (std::size_t i = 0; i < subbands_.size(); ++i)
    if (subbands_[i].j == j && subbands_[i].l == l && subbands_[i].iota == iota) return static_cast<int>(i);
  return -1;
}

bool ShearletSystem::has_residual() const { return !subbands_.empty() && subbands_.back().iota == Iota::residual; }

void ShearletSystem::analysis_spectrum(const cvec& fhat, cvec& c) const {
  if (fhat.size() != signal_size()) throw ShapeError("spectrum does not match shearlet grid");
  c.assign(total_, cplx{});
  for (const auto& sb : subbands_) {
    cplx* out = c.data() + sb.offset;
    for (std::size_t k = 0; k < sb.bins.size(); ++k) out[sb.fold[k]] += fhat[sb.bins[k]] * sb.vals[k];
    fft::dft2(out, sb.rows, sb.cols, +1);
    const double s = 1.0 / std::sqrt(double(sb.size()));
    for (std::size_t i = 0; i < sb.size(); ++i) out[i] *= s;
  }
}

void ShearletSystem::synthesis_spectrum(const cvec& c, cvec& fhat) const {
  if (c.size() != total_) throw ShapeError("coefficient table does not match shearlet system");
  fhat.assign(signal_size(), cplx{});
  cvec buf;
  for (const auto& sb : subbands_) {
    buf.assign(c.begin() + static_cast<long>(sb.offset), c.begin() + static_cast<long>(sb.offset + sb.size()));
    fft::dft2(buf.data(), sb.rows, sb.cols, -1);
    const double s = 1.0 / std::sqrt(double(sb.size()));
    for (std::size_t k = 0; k < sb.bins.size(); ++k) fhat[sb.bins[k]] += buf[sb.fold[k]] * (sb.vals[k] * s);
  }
}

SampledImage ShearletSystem::multiplier(int band) const {
  if (band < 0 || band >= static_cast<int>(subbands_.size())) throw IndexError("subband out of range");
  SampledImage m(n_, Domain::Frequency);
  const auto& sb = subbands_[band];
  for (std::size_t k = 0; k < sb.bins.size(); ++k) m.data[sb.bins[k]] = sb.vals[k];
  return m;
}

double ShearletSystem::unity_error() const {
  std::vector<double> acc(signal_size(), 0.0);
  for (const auto& sb : subbands_)
    for (std::size_t k = 0; k < sb.bins.size(); ++k) acc[sb.bins[k]] += sb.vals[k] * sb.vals[k];
  double err = 0;
  for (double a : acc) err = std::max(err, std::abs(a - 1));
  return err;
}

double ShearletSystem::position(int y, int dim) {
  const long yy = pmod(static_cast<long>(y) + dim / 2, dim) - dim / 2;
  return double(yy) / dim;
}

cvec ShearletSystem::atom_spectrum(int band, int y1, int y2) const {
  if (band < 0 || band >= static_cast<int>(subbands_.size())) throw IndexError("subband out of range");
  const auto& sb = subbands_[band];
  cvec spec(signal_size(), cplx{});
  const double s = 1.0 / std::sqrt(double(sb.size()));
  const double t1 = double(pmod(y1, sb.rows)) / sb.rows, t2 = double(pmod(y2, sb.cols)) / sb.cols;
  for (std::size_t k = 0; k < sb.bins.size(); ++k) {
    const int a = centered(static_cast<int>(sb.bins[k]) / n_, n_), b = centered(static_cast<int>(sb.bins[k]) % n_, n_);
    // reduce the phase argument modulo 1 before scaling by 2 pi
    const double ph = std::fmod(a * t1 + b * t2, 1.0);
    spec[sb.bins[k]] = std::polar(sb.vals[k] * s, -2 * std::numbers::pi * ph);
  }
  return spec;
}

void ShearletSystem::locate(std::size_t i, int& band, int& y1, int& y2) const {
  if (i >= total_) throw IndexError("coefficient index out of range");
  auto it = std::upper_bound(subbands_.begin(), subbands_.end(), i,
                             [](std::size_t v, const Subband& sb) { return v < sb.offset; });
  band = static_cast<int>(it - subbands_.begin()) - 1;
  const std::size_t local = i - subbands_[band].offset;
  y1 = static_cast<int>(local / subbands_[band].cols);
  y2 = static_cast<int>(local % subbands_[band].cols);
}

cvec ShearletSystem::atom_spectrum_at(std::size_t i) const {
  int band, y1, y2;
  locate(i, band, y1, y2);
  return atom_spectrum(band, y1, y2);
}

SampledImage ShearletSystem::render_atom(int band, int y1, int y2) const {
  SampledImage img(n_, Domain::Frequency, atom_spectrum(band, y1, y2));
  return inverse_transform(img);
}

void ShearletSystem::lattice_point(const ShearletIndex& idx, int& band, int& y1, int& y2) const {
  band = find(idx.iota == Iota::coarse ? -1 : idx.j, idx.l, idx.iota);
  if (band < 0) throw IndexError("no such shearlet subband");
  const auto& sb = subbands_[band];
  // positions in units of 2^{-2j} (fine) and 2^{-m} (coarse direction)
  auto to_lattice = [](long num, int log2den, int dim, int& y) {
    // y = num * dim / 2^{log2den}
    const long scaled = num * dim;
    const long den = 1L << log2den;
    if (scaled % den != 0) throw IndexError("translation is not on the subband lattice");
    y = static_cast<int>(pmod(scaled / den, dim));
  };
  if (idx.iota == Iota::v || idx.iota == Iota::h) {
    const int m = alpha_numerator(opts_.alpha, idx.j);
    if (idx.iota == Iota::v) {
      to_lattice(idx.k1, m, sb.rows, y1);
      to_lattice(static_cast<long>(idx.k2) - static_cast<long>(idx.l) * idx.k1, 2 * idx.j, sb.cols, y2);
    } else {
      to_lattice(static_cast<long>(idx.k1) - static_cast<long>(idx.l) * idx.k2, 2 * idx.j, sb.rows, y1);
      to_lattice(idx.k2, m, sb.cols, y2);
    }
  } else {
    y1 = static_cast<int>(pmod(idx.k1, sb.rows));
    y2 = static_cast<int>(pmod(idx.k2, sb.cols));
  }
}

SampledImage ShearletSystem::render_atom(const ShearletIndex& idx) const {
  int band, y1, y2;
  lattice_point(idx, band, y1, y2);
  return render_atom(band, y1, y2);
}

std::size_t ShearletSystem::coeff_index(int band, int y1, int y2) const {
  const auto& sb = subbands_.at(band);
  return sb.offset + static_cast<std::size_t>(pmod(y1, sb.rows)) * sb.cols + pmod(y2, sb.cols);
}

void export_coefficients(const ShearletSystem& sys, const cvec& coeffs, const std::string& dir) {
  if (coeffs.size() != sys.coeff_size()) throw ShapeError("coefficient table does not match shearlet system");
  std::filesystem::create_directories(dir);
  nlohmann::json manifest;
  manifest["grid"] = sys.grid();
  manifest["alpha"] = sys.alpha();
  manifest["j_max"] = sys.j_max();
  manifest["subbands"] = nlohmann::json::array();
  for (std::size_t b = 0; b < sys.subbands().size(); ++b) {
    const auto& sb = sys.subbands()[b];
    const std::string file = "subband_" + std::to_string(b) + ".ipg";
    write_raw_grid(coeffs.data() + sb.offset, sb.rows, sb.cols, dir + "/" + file);
    manifest["subbands"].push_back({{"j", sb.j},
                                    {"l", sb.l},
                                    {"iota", iota_name(sb.iota)},
                                    {"rows", sb.rows},
                                    {"cols", sb.cols},
                                    {"normalization", 1.0 / std::sqrt(double(sb.size()))},
                                    {"file", file}});
  }
  std::ofstream(dir + "/manifest.json") << manifest.dump(2) << "\n";
}

}  // namespace ipsep
