#include "ipsep/models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <limits>
#include <random>
#include <set>

#include "ipsep/errors.hpp"
#include "ipsep/shearlet.hpp"
#include "ipsep/windows.hpp"

namespace ipsep {

namespace {
constexpr int kQuadrature = 8192;  // samples of w for its Fourier coefficients
}

double cartoon_w(const CartoonSpec& spec, double x) {
  switch (spec.kind) {
    case BumpKind::Centered: return 1 - windows::meyer_aux(std::abs(x) / spec.rho);
    case BumpKind::Offset: {
      const double half = spec.rho / 2;
      return 1 - windows::meyer_aux(std::abs(x - half) / half);
    }
  }
  return 0;
}

cplx cartoon_w_hat(const CartoonSpec& spec, int k) {
  // Periodic trapezoid rule on the torus; w vanishes near x = +-1/2.
  cplx acc{};
  for (int p = 0; p < kQuadrature; ++p) {
    const double x = double(p - kQuadrature / 2) / kQuadrature;
    const double w = cartoon_w(spec, x);
    if (w == 0) continue;
    acc += w * std::polar(1.0, -2 * std::numbers::pi * std::fmod(double(k) * x, 1.0));
  }
  if (spec.kind == BumpKind::Centered) acc.imag(0);  // even w
  return acc / double(kQuadrature);
}

SampledImage cartoon_spectrum(const CartoonSpec& spec, int n) {
  if (!(spec.rho > 0 && spec.rho < 0.5)) throw ParamError("cartoon rho must lie in (0, 1/2)");
  if (spec.r < 1) throw ParamError("cartoon cutoff r must be at least one grid frequency");
  SampledImage out(n, Domain::Frequency);
  std::vector<cplx> what(n);
  for (int p = 0; p < n; ++p) what[p] = cartoon_w_hat(spec, centered(p, n));
  const double c = spec.constant == StepConstant::TwoPi ? 2 * std::numbers::pi : std::numbers::pi;
  for (int p = 1; p < n; ++p)  // Nyquist row/column dropped: no conjugate partner on the grid
    for (int q = 1; q < n; ++q) {
      const double x2 = centered(q, n);
      if (std::abs(x2) < spec.r) continue;
      out.at(p, q) = what[p] * cplx(0.0, 1.0 / (c * x2));
    }
  return out;
}

SampledImage make_cartoon(const CartoonSpec& spec, int n) { return inverse_transform(cartoon_spectrum(spec, n)); }

SampledImage texture_spectrum(const TextureSpec& spec, int n) {
  if (spec.s < 1) throw ParamError("texture band size must be positive");
  if (spec.d.size() != spec.points.size()) throw ParamError("texture amplitudes do not match I_T");
  SampledImage out(n, Domain::Frequency);
  const int s = spec.s;
  for (std::size_t i = 0; i < spec.points.size(); ++i) {
    const long c1 = long(s) * spec.points[i][0], c2 = long(s) * spec.points[i][1];
    if (c1 < -n / 2 || c1 >= n / 2 || c2 < -n / 2 || c2 >= n / 2) throw ParamError("texture lattice point off the grid");
    for (int d1 = -s + 1; d1 < s; ++d1)
      for (int d2 = -s + 1; d2 < s; ++d2)
        out.at(wrap_index(c1 + d1, n), wrap_index(c2 + d2, n)) += spec.d[i] * windows::gabor_window_hat_s(d1, d2, s);
  }
  return out;
}

SampledImage make_texture(const TextureSpec& spec, int n) { return inverse_transform(texture_spectrum(spec, n)); }

bool in_corona_lattice(int s, int j, int n1, int n2) {
  const long r = std::max(std::abs(long(s) * n1), std::abs(long(s) * n2));
  return r > (1L << (2 * j)) / 16.0 && r <= (1L << (2 * j - 1));
}

std::vector<std::array<int, 2>> texture_neighborhood(const TextureSpec& spec) {
  std::set<std::array<int, 2>> out;
  for (const auto& p : spec.points)
    for (int a = -1; a <= 1; ++a)
      for (int b = -1; b <= 1; ++b)
        if (a * a + b * b <= 1) out.insert({p[0] + a, p[1] + b});
  return {out.begin(), out.end()};
}

std::vector<TextureScaleCheck> validate_texture(const TextureSpec& spec, double alpha, double epsilon,
                                                const std::vector<int>& scales, bool strict) {
  require_epsilon(alpha, epsilon);
  std::vector<TextureScaleCheck> rows;
  const auto nbhd = texture_neighborhood(spec);
  const int s = spec.s;
  for (int j : scales) {
    TextureScaleCheck row;
    row.j = j;
    const double aj = alpha_sequence(alpha, j);
    row.per_subband_bound = std::pow(2.0, (2 - aj - epsilon) * j / 2);
    row.neighborhood_bound = std::pow(2.0, aj * j) / s;
    const int K = shear_count(alpha, j);
    auto near_support = [&](int l, Iota io, const std::array<int, 2>& n) {
      // s n + B(0, 1) meets supp psi_{j,l,iota}
      static constexpr int off[5][2] = {{0, 0}, {1, 0}, {-1, 0}, {0, 1}, {0, -1}};
      for (const auto& o : off)
        if (shearlet_window(alpha, j, l, io, double(s) * n[0] + o[0], double(s) * n[1] + o[1]) > 0) return true;
      return false;
    };
    auto count_band = [&](int l, Iota io) {
      int c = 0;
      for (const auto& n : spec.points)
        if (near_support(l, io, n)) ++c;
      return c;
    };
    for (int l = -K + 1; l < K; ++l) {
      row.per_subband_max = std::max(row.per_subband_max, count_band(l, Iota::h));
      row.per_subband_max = std::max(row.per_subband_max, count_band(l, Iota::v));
    }
    row.per_subband_max = std::max(row.per_subband_max, count_band(K, Iota::b));
    row.per_subband_max = std::max(row.per_subband_max, count_band(-K, Iota::b));
    for (const auto& n : nbhd)
      if (in_corona_lattice(s, j, n[0], n[1])) ++row.neighborhood;
    row.ok = row.per_subband_max <= row.per_subband_bound && row.neighborhood <= row.neighborhood_bound;
    if (strict && !row.ok)
      throw ParamError("texture violates the sparsity caps at scale " + std::to_string(j) + " (per-subband " +
                       std::to_string(row.per_subband_max) + ", neighbourhood " + std::to_string(row.neighborhood) + ")");
    rows.push_back(row);
  }
  return rows;
}

void balance_texture(TextureSpec& spec, const std::vector<int>& scales, double constant) {
  for (int j : scales) {
    double e = 0;
    for (std::size_t i = 0; i < spec.points.size(); ++i)
      if (in_corona_lattice(spec.s, j, spec.points[i][0], spec.points[i][1])) e += std::norm(spec.d[i]);
    if (e == 0) continue;
    const double scale = std::sqrt(constant * std::ldexp(1.0, -2 * j) / e);
    for (std::size_t i = 0; i < spec.points.size(); ++i)
      if (in_corona_lattice(spec.s, j, spec.points[i][0], spec.points[i][1])) spec.d[i] *= scale;
  }
}

TextureSpec generate_texture(const TextureGenConfig& cfg, int n) {
  if (cfg.s < 1) throw ParamError("texture band size must be positive");
  if (cfg.scales.size() != cfg.counts.size()) throw ParamError("texture scales and counts differ in length");
  TextureSpec spec;
  spec.s = cfg.s;
  std::mt19937_64 rng(cfg.seed);
  const int s = cfg.s;
  for (std::size_t i = 0; i < cfg.scales.size(); ++i) {
    const int j = cfg.scales[i];
    // whole window inside the plateau W_j = 1: 2^{2j-3} <= |s n + d|_inf <= 2^{2j-2}
    const long lo = (1L << (2 * j - 3)) + s - 1, hi = (1L << (2 * j - 2)) - s + 1;
    std::vector<std::array<int, 2>> cand;
    const int lim = static_cast<int>(hi / s) + 1;
    for (int a = -lim; a <= lim; ++a)
      for (int b = -lim; b <= lim; ++b) {
        const long r = std::max(std::abs(long(s) * a), std::abs(long(s) * b));
        if (r < lo || r > hi) continue;
        if (long(s) * a + s - 1 >= n / 2 || long(s) * b + s - 1 >= n / 2) continue;
        if (long(s) * a - s + 1 < -n / 2 || long(s) * b - s + 1 < -n / 2) continue;
        cand.push_back({a, b});
      }
    std::shuffle(cand.begin(), cand.end(), rng);
    int placed = 0;
    for (const auto& c : cand) {
      if (placed == cfg.counts[i]) break;
      bool clear = true;
      for (const auto& p : spec.points)
        if (std::max(std::abs(p[0] - c[0]), std::abs(p[1] - c[1])) < cfg.min_separation) clear = false;
      if (!clear) continue;
      spec.points.push_back(c);
      const double theta = std::uniform_real_distribution<double>(0, 2 * std::numbers::pi)(rng);
      spec.d.push_back(std::polar(1.0, theta));
      ++placed;
    }
    if (placed < cfg.counts[i])
      throw ParamError("cannot place " + std::to_string(cfg.counts[i]) + " texture points at scale " + std::to_string(j));
  }
  if (cfg.auto_balance) balance_texture(spec, cfg.scales, cfg.balance_constant);
  return spec;
}

void require_epsilon(double alpha, double epsilon) {
  if (!(alpha > 0 && alpha < 2)) throw ParamError("alpha must lie in (0, 2)");
  if (!(epsilon > 0 && epsilon < (2 - alpha) / 3))
    throw ParamError("epsilon must satisfy 0 < ε < (2−α)/3");
}

double mask_schedule(double alpha, double epsilon, double c, int j) {
  require_epsilon(alpha, epsilon);
  if (!(c > 0)) throw ParamError("mask constant c must be positive");
  return c * std::pow(2.0, -(alpha_sequence(alpha, j) + epsilon) * j) / (j + 1);
}

double mask_schedule_checked(double alpha, double epsilon, double c, int j, int n) {
  const double h = mask_schedule(alpha, epsilon, c, j);
  if (h < 1.0 / n)
    throw ScaleError("h_" + std::to_string(j) + " is below one grid cell at N = " + std::to_string(n));
  return h;
}

std::vector<std::uint8_t> missing_indicator(int n, double h) {
  std::vector<std::uint8_t> m(static_cast<std::size_t>(n) * n, 0);
  for (int p = 0; p < n; ++p) {
    const double x1 = double(centered(p, n)) / n;
    if (std::abs(x1) > h) continue;
    std::fill_n(m.begin() + static_cast<long>(p) * n, n, std::uint8_t{1});
  }
  return m;
}

MaskSplit apply_mask(const SampledImage& f, double h) {
  if (f.domain != Domain::Spatial) throw ShapeError("apply_mask expects a spatial image");
  const auto m = missing_indicator(f.rows, h);
  MaskSplit out{f, f};
  for (std::size_t i = 0; i < m.size(); ++i) (m[i] ? out.known.data[i] : out.missing.data[i]) = cplx{};
  return out;
}

int filter_j_max(int n) {
  int j = 0;
  while ((1L << (2 * (j + 1) - 1)) <= n / 2) ++j;
  return j;
}

SampledImage subband_filter_spectrum(const SampledImage& fhat, int j, FilterPass pass) {
  if (fhat.domain != Domain::Frequency) throw ShapeError("expected a spectrum");
  const int n = fhat.rows;
  if (j < 0 || j > filter_j_max(n)) throw ParamError("filter scale out of range");
  SampledImage out = fhat;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      const double x1 = centered(p, n), x2 = centered(q, n);
      double w = j == 0 ? windows::Phi_hat(x1, x2) : windows::corona_W_j(x1, x2, j);
      if (pass == FilterPass::Two) w *= w;
      out.at(p, q) *= w;
    }
  return out;
}

SampledImage subband_filter(const SampledImage& f, int j, FilterPass pass) {
  return inverse_transform(subband_filter_spectrum(forward_transform(f), j, pass));
}

std::vector<EnergyRow> energy_balance_report(const SampledImage& cartoon_hat, const SampledImage& texture_hat,
                                             const std::vector<int>& scales) {
  std::vector<EnergyRow> rows;
  for (int j : scales) {
    EnergyRow r;
    r.j = j;
    const double c = norm2(subband_filter_spectrum(cartoon_hat, j));
    const double t = norm2(subband_filter_spectrum(texture_hat, j));
    r.cartoon = c * c;
    r.texture = t * t;
    r.ratio = r.texture > 0 ? r.cartoon / r.texture : std::numeric_limits<double>::infinity();
    r.cartoon_scaled = r.cartoon * std::ldexp(1.0, 2 * j);
    r.flag = std::isfinite(r.ratio) && r.ratio >= 0.1 && r.ratio <= 10;
    rows.push_back(r);
  }
  return rows;
}

std::vector<MissingRow> missing_energy_check(const CartoonSpec& spec, const SampledImage& cartoon_hat, double alpha,
                                             double epsilon, double c, const std::vector<int>& scales) {
  std::vector<MissingRow> rows;
  const int n = cartoon_hat.rows;
  const bool applicable = cartoon_w(spec, 0) != 0;
  double reference = -1;
  for (int j : scales) {
    MissingRow r;
    r.j = j;
    r.applicable = applicable;
    r.h = mask_schedule(alpha, epsilon, c, j);
    if (r.h < 1.0 / n) {
      r.skipped = true;
      rows.push_back(r);
      continue;
    }
    auto fj = inverse_transform(subband_filter_spectrum(cartoon_hat, j));
    const double e = norm2(apply_mask(fj, r.h).missing);
    r.missing_energy = e * e;
    r.ratio = r.missing_energy / (r.h * r.h * std::ldexp(1.0, -2 * j));
    if (reference < 0) reference = r.ratio;
    r.flag = applicable && r.ratio > 0 && r.ratio >= reference / 10 && r.ratio <= reference * 10;
    rows.push_back(r);
  }
  return rows;
}

}  // namespace ipsep
