#include "ipsep/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "ipsep/errors.hpp"
#include "ipsep/fft.hpp"

namespace ipsep {

namespace {

void sort_unique(std::vector<std::size_t>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

// Renders P_b P_a a_i and analyses it with B; returns |coefficients|.
class AtomProfiler {
 public:
  AtomProfiler(const Frame& a, const Frame& b, const CoherenceOptions& opts) : a_(a), b_(b), opts_(opts) {
    if (a.signal_size() != b.signal_size()) throw ShapeError("frames act on different signal spaces");
    for (const auto* m : {opts.mask_a, opts.mask_b})
      if (m && m->size() != a.signal_size()) throw ShapeError("mask does not match the signal size");
    ga_ = dynamic_cast<const GridFrame*>(&a);
    gb_ = dynamic_cast<const GridFrame*>(&b);
    masked_ = opts.mask_a || opts.mask_b;
  }

  void profile(std::size_t i, cvec& coeffs) const {
    if (i >= a_.coeff_size()) throw IndexError("cluster index outside frame A");
    if (ga_ && gb_ && !masked_) {
      gb_->analysis_spectrum(ga_->atom_spectrum_at(i), coeffs);
      return;
    }
    cvec x;
    if (ga_) {
      x = ga_->atom_spectrum_at(i);
      fft::centered_inverse(x, ga_->grid());
    } else {
      cvec e(a_.coeff_size());
      e[i] = 1;
      a_.synthesis(e, x);
    }
    apply(opts_.mask_a, x);
    apply(opts_.mask_b, x);
    b_.analysis(x, coeffs);
  }

 private:
  // P keeps the missing cells (mask value 1).
  static void apply(const std::vector<std::uint8_t>* mask, cvec& x) {
    if (!mask) return;
    for (std::size_t k = 0; k < x.size(); ++k)
      if (!(*mask)[k]) x[k] = cplx{};
  }

  const Frame& a_;
  const Frame& b_;
  const CoherenceOptions& opts_;
  const GridFrame* ga_ = nullptr;
  const GridFrame* gb_ = nullptr;
  bool masked_ = false;
};

std::vector<std::size_t> target_list(const Frame& b, const CoherenceOptions& opts) {
  std::vector<std::size_t> t;
  if (opts.targets) {
    if (opts.targets->empty()) throw ParamError("coherence target window is empty");
    t = *opts.targets;
    for (auto v : t)
      if (v >= b.coeff_size()) throw IndexError("target index outside frame B");
  }
  return t;
}

}  // namespace

std::vector<ShearletIndex> shearlet_cluster_indices(double alpha, int j, double epsilon, int k1_lo, int k1_hi) {
  require_epsilon(alpha, epsilon);
  const int reach = static_cast<int>(std::floor(std::pow(2.0, epsilon * j)));
  std::vector<ShearletIndex> out;
  for (int l = -1; l <= 1; ++l)
    for (int k1 = k1_lo; k1 <= k1_hi; ++k1)
      for (int t = -reach; t <= reach; ++t) out.push_back({j, l, k1, l * k1 + t, Iota::v});
  return out;
}

ClusterSet cluster_shearlet(const ShearletSystem& sys, int j, double epsilon, bool plus_minus, KWindow window) {
  require_epsilon(sys.alpha(), epsilon);
  ClusterSet c{FrameTag::Shearlet, j, epsilon, {}};
  for (int jj = plus_minus ? j - 1 : j; jj <= (plus_minus ? j + 1 : j); ++jj) {
    if (jj < 1 || jj > sys.j_max()) continue;
    const int band = sys.find(jj, 0, Iota::v);
    if (band < 0) continue;
    int lo = window.lo, hi = window.hi;
    if (hi < lo) {
      lo = 0;
      hi = (1 << alpha_numerator(sys.alpha(), jj)) - 1;
    }
    for (const auto& idx : shearlet_cluster_indices(sys.alpha(), jj, epsilon, lo, hi)) {
      int b, y1, y2;
      try {
        sys.lattice_point(idx, b, y1, y2);
      } catch (const IndexError&) {
        continue;
      }
      c.indices.push_back(sys.coeff_index(b, y1, y2));
    }
  }
  sort_unique(c.indices);
  return c;
}

double gabor_radius(int j, double epsilon) { return std::pow(2.0, epsilon * j / 6); }

ClusterSet cluster_gabor(const GaborSystem& sys, int j, double epsilon, const TextureSpec& texture) {
  ClusterSet c{FrameTag::Gabor, j, epsilon, {}};
  const double r = gabor_radius(j, epsilon);
  const int reach = static_cast<int>(std::floor(r));
  const int half = sys.bands_per_axis() / 2;
  for (const auto& n : texture_neighborhood(texture)) {
    if (!in_corona_lattice(texture.s, j, n[0], n[1])) continue;
    if (n[0] < -half || n[0] >= half || n[1] < -half || n[1] >= half) continue;
    for (int m1 = -reach; m1 <= reach; ++m1)
      for (int m2 = -reach; m2 <= reach; ++m2)
        if (m1 * m1 + m2 * m2 <= r * r) c.indices.push_back(sys.coeff_index({m1, m2, n[0], n[1]}));
  }
  sort_unique(c.indices);
  return c;
}

double relative_sparsity(const cvec& coeffs, const ClusterSet& cluster) {
  if (!cluster.indices.empty() && cluster.indices.back() >= coeffs.size())
    throw IndexError("cluster index outside the coefficient range");
  double s = 0;
  std::size_t next = 0;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (next < cluster.indices.size() && cluster.indices[next] == i) {
      ++next;
      continue;
    }
    s += std::abs(coeffs[i]);
  }
  return s;
}

double relative_sparsity(const SampledImage& f, const GridFrame& frame, const ClusterSet& cluster) {
  if (f.domain != Domain::Spatial || f.rows != frame.grid()) throw ShapeError("signal does not match frame grid");
  return relative_sparsity(frame.analyze(f.data), cluster);
}

double cluster_coherence(const ClusterSet& cluster, const Frame& a, const Frame& b, const CoherenceOptions& opts) {
  const auto targets = target_list(b, opts);
  if (cluster.indices.empty()) return 0;
  AtomProfiler prof(a, b, opts);
  std::vector<double> acc(b.coeff_size(), 0.0);
  cvec c;
  for (auto i : cluster.indices) {
    prof.profile(i, c);
    for (std::size_t t = 0; t < c.size(); ++t) acc[t] += std::abs(c[t]);
  }
  if (targets.empty()) return *std::max_element(acc.begin(), acc.end());
  double m = 0;
  for (auto t : targets) m = std::max(m, acc[t]);
  return m;
}

CoherenceTable::CoherenceTable(const ClusterSet& cluster, const Frame& a, const Frame& b,
                               const CoherenceOptions& opts) {
  const auto targets = target_list(b, opts);
  AtomProfiler prof(a, b, opts);
  targets_ = targets.empty() ? b.coeff_size() : targets.size();
  cvec c;
  for (auto i : cluster.indices) {
    prof.profile(i, c);
    std::vector<double> row(targets_);
    for (std::size_t t = 0; t < targets_; ++t) row[t] = std::abs(c[targets.empty() ? t : targets[t]]);
    rows_.push_back(std::move(row));
  }
}

double CoherenceTable::coherence(const std::vector<std::size_t>& members) const {
  if (members.empty()) return 0;
  std::vector<std::size_t> order = members;
  std::sort(order.begin(), order.end());
  std::vector<double> acc(targets_, 0.0);
  for (auto k : order) {
    if (k >= rows_.size()) throw IndexError("sub-cluster member out of range");
    for (std::size_t t = 0; t < targets_; ++t) acc[t] += rows_[k][t];
  }
  return *std::max_element(acc.begin(), acc.end());
}

double CoherenceTable::coherence() const {
  std::vector<std::size_t> all(rows_.size());
  for (std::size_t k = 0; k < all.size(); ++k) all[k] = k;
  return coherence(all);
}

double composite_mu(const CoherenceInputs& in) {
  for (double v : {in.mu_shear_gabor, in.mu_gabor_shear, in.mu_pshear_shear, in.mu_pgabor_gabor, in.mu_pgabor_shear,
                   in.mu_pshear_gabor})
    if (!(v >= 0)) throw ParamError("coherence values must be non-negative");
  const double kappa2 =
      std::max(in.mu_pshear_shear + in.mu_pgabor_shear, in.mu_pgabor_gabor + in.mu_pshear_gabor);
  const double kappa1 = std::max(in.mu_shear_gabor, in.mu_gabor_shear);
  return kappa2 + kappa1;
}

std::optional<double> error_bound(double delta, double mu) {
  if (!(delta >= 0) || !(mu >= 0)) throw ParamError("delta and mu must be non-negative");
  if (mu >= 0.5) return std::nullopt;
  return 2 * delta / (1 - 2 * mu);
}

}  // namespace ipsep
