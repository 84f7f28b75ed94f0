#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ipsep/frame.hpp"
#include "ipsep/gabor.hpp"
#include "ipsep/models.hpp"
#include "ipsep/shearlet.hpp"

namespace ipsep {

enum class FrameTag { Shearlet, Gabor };

// A finite set of coefficient indices of one frame, sorted and unique.
struct ClusterSet {
  FrameTag tag = FrameTag::Shearlet;
  int j = 0;
  double epsilon = 0;
  std::vector<std::size_t> indices;
  std::size_t size() const { return indices.size(); }
};

// Shearlet cluster in translation coordinates: iota = v, |l| <= 1, |k2 - l k1| <= 2^{eps j},
// k1 in [k1_lo, k1_hi]. No lattice involved; used to state the predicate.
std::vector<ShearletIndex> shearlet_cluster_indices(double alpha, int j, double epsilon, int k1_lo, int k1_hi);

struct KWindow {
  int lo = 0, hi = -1;  // empty range = the whole lattice period
};

// Lambda_{1,j} (or its union over j-1, j, j+1 when `plus_minus`) resolved to coefficient
// indices of `sys`. Translations off the subband lattice and subbands missing from the
// system are skipped.
ClusterSet cluster_shearlet(const ShearletSystem& sys, int j, double epsilon, bool plus_minus = true,
                            KWindow window = {});

// Lambda_{2,j} = (Z^2 ∩ B(0, 2^{eps j / 6})) x (I_T^± ∩ A_{s,j}).
ClusterSet cluster_gabor(const GaborSystem& sys, int j, double epsilon, const TextureSpec& texture);
double gabor_radius(int j, double epsilon);

// Sum of |c_i| over indices outside the cluster.
double relative_sparsity(const cvec& coeffs, const ClusterSet& cluster);
double relative_sparsity(const SampledImage& f, const GridFrame& frame, const ClusterSet& cluster);

struct CoherenceOptions {
  const std::vector<std::uint8_t>* mask_a = nullptr;  // P applied to the cluster atoms
  const std::vector<std::uint8_t>* mask_b = nullptr;  // P applied to the target atoms
  const std::vector<std::size_t>* targets = nullptr;  // default: every index of frame B
};

// max_t sum_{i in cluster} |<P_a a_i, P_b b_t>|, atoms rendered from the frames.
double cluster_coherence(const ClusterSet& cluster, const Frame& a, const Frame& b, const CoherenceOptions& opts = {});

// Per-atom target profiles |<P_a a_i, P_b b_t>| for every cluster element, so that many
// subclusters can be evaluated without re-rendering atoms.
class CoherenceTable {
 public:
  CoherenceTable(const ClusterSet& cluster, const Frame& a, const Frame& b, const CoherenceOptions& opts = {});
  // Coherence of the sub-cluster given by positions into the original cluster list.
  double coherence(const std::vector<std::size_t>& members) const;
  double coherence() const;

 private:
  std::size_t targets_;
  std::vector<std::vector<double>> rows_;  // |inner products| per cluster atom, over targets
};

struct CoherenceInputs {
  double mu_shear_gabor = 0;          // mu(L1, Psi; G)
  double mu_gabor_shear = 0;          // mu(L2, G; Psi)
  double mu_pshear_shear = 0;         // mu(L1, P Psi; Psi)
  double mu_pgabor_gabor = 0;         // mu(L2, P G; G)
  double mu_pgabor_shear = 0;         // mu(L2, P G; Psi)
  double mu_pshear_gabor = 0;         // mu(L1, P Psi; G)
};

double composite_mu(const CoherenceInputs& in);
// 2 delta / (1 - 2 mu); nullopt (no guarantee) when mu >= 1/2.
std::optional<double> error_bound(double delta, double mu);

struct CoherenceRow {
  int j = 0;
  CoherenceInputs mu;
  double composite = 0;
  double delta1 = 0;
  double delta2 = 0;
  std::optional<double> bound;
  // Joint concentrations are not computed; they are bounded by the cluster coherences.
  double kappa1_bound = 0;
  double kappa2_bound = 0;
  std::size_t cluster1 = 0, cluster2 = 0;
};

struct CoherenceReport {
  std::vector<CoherenceRow> rows;
};

}  // namespace ipsep
