#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ipsep/frame.hpp"

namespace ipsep {

// alpha_j = m / j with m = floor(j alpha + 0.5) clamped to [0, 2j - 1].
int alpha_numerator(double alpha, int j);
double alpha_sequence(double alpha, int j);
// Number of shears K_j = 2^{(2 - alpha_j) j}; interior shears satisfy |l| < K_j.
int shear_count(double alpha, int j);

enum class Iota { coarse, h, v, b, residual };
std::string iota_name(Iota i);

// Multiplier of subband (j, l, iota) at frequency xi (iota in {h, v, b}).
double shearlet_window(double alpha, int j, int l, Iota iota, double xi1, double xi2);

enum class Sampling {
  Lattice,   // per-subband alias-free translation lattice (the k-lattice)
  FullGrid,  // one translate per grid point
};

struct ShearletIndex {
  int j = -1;
  int l = 0;
  int k1 = 0, k2 = 0;
  Iota iota = Iota::coarse;
};

struct Subband {
  int j = -1;
  int l = 0;
  Iota iota = Iota::coarse;
  int rows = 1, cols = 1;  // translation lattice (rows along x1)
  std::size_t offset = 0;
  std::vector<std::uint32_t> bins;  // flat centered-grid indices of the support
  std::vector<double> vals;         // multiplier values on bins
  std::vector<std::uint32_t> fold;  // bin -> lattice spectrum slot
  std::size_t size() const { return static_cast<std::size_t>(rows) * cols; }
};

struct ShearletOptions {
  double alpha = 1.0;
  Sampling sampling = Sampling::Lattice;
  // Permit coronas that extend past the grid edge (cropped per-scale grids).
  bool allow_partial_top = false;
};

class ShearletSystem : public GridFrame {
 public:
  ShearletSystem(int n, int j_max, ShearletOptions opts = {});

  std::size_t coeff_size() const override { return total_; }
  void analysis_spectrum(const cvec& fhat, cvec& c) const override;
  void synthesis_spectrum(const cvec& c, cvec& fhat) const override;
  std::string name() const override { return "shearlet"; }

  int j_max() const { return j_max_; }
  double alpha() const { return opts_.alpha; }
  const ShearletOptions& options() const { return opts_; }
  const std::vector<Subband>& subbands() const { return subbands_; }
  // Index of subband (j, l, iota) or -1.
  int find(int j, int l, Iota iota) const;
  bool has_residual() const;

  // Centered frequency multiplier of a subband (k = 0 atom without lattice normalization).
  SampledImage multiplier(int band) const;
  // Max over the grid of |sum_b m_b^2 - 1|.
  double unity_error() const;

  // Atom spectrum / spatial atom at lattice point (y1, y2) of a subband.
  cvec atom_spectrum(int band, int y1, int y2) const;
  cvec atom_spectrum_at(std::size_t i) const override;
  // Subband and lattice point of coefficient i.
  void locate(std::size_t i, int& band, int& y1, int& y2) const;
  SampledImage render_atom(int band, int y1, int y2) const;
  SampledImage render_atom(const ShearletIndex& idx) const;
  // Map a model translation k to this system's lattice point; IndexError if off-lattice.
  void lattice_point(const ShearletIndex& idx, int& band, int& y1, int& y2) const;
  std::size_t coeff_index(int band, int y1, int y2) const;
  // Spatial position (torus units) of lattice point y.
  static double position(int y, int dim);

 private:
  void build();
  ShearletOptions opts_;
  int j_max_;
  std::vector<Subband> subbands_;
  std::size_t total_ = 0;
};

// Coefficient export: one IPG1 grid per subband plus manifest.json.
void export_coefficients(const ShearletSystem& sys, const cvec& coeffs, const std::string& dir);

}  // namespace ipsep
