#pragma once

#include <string>
#include <vector>

#include "ipsep/frame.hpp"

namespace ipsep {

struct GaborIndex {
  int m1 = 0, m2 = 0;  // spatial position m / (2s), m taken modulo 2s
  int n1 = 0, n2 = 0;  // frequency position s n
};

// Gabor tight frame with atoms g_hat_s(xi - s n) e^{-2 pi i <xi, m/(2s)>}, normalized
// by the measured frame constant so that it is Parseval on the grid.
class GaborSystem : public GridFrame {
 public:
  GaborSystem(int n, int s);

  std::size_t coeff_size() const override { return total_; }
  void analysis_spectrum(const cvec& fhat, cvec& c) const override;
  void synthesis_spectrum(const cvec& c, cvec& fhat) const override;
  std::string name() const override { return "gabor"; }

  int band_size() const { return s_; }
  // Number of lattice frequencies per axis (n in [-nb/2, nb/2)).
  int bands_per_axis() const { return nb_; }
  int positions_per_axis() const { return 2 * s_; }
  double frame_constant() const { return a_; }

  std::size_t coeff_index(const GaborIndex& g) const;
  GaborIndex index_of(std::size_t coeff) const;
  cvec atom_spectrum(const GaborIndex& g) const;
  cvec atom_spectrum_at(std::size_t i) const override { return atom_spectrum(index_of(i)); }
  SampledImage render_atom(const GaborIndex& g) const;
  // Reduce n to [-nb/2, nb/2) and m to [0, 2s).
  GaborIndex canonical(GaborIndex g) const;

 private:
  void analysis_raw(const cvec& fhat, cvec& c) const;
  int s_;
  int nb_;
  std::size_t total_;
  double a_ = 1;
  double norm_ = 1;
  std::vector<double> window_;  // (2s-1)^2 table of g_hat_s(d), d in (-s, s)^2
};

}  // namespace ipsep
