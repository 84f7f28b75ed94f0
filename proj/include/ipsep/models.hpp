#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ipsep/grid.hpp"

namespace ipsep {

enum class BumpKind {
  Centered,  // w(x) = 1 - nu(|x| / rho), w(0) = 1
  Offset,    // bump on [0, rho], w(0) = 0
};

enum class StepConstant {
  TwoPi,  // i / (2 pi xi2)
  Pi,     // i / (pi xi2)
};

struct CartoonSpec {
  double rho = 0.45;  // support half-width of w (torus units)
  double r = 1.0;     // low-frequency cutoff |xi2| >= r
  BumpKind kind = BumpKind::Centered;
  StepConstant constant = StepConstant::TwoPi;
};

double cartoon_w(const CartoonSpec& spec, double x);
// Fourier coefficient of w on the unit torus.
cplx cartoon_w_hat(const CartoonSpec& spec, int k);
SampledImage cartoon_spectrum(const CartoonSpec& spec, int n);
SampledImage make_cartoon(const CartoonSpec& spec, int n);

struct TextureSpec {
  int s = 1;
  std::vector<std::array<int, 2>> points;  // I_T
  std::vector<cplx> d;                     // amplitude per point
};

SampledImage texture_spectrum(const TextureSpec& spec, int n);
SampledImage make_texture(const TextureSpec& spec, int n);

struct TextureScaleCheck {
  int j = 0;
  int per_subband_max = 0;  // max_{l, iota} |I_T ∩ M_{j,l,iota}|
  double per_subband_bound = 0;
  int neighborhood = 0;  // |I_T^± ∩ A_{s,j}|
  double neighborhood_bound = 0;
  bool ok = false;
};

// Sparsity caps on I_T at the given scales. Throws ParamError when `strict` and a cap fails.
std::vector<TextureScaleCheck> validate_texture(const TextureSpec& spec, double alpha, double epsilon,
                                                const std::vector<int>& scales, bool strict);

// A_{s,j}: lattice points n with 2^{2j-4} < |s n|_inf <= 2^{2j-1}.
bool in_corona_lattice(int s, int j, int n1, int n2);
// I_T^±: points within Euclidean distance 1 of I_T (five per point).
std::vector<std::array<int, 2>> texture_neighborhood(const TextureSpec& spec);

struct TextureGenConfig {
  int s = 1;
  std::vector<int> scales{2, 3, 4};
  std::vector<int> counts{3, 2, 1};  // points per corona
  std::uint64_t seed = 1;
  bool auto_balance = true;
  double balance_constant = 1.0;  // sum |d_n|^2 = balance_constant * 2^{-2j} per corona
  int min_separation = 3;         // l_inf distance between points
};

TextureSpec generate_texture(const TextureGenConfig& cfg, int n);
void balance_texture(TextureSpec& spec, const std::vector<int>& scales, double constant);

// Mask: missing vertical band |x1| <= h.
void require_epsilon(double alpha, double epsilon);
double mask_schedule(double alpha, double epsilon, double c, int j);
// As above, raising ScaleError when h_j is below one cell of an n-grid.
double mask_schedule_checked(double alpha, double epsilon, double c, int j, int n);
std::vector<std::uint8_t> missing_indicator(int n, double h);
struct MaskSplit {
  SampledImage known;
  SampledImage missing;
};
MaskSplit apply_mask(const SampledImage& f, double h);

enum class FilterPass { One, Two };
// f_j = W_j f (j >= 1) or Phi f (j = 0); the two-pass form applies the window twice.
SampledImage subband_filter(const SampledImage& f, int j, FilterPass pass = FilterPass::One);
SampledImage subband_filter_spectrum(const SampledImage& fhat, int j, FilterPass pass = FilterPass::One);
int filter_j_max(int n);

struct EnergyRow {
  int j = 0;
  double cartoon = 0;
  double texture = 0;
  double ratio = 0;
  double cartoon_scaled = 0;  // ||wS_j||^2 2^{2j}
  bool flag = false;
};
// Inputs are spectra on a common grid.
std::vector<EnergyRow> energy_balance_report(const SampledImage& cartoon_hat, const SampledImage& texture_hat,
                                             const std::vector<int>& scales);

struct MissingRow {
  int j = 0;
  double h = 0;
  double missing_energy = 0;  // ||P_j wS_j||^2
  double ratio = 0;           // / (h_j^2 2^{-2j})
  bool flag = false;
  bool applicable = true;
  bool skipped = false;  // h_j below one grid cell
};
std::vector<MissingRow> missing_energy_check(const CartoonSpec& spec, const SampledImage& cartoon_hat, double alpha,
                                             double epsilon, double c, const std::vector<int>& scales);

}  // namespace ipsep
