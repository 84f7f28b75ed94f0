#pragma once

#include <cstdint>
#include <vector>

#include "ipsep/frame.hpp"
#include "ipsep/grid.hpp"

namespace ipsep {

enum class Algorithm { PrimalDualCP, DouglasRachford };

struct SolverConfig {
  int max_iters = 2000;
  double tol_feasibility = 1e-6;
  double tol_objective = 1e-8;
  double step = 0.9;
  double relaxation = 1.0;  // in (0, 2)
  Algorithm algorithm = Algorithm::PrimalDualCP;
  // Primal/dual step ratio tau / sigma for the primal-dual method; 0 picks it from the data.
  double balance = 0;
  // Adapt the primal/dual step ratio from the residuals (primal-dual method only).
  bool adaptive = false;
};

void validate(const SolverConfig& cfg);

// Flat-vector result; x1 lives in frame1's signal space.
struct FlatSolution {
  cvec x1, x2;
  std::vector<double> objective_trace;
  std::vector<double> feasibility_trace;
  int iterations_used = 0;
  bool converged = false;
};

struct SeparationResult {
  SampledImage C_star, T_star;
  std::vector<double> objective_trace;
  std::vector<double> feasibility_trace;
  int iterations_used = 0;
  bool converged = false;
};

// Proximal map of tau ||Phi* .||_1. Closed form for orthonormal bases, dual projected
// gradient for redundant Parseval frames.
cvec prox_l1_analysis(const cvec& z, double tau, const Frame& frame);
SampledImage prox_l1_analysis(const SampledImage& z, double tau, const GridFrame& frame);

// Projection onto {x1 + x2 = f on known cells}; missing[i] != 0 marks an unobserved cell.
void project_feasible(cvec& x1, cvec& x2, const cvec& f, const std::vector<std::uint8_t>& missing);
void project_feasible(SampledImage& x1, SampledImage& x2, const SampledImage& f,
                      const std::vector<std::uint8_t>& missing);

// ||P_K(x1 + x2 - f)|| / ||f|| (plain norm when f = 0).
double feasibility(const cvec& x1, const cvec& x2, const cvec& f, const std::vector<std::uint8_t>& missing);

// min ||Phi1* x1||_1 + ||Phi2* x2||_1  s.t.  P_K(x1 + x2) = P_K f.
// An empty mask means every cell is known.
FlatSolution solve_inpsep(const cvec& f, const std::vector<std::uint8_t>& missing, const Frame& frame1,
                          const Frame& frame2, const SolverConfig& cfg);
SeparationResult solve_inpsep(const SampledImage& f, const std::vector<std::uint8_t>& missing,
                              const GridFrame& frame1, const GridFrame& frame2, const SolverConfig& cfg);

// True when the maximum of every window of `window` entries is at most the previous
// window's maximum plus slack * |previous maximum|.
bool windows_nonincreasing(const std::vector<double>& trace, int window, double slack);

}  // namespace ipsep
