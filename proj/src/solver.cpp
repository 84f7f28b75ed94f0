#include "ipsep/solver.hpp"

#include <algorithm>
#include <cmath>

#include "ipsep/errors.hpp"

namespace ipsep {

namespace {

double l1(const cvec& c) {
  double s = 0;
  for (const auto& v : c) s += std::abs(v);
  return s;
}

double l2(const cvec& c) {
  double s = 0;
  for (const auto& v : c) s += std::norm(v);
  return std::sqrt(s);
}

// Complex soft threshold: shrink the modulus, keep the phase.
cplx soft(cplx v, double t) {
  const double a = std::abs(v);
  return a <= t ? cplx{} : v * ((a - t) / a);
}

// Projection onto the l_inf ball of radius r (complex modulus).
cplx clip(cplx v, double r) {
  const double a = std::abs(v);
  return a <= r ? v : v * (r / a);
}

void require_parseval(const Frame& frame) {
  if (!frame.parseval()) throw FrameError(frame.name() + " is not a Parseval frame");
}

void require_sizes(const cvec& f, const std::vector<std::uint8_t>& missing, const Frame& a, const Frame& b) {
  if (a.signal_size() != f.size() || b.signal_size() != f.size())
    throw ShapeError("frames and signal have different sizes");
  if (!missing.empty() && missing.size() != f.size()) throw ShapeError("mask and signal have different sizes");
}

cvec dual_prox_redundant(const cvec& z, double tau, const Frame& frame) {
  // min_p 1/2 ||z - Phi p||^2 over |p_i| <= tau; FISTA with unit step (||Phi|| = 1).
  const std::size_t k = frame.coeff_size();
  cvec p(k), q(k), prev(k), g(k), r(z.size());
  double t = 1;
  for (int it = 0; it < 20000; ++it) {
    frame.synthesis(q, r);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = z[i] - r[i];
    frame.analysis(r, g);
    prev = p;
    double change = 0, size = 0;
    for (std::size_t i = 0; i < k; ++i) {
      p[i] = clip(q[i] + g[i], tau);
      change += std::norm(p[i] - prev[i]);
      size += std::norm(p[i]);
    }
    const double tn = (1 + std::sqrt(1 + 4 * t * t)) / 2;
    for (std::size_t i = 0; i < k; ++i) q[i] = p[i] + ((t - 1) / tn) * (p[i] - prev[i]);
    t = tn;
    if (change <= 1e-28 * std::max(size, 1e-300) || change == 0) break;
  }
  return p;
}

}  // namespace

void validate(const SolverConfig& cfg) {
  if (cfg.max_iters < 1) throw ParamError("max_iters must be positive");
  if (!(cfg.tol_feasibility > 0) || !(cfg.tol_objective > 0)) throw ParamError("tolerances must be positive");
  if (!(cfg.step > 0)) throw ParamError("step must be positive");
  if (!(cfg.relaxation > 0 && cfg.relaxation < 2)) throw ParamError("relaxation must lie in (0, 2)");
  if (cfg.balance < 0) throw ParamError("balance must be non-negative");
  if (cfg.algorithm == Algorithm::PrimalDualCP && cfg.step >= 1)
    throw ParamError("primal-dual step must be below 1 (sigma tau ||K||^2 < 1)");
}

cvec prox_l1_analysis(const cvec& z, double tau, const Frame& frame) {
  require_parseval(frame);
  if (z.size() != frame.signal_size()) throw ShapeError("prox input has the wrong size");
  if (tau < 0) throw ParamError("prox parameter must be non-negative");
  if (tau == 0) return z;
  cvec out(z.size());
  if (frame.orthonormal()) {
    cvec c = frame.analyze(z);
    for (auto& v : c) v = soft(v, tau);
    frame.synthesis(c, out);
    return out;
  }
  frame.synthesis(dual_prox_redundant(z, tau, frame), out);
  for (std::size_t i = 0; i < z.size(); ++i) out[i] = z[i] - out[i];
  return out;
}

SampledImage prox_l1_analysis(const SampledImage& z, double tau, const GridFrame& frame) {
  if (z.domain != Domain::Spatial) throw ShapeError("prox expects a spatial image");
  return SampledImage(z.rows, Domain::Spatial, prox_l1_analysis(z.data, tau, frame));
}

void project_feasible(cvec& x1, cvec& x2, const cvec& f, const std::vector<std::uint8_t>& missing) {
  if (x1.size() != f.size() || x2.size() != f.size()) throw ShapeError("projection operands differ in size");
  if (!missing.empty() && missing.size() != f.size()) throw ShapeError("mask and signal have different sizes");
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!missing.empty() && missing[i]) continue;
    const cplx half = (x1[i] + x2[i] - f[i]) * 0.5;
    x1[i] -= half;
    x2[i] -= half;
  }
}

void project_feasible(SampledImage& x1, SampledImage& x2, const SampledImage& f,
                      const std::vector<std::uint8_t>& missing) {
  project_feasible(x1.data, x2.data, f.data, missing);
}

double feasibility(const cvec& x1, const cvec& x2, const cvec& f, const std::vector<std::uint8_t>& missing) {
  double r = 0;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (missing.empty() || !missing[i]) r += std::norm(x1[i] + x2[i] - f[i]);
  const double nf = l2(f);
  return std::sqrt(r) / (nf > 0 ? nf : 1.0);
}

FlatSolution solve_inpsep(const cvec& f, const std::vector<std::uint8_t>& missing, const Frame& frame1,
                          const Frame& frame2, const SolverConfig& cfg) {
  validate(cfg);
  require_sizes(f, missing, frame1, frame2);
  require_parseval(frame1);
  require_parseval(frame2);

  const std::size_t n = f.size();
  const std::size_t k1 = frame1.coeff_size(), k2 = frame2.coeff_size();
  FlatSolution out;
  // Start from the feasible split (f/2, f/2).
  out.x1.assign(n, cplx{});
  out.x2.assign(n, cplx{});
  for (std::size_t i = 0; i < n; ++i) out.x1[i] = out.x2[i] = f[i] * 0.5;

  double beta = cfg.balance;
  if (beta == 0) {
    const double nf = l2(f);
    beta = nf > 0 ? nf / std::sqrt(double(std::max(k1, k2))) : 1.0;
  }

  cvec c1(k1), c2(k2);
  auto record = [&](const cvec& a1, const cvec& a2) {
    out.objective_trace.push_back(l1(a1) + l1(a2));
    out.feasibility_trace.push_back(feasibility(out.x1, out.x2, f, missing));
  };
  // Checked every 50 iterations. Besides the objective, the auxiliary iterate (dual for
  // the primal-dual method, z for Douglas-Rachford) must have settled: primal-dual
  // iterations can hold x still while the dual variable is still travelling.
  const double settle = std::sqrt(cfg.tol_objective);
  auto done = [&](int it, double aux_change) {
    if (it < 50 || it % 50 != 0) return false;
    const double now = out.objective_trace.back();
    const double then = out.objective_trace[out.objective_trace.size() - 51];
    return out.feasibility_trace.back() <= cfg.tol_feasibility &&
           std::abs(now - then) <= cfg.tol_objective * std::max(std::abs(now), 1e-300) && aux_change <= settle;
  };
  auto max_change = [](const cvec& a, const cvec& b) {
    double m = 0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
  };
  auto finish_flat = [&](int it, bool settled) {
    out.iterations_used = it;
    out.converged = settled || (out.objective_trace.back() == 0 && out.feasibility_trace.back() <= cfg.tol_feasibility);
  };

  const double rho = cfg.relaxation;
  if (cfg.algorithm == Algorithm::PrimalDualCP) {
    // Steps keep sigma tau = step^2; their ratio adapts to balance the primal and dual
    // residuals with a geometrically vanishing adaptation rate.
    double tau = cfg.step * beta, sigma = cfg.step / beta;
    double adapt = cfg.adaptive ? 0.5 : 0.0;
    cvec y1(k1), y2(k2), yh1(k1), yh2(k2), kx1(k1), kx2(k2), kxh1(k1), kxh2(k2);
    cvec g1(n), g2(n), gh1(n), gh2(n), xh1(n), xh2(n);
    frame1.analysis(out.x1, kx1);
    frame2.analysis(out.x2, kx2);
    cvec snap1 = y1, snap2 = y2;
    bool settled = false;
    int it = 0;
    while (it < cfg.max_iters) {
      ++it;
      // primal: x_hat = P_C(x - tau K* y); g holds K* y
      for (std::size_t i = 0; i < n; ++i) {
        xh1[i] = out.x1[i] - tau * g1[i];
        xh2[i] = out.x2[i] - tau * g2[i];
      }
      project_feasible(xh1, xh2, f, missing);
      frame1.analysis(xh1, kxh1);
      frame2.analysis(xh2, kxh2);
      // dual: y_hat = clip(y + sigma K (2 x_hat - x))
      for (std::size_t i = 0; i < k1; ++i) yh1[i] = clip(y1[i] + sigma * (2.0 * kxh1[i] - kx1[i]), 1.0);
      for (std::size_t i = 0; i < k2; ++i) yh2[i] = clip(y2[i] + sigma * (2.0 * kxh2[i] - kx2[i]), 1.0);
      frame1.synthesis(yh1, gh1);
      frame2.synthesis(yh2, gh2);

      if (adapt > 0) {
        double p1 = 0, p2 = 0, d1 = 0, d2 = 0;
        for (std::size_t i = 0; i < n; ++i) {
          p1 += std::norm((out.x1[i] - xh1[i]) / tau - (g1[i] - gh1[i]));
          p2 += std::norm((out.x2[i] - xh2[i]) / tau - (g2[i] - gh2[i]));
        }
        for (std::size_t i = 0; i < k1; ++i) d1 += std::norm((y1[i] - yh1[i]) / sigma - (kx1[i] - kxh1[i]));
        for (std::size_t i = 0; i < k2; ++i) d2 += std::norm((y2[i] - yh2[i]) / sigma - (kx2[i] - kxh2[i]));
        const double pr = std::sqrt(p1 + p2), du = std::sqrt(d1 + d2);
        if (pr > 1.5 * du) {
          tau /= 1 - adapt;
          sigma *= 1 - adapt;
          adapt *= 0.95;
        } else if (du > 1.5 * pr) {
          tau *= 1 - adapt;
          sigma /= 1 - adapt;
          adapt *= 0.95;
        }
      }

      for (std::size_t i = 0; i < k1; ++i) {
        y1[i] = rho * yh1[i] + (1 - rho) * y1[i];
        kx1[i] = rho * kxh1[i] + (1 - rho) * kx1[i];
      }
      for (std::size_t i = 0; i < k2; ++i) {
        y2[i] = rho * yh2[i] + (1 - rho) * y2[i];
        kx2[i] = rho * kxh2[i] + (1 - rho) * kx2[i];
      }
      for (std::size_t i = 0; i < n; ++i) {
        out.x1[i] = rho * xh1[i] + (1 - rho) * out.x1[i];
        out.x2[i] = rho * xh2[i] + (1 - rho) * out.x2[i];
        g1[i] = rho * gh1[i] + (1 - rho) * g1[i];
        g2[i] = rho * gh2[i] + (1 - rho) * g2[i];
      }
      record(kx1, kx2);
      if (it % 50 == 0) {
        const double change = std::max(max_change(y1, snap1), max_change(y2, snap2));
        snap1 = y1;
        snap2 = y2;
        if ((settled = done(it, change))) break;
      }
    }
    finish_flat(it, settled);
    return out;
  }

  // Douglas-Rachford on the sum of the analysis-l1 term and the constraint indicator.
  const double gamma = cfg.step * beta;
  cvec z1 = out.x1, z2 = out.x2, r1(n), r2(n);
  cvec snap1 = z1, snap2 = z2;
  const double zscale = std::max(l2(f), 1e-300);
  bool settled = false;
  int it = 0;
  while (it < cfg.max_iters) {
    ++it;
    out.x1 = z1;
    out.x2 = z2;
    project_feasible(out.x1, out.x2, f, missing);
    for (std::size_t i = 0; i < n; ++i) {
      r1[i] = 2.0 * out.x1[i] - z1[i];
      r2[i] = 2.0 * out.x2[i] - z2[i];
    }
    const cvec v1 = prox_l1_analysis(r1, gamma, frame1);
    const cvec v2 = prox_l1_analysis(r2, gamma, frame2);
    for (std::size_t i = 0; i < n; ++i) {
      z1[i] += rho * (v1[i] - out.x1[i]);
      z2[i] += rho * (v2[i] - out.x2[i]);
    }
    out.x1 = z1;
    out.x2 = z2;
    project_feasible(out.x1, out.x2, f, missing);
    frame1.analysis(out.x1, c1);
    frame2.analysis(out.x2, c2);
    record(c1, c2);
    if (it % 50 == 0) {
      const double change = std::max(max_change(z1, snap1), max_change(z2, snap2)) / zscale;
      snap1 = z1;
      snap2 = z2;
      if ((settled = done(it, change))) break;
    }
  }
  finish_flat(it, settled);
  return out;
}

SeparationResult solve_inpsep(const SampledImage& f, const std::vector<std::uint8_t>& missing,
                              const GridFrame& frame1, const GridFrame& frame2, const SolverConfig& cfg) {
  if (f.domain != Domain::Spatial) throw ShapeError("solver expects a spatial image");
  if (f.rows != frame1.grid() || f.rows != frame2.grid()) throw ShapeError("frames and image grids differ");
  auto flat = solve_inpsep(f.data, missing, frame1, frame2, cfg);
  SeparationResult r;
  r.C_star = SampledImage(f.rows, Domain::Spatial, std::move(flat.x1));
  r.T_star = SampledImage(f.rows, Domain::Spatial, std::move(flat.x2));
  r.objective_trace = std::move(flat.objective_trace);
  r.feasibility_trace = std::move(flat.feasibility_trace);
  r.iterations_used = flat.iterations_used;
  r.converged = flat.converged;
  return r;
}

bool windows_nonincreasing(const std::vector<double>& trace, int window, double slack) {
  if (window < 1) throw ParamError("window must be positive");
  double prev = -1;
  for (std::size_t start = 0; start + window <= trace.size(); start += window) {
    const double m = *std::max_element(trace.begin() + start, trace.begin() + start + window);
    if (prev >= 0 && m > prev + slack * std::abs(prev)) return false;
    prev = m;
  }
  return true;
}

}  // namespace ipsep
