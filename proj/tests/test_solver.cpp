#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ipsep/errors.hpp"
#include "ipsep/frame.hpp"
#include "ipsep/solver.hpp"
#include "oracle_instances.hpp"
#include "support.hpp"

using namespace ipsep;
using namespace oracle;

namespace {

double l1(const cvec& c) {
  double s = 0;
  for (const auto& v : c) s += std::abs(v);
  return s;
}

// Degenerate LPs converge sublinearly; a few instances need several thousand iterations.
SolverConfig oracle_config() {
  SolverConfig cfg;
  cfg.max_iters = 20000;
  cfg.adaptive = true;
  return cfg;
}

}  // namespace

TEST_CASE("prox of the analysis l1 norm") {
  IdentityFrame id(1);
  CHECK(prox_l1_analysis(cvec{2.0}, 0.5, id)[0] == cplx(1.5));
  const cvec z{cplx(0.3, -0.9), cplx(2.0, 2.0)};
  IdentityFrame id2(2);
  CHECK(prox_l1_analysis(z, 0.0, id2) == z);
  // complex shrink keeps the phase
  const auto p = prox_l1_analysis(z, 1.0, id2);
  CHECK(std::abs(p[1] - z[1] * ((std::abs(z[1]) - 1) / std::abs(z[1]))) < 1e-15);
  CHECK(p[0] == cplx{});

  // Moreau: prox_{tau f}(z) + tau proj(z / tau) = z with the dual prox a projection onto
  // {x : |B^T x|_inf <= 1}, computed here from the dense basis.
  std::mt19937_64 rng(3);
  const Mat b = dct_basis(8);
  const auto frame = as_frame(b, "dct");
  for (int trial = 0; trial < 20; ++trial) {
    const cvec zz = testsupport::random_cvec(8, rng);
    const double tau = 0.1 + 0.1 * trial;
    cvec c(8), proj(8);
    for (int k = 0; k < 8; ++k)
      for (int i = 0; i < 8; ++i) c[k] += b[i][k] * zz[i] / tau;
    for (auto& v : c)
      if (std::abs(v) > 1) v /= std::abs(v);
    for (int i = 0; i < 8; ++i)
      for (int k = 0; k < 8; ++k) proj[i] += b[i][k] * c[k];
    const auto px = prox_l1_analysis(zz, tau, frame);
    double err = 0;
    for (int i = 0; i < 8; ++i) err = std::max(err, std::abs(px[i] + tau * proj[i] - zz[i]));
    CHECK(err < 1e-10);
  }
}

TEST_CASE("prox for a redundant Parseval frame") {
  // [I, DCT] / sqrt 2 is Parseval but not a basis
  const Mat d = dct_basis(8);
  cvec cm(8 * 16);
  for (int i = 0; i < 8; ++i) {
    cm[i * 8 + i] = 1 / std::sqrt(2.0);
    for (int k = 0; k < 8; ++k) cm[(8 + k) * 8 + i] = d[i][k] / std::sqrt(2.0);
  }
  MatrixFrame frame(8, 16, cm, "union");
  REQUIRE(frame.parseval());
  REQUIRE_FALSE(frame.orthonormal());
  std::mt19937_64 rng(11);
  const cvec z = testsupport::random_cvec(8, rng);
  const double tau = 0.4;
  auto objective = [&](const cvec& u) {
    double s = 0;
    for (int i = 0; i < 8; ++i) s += std::norm(u[i] - z[i]);
    return 0.5 * s + tau * l1(frame.analyze(u));
  };
  const auto p = prox_l1_analysis(z, tau, frame);
  const double best = objective(p);
  std::normal_distribution<double> g(0, 1);
  for (int trial = 0; trial < 200; ++trial) {
    cvec q = p;
    const double scale = trial < 100 ? 1e-3 : 1e-1;
    for (auto& v : q) v += cplx(g(rng), g(rng)) * scale;
    CHECK(objective(q) >= best - 1e-12);
  }

  cvec twice(8 * 8);
  for (int i = 0; i < 8; ++i) twice[i * 8 + i] = 2;
  CHECK_THROWS_AS(prox_l1_analysis(z, tau, MatrixFrame(8, 8, twice, "scaled")), FrameError);
}

TEST_CASE("feasible projection") {
  const cvec f{1.0, 2.0, -1.0};
  cvec a = f, b(3);
  const std::vector<std::uint8_t> none;
  project_feasible(a, b, f, none);
  CHECK(a == f);
  CHECK(b == cvec(3));

  cvec x1 = f, x2 = f;
  project_feasible(x1, x2, f, none);
  for (int i = 0; i < 3; ++i) CHECK(x1[i] == f[i] * 0.5);

  std::mt19937_64 rng(2);
  cvec y1 = testsupport::random_cvec(3, rng), y2 = testsupport::random_cvec(3, rng);
  const std::vector<std::uint8_t> mask{0, 1, 0};
  const cvec keep = y1;
  project_feasible(y1, y2, f, mask);
  CHECK(y1[1] == keep[1]);
  cvec z1 = y1, z2 = y2;
  project_feasible(z1, z2, f, mask);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(z1[i] - y1[i]) <= 1e-15);
  CHECK(feasibility(y1, y2, f, mask) < 1e-15);
}

TEST_CASE("zero signal") {
  IdentityFrame id(8);
  const auto frame2 = as_frame(dct_basis(8), "dct");
  const auto r = solve_inpsep(cvec(8), {0, 1, 0, 0, 0, 0, 0, 0}, id, frame2, SolverConfig{});
  CHECK(l1(r.x1) + l1(r.x2) == 0.0);
  CHECK(r.objective_trace.back() == 0.0);
  CHECK(r.converged);
}

TEST_CASE("agreement with the LP oracle") {
  int count = 0;
  for (const auto& in : instances()) {
    const double optimum = lporacle::l1_pair(in.a, in.b, in.f, in.known);
    const auto fa = as_frame(in.a, in.na), fb = as_frame(in.b, in.nb);
    const auto r = solve_inpsep(to_cvec(in.f), to_missing(in.known), fa, fb, oracle_config());
    const double obj = l1(fa.analyze(r.x1)) + l1(fb.analyze(r.x2));
    INFO(in.na << "+" << in.nb << " n=" << in.f.size() << " variant " << in.variant << " oracle " << optimum
               << " got " << obj << " iters " << r.iterations_used);
    CHECK(std::abs(obj - optimum) <= 1e-4 * optimum);
    CHECK(r.feasibility_trace.back() <= 1e-6);
    ++count;
  }
  CHECK(count >= 20);
}

TEST_CASE("complex DFT instances against frozen conic optima") {
  // optima from an interior-point conic solver, accurate to ~1e-9
  IdentityFrame id(8);
  const auto dft = MatrixFrame::dft(8);
  struct Case {
    cvec f;
    std::vector<std::uint8_t> missing;
    double optimum;
  };
  cvec spike_flat(8, 0.5);
  spike_flat[2] += 1;
  cvec mixed(8);
  for (int i = 0; i < 8; ++i) mixed[i] = 0.3 * std::cos(2 * std::numbers::pi * i / 8);
  mixed[1] += 1;
  mixed[5] -= 0.7;
  const std::vector<Case> cases{{spike_flat, {}, 2.41421356},
                                {spike_flat, {0, 0, 0, 1, 0, 0, 1, 0}, 2.41421356},
                                {mixed, {}, 2.54852815}};
  for (const auto& c : cases)
    for (auto alg : {Algorithm::PrimalDualCP, Algorithm::DouglasRachford}) {
      SolverConfig cfg = oracle_config();
      cfg.algorithm = alg;
      const auto r = solve_inpsep(c.f, c.missing, id, dft, cfg);
      const double obj = l1(r.x1) + l1(dft.analyze(r.x2));
      CHECK(std::abs(obj - c.optimum) <= 1e-4 * c.optimum);
      CHECK(r.feasibility_trace.back() <= 1e-6);
    }
  // the spike/flat split itself is recovered
  const auto r = solve_inpsep(spike_flat, {}, id, dft, SolverConfig{});
  CHECK(std::abs(r.x1[2] - 1.0) < 1e-4);
  for (int i = 0; i < 8; ++i) CHECK(std::abs(r.x2[i] - 0.5) < 1e-4);
}

TEST_CASE("Douglas-Rachford agrees with the primal-dual method") {
  std::mt19937_64 rng(8);
  const auto a = as_frame(identity_basis(8), "identity"), b = as_frame(haar_basis(8), "haar");
  std::vector<double> f(8);
  std::normal_distribution<double> g(0, 1);
  for (auto& v : f) v = g(rng);
  std::vector<bool> known(8, true);
  known[3] = false;
  const double oracle = lporacle::l1_pair(identity_basis(8), haar_basis(8), f, known);
  SolverConfig cfg = oracle_config();
  cfg.algorithm = Algorithm::DouglasRachford;
  const auto r = solve_inpsep(to_cvec(f), to_missing(known), a, b, cfg);
  CHECK(std::abs(l1(a.analyze(r.x1)) + l1(b.analyze(r.x2)) - oracle) <= 1e-4 * oracle);
}

TEST_CASE("determinism and exchange symmetry") {
  std::mt19937_64 rng(4);
  const cvec f = testsupport::random_cvec(8, rng);
  const auto a = as_frame(dct_basis(8), "dct"), b = as_frame(haar_basis(8), "haar");
  const std::vector<std::uint8_t> mask{0, 0, 1, 0, 0, 0, 0, 0};
  const auto r1 = solve_inpsep(f, mask, a, b, SolverConfig{});
  const auto r2 = solve_inpsep(f, mask, a, b, SolverConfig{});
  CHECK(r1.objective_trace == r2.objective_trace);
  CHECK(r1.x1 == r2.x1);
  const auto s = solve_inpsep(f, mask, b, a, SolverConfig{});
  CHECK(s.x1 == r1.x2);
  CHECK(s.x2 == r1.x1);
  CHECK(s.objective_trace == r1.objective_trace);
}

TEST_CASE("configuration checks") {
  IdentityFrame id(4);
  SolverConfig bad;
  bad.relaxation = 2.0;
  CHECK_THROWS_AS(solve_inpsep(cvec(4), {}, id, id, bad), ParamError);
  bad = {};
  bad.tol_objective = 0;
  CHECK_THROWS_AS(validate(bad), ParamError);
  CHECK_THROWS_AS(solve_inpsep(cvec(5), {}, id, id, SolverConfig{}), ShapeError);

  CHECK(windows_nonincreasing({5, 4, 4, 3, 3, 2}, 2, 0));
  CHECK_FALSE(windows_nonincreasing({5, 4, 6, 7, 3, 2}, 2, 0));
}
