#include <doctest.h>

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "ipsep/errors.hpp"
#include "ipsep/fft.hpp"
#include "ipsep/gabor.hpp"
#include "ipsep/io.hpp"
#include "ipsep/shearlet.hpp"
#include "ipsep/windows.hpp"
#include "support.hpp"

using namespace ipsep;
using testsupport::random_cvec;
using testsupport::random_image;

namespace {

double energy(const cvec& c) {
  double s = 0;
  for (const auto& v : c) s += std::norm(v);
  return s;
}

double max_dev(const cvec& a, const cvec& b) {
  double d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace

TEST_CASE("scaling sequence") {
  CHECK(alpha_sequence(1.0, 4) == 1.0);
  CHECK(alpha_sequence(0.7, 2) == 0.5);
  CHECK(alpha_sequence(1.5, 1) == 1.0);
  CHECK(shear_count(1.0, 3) == 8);
  for (int j = 1; j < 12; ++j) {
    const int m = static_cast<int>(std::floor(j * 1.3 + 0.5));
    if (m <= 2 * j - 1) CHECK(std::abs(alpha_sequence(1.3, j) - 1.3) <= 0.5 / j + 1e-15);
  }
  CHECK_THROWS_AS(alpha_sequence(2.0, 3), ParamError);
  CHECK_THROWS_AS(alpha_sequence(0.0, 3), ParamError);
}

TEST_CASE("J_max must fit the grid") {
  CHECK_THROWS_AS(ShearletSystem(64, 4), ParamError);
  CHECK_NOTHROW(ShearletSystem(64, 3));
}

TEST_CASE("pointwise unity certificate") {
  for (auto sampling : {Sampling::Lattice, Sampling::FullGrid}) {
    for (double alpha : {0.5, 1.0, 1.5}) {
      ShearletSystem sys(128, 4, {alpha, sampling, true});
      CHECK(sys.unity_error() < 1e-10);
      CHECK_FALSE(sys.has_residual());
      ShearletSystem fit(256, 4, {alpha, sampling});
      CHECK(fit.unity_error() < 1e-10);
      CHECK(fit.has_residual());
    }
    ShearletSystem partial(256, 3, {1.0, sampling});
    CHECK(partial.has_residual());
    CHECK(partial.unity_error() < 1e-10);
  }
}

TEST_CASE("subband support lies in the corona and the sheared cone") {
  ShearletSystem sys(256, 4);
  for (std::size_t b = 0; b < sys.subbands().size(); ++b) {
    const auto& sb = sys.subbands()[b];
    if (sb.j < 1 || sb.iota == Iota::residual) continue;
    const double outer = std::ldexp(1.0, 2 * sb.j - 1), inner = std::ldexp(1.0, 2 * sb.j - 4);
    for (auto bin : sb.bins) {
      const double x1 = centered(bin / 256, 256), x2 = centered(bin % 256, 256);
      const double r = std::max(std::abs(x1), std::abs(x2));
      CHECK(r < outer);
      CHECK(r > inner);
    }
  }
  // vertical atom (j=2, l=0): |xi1 / xi2| <= 2^{(alpha_j - 2) j}
  const int b = sys.find(2, 0, Iota::v);
  REQUIRE(b >= 0);
  const double bound = std::ldexp(1.0, static_cast<int>((alpha_sequence(1.0, 2) - 2) * 2));
  for (auto bin : sys.subbands()[b].bins) {
    const double x1 = centered(bin / 256, 256), x2 = centered(bin % 256, 256);
    CHECK(std::abs(x1 / x2) <= bound);
  }
  CHECK_THROWS_AS(sys.multiplier(100000), IndexError);
}

TEST_CASE("shearlet analysis is Parseval on a 256^2 grid with J_max = 3") {
  std::mt19937_64 rng(11);
  auto f = random_image(256, rng);
  for (auto sampling : {Sampling::Lattice, Sampling::FullGrid}) {
    ShearletSystem sys(256, 3, {1.0, sampling});
    auto c = sys.analyze(f.data);
    const double ef = norm2(f) * norm2(f);
    CHECK(std::abs(energy(c) - ef) / ef < 1e-8);
    auto back = sys.synthesize(c);
    CHECK(max_dev(back, f.data) < 1e-8 * norm2(f));
  }
  ShearletSystem sys(256, 3);
  auto z = sys.analyze(cvec(256 * 256));
  CHECK(energy(z) == 0);
  CHECK(energy(sys.synthesize(cvec(sys.coeff_size()))) == 0);
  CHECK_THROWS_AS(sys.analyze(cvec(10)), ShapeError);
}

TEST_CASE("shearlet analysis and synthesis are adjoint") {
  std::mt19937_64 rng(12);
  ShearletSystem sys(32, 2, {1.0, Sampling::Lattice});
  double worst = 0;
  for (int t = 0; t < 100; ++t) {
    auto f = random_cvec(32 * 32, rng);
    auto c = random_cvec(sys.coeff_size(), rng);
    const cplx lhs = inner(sys.analyze(f), c), rhs = inner(f, sys.synthesize(c));
    worst = std::max(worst, std::abs(lhs - rhs) / std::abs(lhs));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("single atom: energy, own coefficient and norm") {
  ShearletSystem sys(64, 3);
  const int b = sys.find(3, 1, Iota::v);
  REQUIRE(b >= 0);
  const auto& sb = sys.subbands()[b];
  auto atom = sys.render_atom(b, 3, 5);
  const double na = norm2(atom);
  auto c = sys.analyze(atom.data);
  CHECK(std::abs(energy(c) - na * na) / (na * na) < 1e-8);
  CHECK(std::abs(c[sys.coeff_index(b, 3, 5)] - na * na) < 1e-12);
  const double mult = norm2(sys.multiplier(b));
  CHECK(std::abs(na - mult / std::sqrt(double(sb.size()))) < 1e-12);
}

TEST_CASE("atom translation on the lattice is a circular shift") {
  const int n = 64;
  ShearletSystem sys(n, 3);
  const int m = alpha_numerator(1.0, 2);
  ShearletIndex base{2, 1, 0, 0, Iota::v}, moved{2, 1, 3, -2, Iota::v};
  auto a0 = sys.render_atom(base);
  auto a1 = sys.render_atom(moved);
  // x1 = 2^{-m} k1, x2 = 2^{-2j} (k2 - l k1)
  const int s1 = 3 * n >> m, s2 = (-2 - 1 * 3) * n >> 4;
  double dev = 0;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      const auto& shifted = a0.at(((p - s1) % n + n) % n, ((q - s2) % n + n) % n);
      dev = std::max(dev, std::abs(a1.at(p, q) - shifted));
    }
  CHECK(dev < 1e-6);
  CHECK(dev < 1e-14);
}

TEST_CASE("boundary atoms are cone-restricted halves") {
  const int n = 64;
  ShearletSystem sys(n, 3);
  const int j = 3, K = shear_count(1.0, j);
  const int b = sys.find(j, K, Iota::b);
  REQUIRE(b >= 0);
  auto m = sys.multiplier(b);
  double dev = 0;
  bool differs_from_sum = false;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      const double x1 = centered(p, n), x2 = centered(q, n);
      const double w = windows::corona_W_j(x1, x2, j);
      const double hform = x1 != 0 ? w * windows::cone_bump(K * x2 / x1 - K) : 0;
      const double vform = x2 != 0 ? w * windows::cone_bump(K * x1 / x2 - K) : 0;
      const double expect = std::abs(x2) <= std::abs(x1) ? hform : vform;
      dev = std::max(dev, std::abs(m.at(p, q).real() - expect));
      if (std::abs(m.at(p, q).real() - (hform + vform)) > 1e-3) differs_from_sum = true;
    }
  CHECK(dev < 1e-15);
  CHECK(differs_from_sum);
}

TEST_CASE("coefficient export writes one grid per subband and a manifest") {
  std::mt19937_64 rng(13);
  ShearletSystem sys(32, 2);
  auto c = sys.analyze(random_cvec(32 * 32, rng));
  const auto dir = (std::filesystem::temp_directory_path() / "ipsep_export").string();
  std::filesystem::remove_all(dir);
  export_coefficients(sys, c, dir);
  nlohmann::json manifest = nlohmann::json::parse(std::ifstream(dir + "/manifest.json"));
  REQUIRE(manifest["subbands"].size() == sys.subbands().size());
  const auto& first = manifest["subbands"][1];
  auto g = read_raw_grid(dir + "/" + first["file"].get<std::string>());
  const auto& sb = sys.subbands()[1];
  CHECK(g.rows == sb.rows);
  CHECK(g.data[0] == c[sb.offset]);
  std::filesystem::remove_all(dir);
}

TEST_CASE("Gabor frame constant and Parseval normalization") {
  std::mt19937_64 rng(21);
  for (int s : {1, 2, 4}) {
    GaborSystem g(64, s);
    CHECK(std::abs(g.frame_constant() - 4.0) < 1e-10);
    auto f = random_image(64, rng);
    auto c = g.analyze(f.data);
    const double ef = norm2(f) * norm2(f);
    CHECK(std::abs(energy(c) - ef) / ef < 1e-8);
    CHECK(max_dev(g.synthesize(c), f.data) < 1e-8 * norm2(f));
    CHECK(energy(g.analyze(cvec(64 * 64))) == 0);
  }
  CHECK_THROWS_AS(GaborSystem(64, 3), ParamError);
  CHECK_THROWS_AS(GaborSystem(64, 0), ParamError);
}

TEST_CASE("Gabor analysis and synthesis are adjoint") {
  std::mt19937_64 rng(22);
  GaborSystem g(32, 2);
  double worst = 0;
  for (int t = 0; t < 100; ++t) {
    auto f = random_cvec(32 * 32, rng);
    auto c = random_cvec(g.coeff_size(), rng);
    const cplx lhs = inner(g.analyze(f), c), rhs = inner(f, g.synthesize(c));
    worst = std::max(worst, std::abs(lhs - rhs) / std::abs(lhs));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("Gabor coefficients of a single band") {
  const int n = 64, s = 2;
  GaborSystem g(n, s);
  // spectrum equal to the window of band n0
  const int n1 = 3, n2 = -5;
  cvec spec(n * n);
  for (int d1 = -s + 1; d1 < s; ++d1)
    for (int d2 = -s + 1; d2 < s; ++d2)
      spec[wrap_index(s * n1 + d1, n) * n + wrap_index(s * n2 + d2, n)] = windows::gabor_window_hat_s(d1, d2, s);
  cvec c;
  g.analysis_spectrum(spec, c);
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (std::abs(c[i]) < 1e-14) continue;
    auto idx = g.index_of(i);
    CHECK(std::abs(idx.n1 - n1) <= 1);
    CHECK(std::abs(idx.n2 - n2) <= 1);
  }
}

TEST_CASE("Gabor atoms") {
  GaborSystem g(32, 1);
  auto spec = g.atom_spectrum({0, 0, 0, 0});
  CHECK(std::abs(spec[16 * 32 + 16] - 0.5) < 1e-15);
  for (std::size_t i = 0; i < spec.size(); ++i)
    if (i != 16 * 32 + 16) CHECK(spec[i] == cplx{});

  GaborSystem g2(64, 2);
  GaborIndex idx{1, 3, 2, -4};
  auto atom = g2.render_atom(idx);
  auto c = g2.analyze(atom.data);
  const double na = norm2(atom);
  CHECK(std::abs(c[g2.coeff_index(idx)] - na * na) < 1e-12);
  CHECK(g2.index_of(g2.coeff_index(idx)).m2 == 3);
}

TEST_CASE("lattice sampling follows the model translation lattice") {
  for (double alpha : {0.5, 1.0, 1.5}) {
    ShearletSystem sys(256, 4, {alpha});
    for (const auto& sb : sys.subbands()) {
      if (sb.iota != Iota::v && sb.iota != Iota::h) continue;
      const int m = alpha_numerator(alpha, sb.j);
      const int along = sb.iota == Iota::v ? sb.rows : sb.cols, across = sb.iota == Iota::v ? sb.cols : sb.rows;
      CHECK(along == (1 << m));
      CHECK(across == (1 << (2 * sb.j)));
    }
  }
}
