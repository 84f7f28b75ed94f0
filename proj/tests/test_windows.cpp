#include <doctest.h>

#include <cmath>
#include <initializer_list>

#include "ipsep/windows.hpp"

using namespace ipsep::windows;

TEST_CASE("meyer ramp") {
  CHECK(meyer_aux(-2) == 0);
  CHECK(meyer_aux(3) == 1);
  CHECK(std::abs(meyer_aux(0.5) - 0.5) < 1e-15);
  CHECK(std::abs(meyer_aux(0.25) + meyer_aux(0.75) - 1) < 1e-15);
  for (int i = 0; i <= 1000; ++i) {
    const double t = i / 1000.0;
    CHECK(std::abs(meyer_aux(t) + meyer_aux(1 - t) - 1) < 1e-14);
    CHECK(meyer_aux(t) >= 0);
    CHECK(meyer_aux(t) <= 1);
  }
}

TEST_CASE("phi_hat plateau, support and evenness") {
  CHECK(phi_hat(0) == 1);
  CHECK(phi_hat(1.0 / 16) == 1);
  CHECK(phi_hat(0.2) == 0);
  CHECK(phi_hat(1.0 / 8) == 0);
  for (int i = 0; i <= 500; ++i) {
    const double u = i / 2000.0;
    CHECK(phi_hat(u) == phi_hat(-u));
    CHECK(phi_hat(u) >= 0);
    CHECK(phi_hat(u) <= 1);
  }
}

TEST_CASE("corona window values") {
  CHECK(corona_W(0, 0) == 0);
  for (int j = 1; j <= 5; ++j) {
    const double mid = std::ldexp(1.0, 2 * j - 3);
    CHECK(corona_W_j(mid, 0, j) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(corona_W_j(0, -mid, j) == doctest::Approx(1.0).epsilon(1e-15));
    // support inside the corona A_j
    const double outer = std::ldexp(1.0, 2 * j - 1), inner = std::ldexp(1.0, 2 * j - 4);
    CHECK(corona_W_j(outer, 0.3, j) == 0);
    CHECK(corona_W_j(inner, inner, j) == 0);
    CHECK(corona_W_j(outer * 1.5, outer * 1.5, j) == 0);
  }
}

TEST_CASE("radial partition of unity on a 512^2 grid") {
  const int J = 5;
  const double cover = std::ldexp(1.0, 2 * J - 2);
  double worst = 0;
  for (int p = -256; p < 256; ++p)
    for (int q = -256; q < 256; ++q) {
      if (std::max(std::abs(p), std::abs(q)) > cover) continue;
      double s = Phi_hat(p, q) * Phi_hat(p, q);
      for (int j = 0; j <= J; ++j) s += std::pow(corona_W_j(p, q, j), 2);
      worst = std::max(worst, std::abs(s - 1));
    }
  CHECK(worst < 1e-10);
}

TEST_CASE("radial partition of unity on a dense real grid") {
  const int J = 3;
  double worst = 0;
  for (int p = 0; p < 400; ++p)
    for (int q = 0; q < 400; ++q) {
      const double x1 = -16 + 32.0 * p / 400, x2 = -16 + 32.0 * q / 400;
      double s = Phi_hat(x1, x2) * Phi_hat(x1, x2);
      for (int j = 0; j <= J; ++j) s += std::pow(corona_W_j(x1, x2, j), 2);
      worst = std::max(worst, std::abs(s - 1));
    }
  CHECK(worst < 1e-10);
}

TEST_CASE("cone bump triple-shift identity") {
  CHECK(cone_bump(0) == 1);
  CHECK(cone_bump(1) == 0);
  CHECK(cone_bump(-1) == 0);
  CHECK(std::abs(std::pow(cone_bump(0.5), 2) + std::pow(cone_bump(-0.5), 2) + std::pow(cone_bump(1.5), 2) - 1) < 1e-12);
  double worst = 0;
  for (int i = 0; i <= 10000; ++i) {
    const double u = -1 + 2.0 * i / 10000;
    const double s = std::pow(cone_bump(u - 1), 2) + std::pow(cone_bump(u), 2) + std::pow(cone_bump(u + 1), 2);
    worst = std::max(worst, std::abs(s - 1));
    CHECK(cone_bump(u) == cone_bump(-u));
  }
  CHECK(worst < 1e-12);
  CHECK(cone_V(1, 1, Orientation::h) == 0);
  CHECK(cone_V(2, 0, Orientation::h) == 1);
  CHECK(cone_V(0, 3, Orientation::v) == 1);
  CHECK(cone_V(0, 3, Orientation::h) == 0);
  CHECK(cone_V(0, 0, Orientation::v) == 0);
}

TEST_CASE("Gabor window partition of unity") {
  CHECK(std::abs(std::pow(cone_bump(0.3), 2) + std::pow(cone_bump(-0.7), 2) - 1) < 1e-12);
  CHECK(gabor_window_hat(1.5, 0) == 0);
  CHECK(gabor_window_hat_s(0, 0, 2) == gabor_window_hat(0, 0) / 2);
  double worst = 0;
  for (int a = 0; a < 64; ++a)
    for (int b = 0; b < 64; ++b) {
      const double x1 = a / 64.0, x2 = b / 64.0;
      double s = 0;
      for (int n1 = -2; n1 <= 2; ++n1)
        for (int n2 = -2; n2 <= 2; ++n2) s += std::pow(gabor_window_hat(x1 + n1, x2 + n2), 2);
      worst = std::max(worst, std::abs(s - 1));
    }
  CHECK(worst < 1e-10);

  for (double s : {2.0, 3.0}) {
    double w = 0;
    for (int a = 0; a < 32; ++a) {
      const double x1 = s * a / 32.0, x2 = s * (31 - a) / 32.0;
      double acc = 0;
      for (int n1 = -2; n1 <= 2; ++n1)
        for (int n2 = -2; n2 <= 2; ++n2) acc += std::pow(gabor_window_hat_s(x1 + s * n1, x2 + s * n2, s), 2);
      w = std::max(w, std::abs(acc - 1 / (s * s)));
    }
    CHECK(w < 1e-12);
  }
}

TEST_CASE("windows are even in each coordinate") {
  for (int i = 0; i < 50; ++i) {
    const double a = 0.37 * i, b = 0.11 * i + 0.05;
    CHECK(corona_W_j(a, b, 2) == corona_W_j(-a, b, 2));
    CHECK(corona_W_j(a, b, 2) == corona_W_j(a, -b, 2));
    CHECK(gabor_window_hat(a / 40, b / 40) == gabor_window_hat(-a / 40, -b / 40));
    CHECK(Phi_hat(a / 200, b / 200) == Phi_hat(-a / 200, b / 200));
  }
}
