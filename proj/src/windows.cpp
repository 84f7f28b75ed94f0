#include "ipsep/windows.hpp"

#include <cmath>
#include <numbers>

#include "ipsep/errors.hpp"

namespace ipsep::windows {

double meyer_aux(double t) {
  if (t <= 0) return 0;
  if (t >= 1) return 1;
  const double t4 = t * t * t * t;
  return t4 * (35 + t * (-84 + t * (70 - 20 * t)));
}

double phi_hat(double u) {
  const double a = std::abs(u);
  if (a <= 1.0 / 16) return 1;
  if (a >= 1.0 / 8) return 0;
  return std::cos(std::numbers::pi / 2 * meyer_aux(16 * a - 1));
}

double Phi_hat(double xi1, double xi2) { return phi_hat(xi1) * phi_hat(xi2); }

double corona_W(double xi1, double xi2) {
  const double outer = Phi_hat(xi1 / 4, xi2 / 4);
  const double inner = Phi_hat(xi1, xi2);
  double r = outer * outer - inner * inner;
  if (r < 0) {
    if (r < -1e-15) throw WindowError("negative corona radicand");
    r = 0;
  }
  return std::sqrt(r);
}

double corona_W_j(double xi1, double xi2, int j) {
  const double s = std::ldexp(1.0, -2 * j);
  return corona_W(s * xi1, s * xi2);
}

double cone_bump(double u) {
  const double a = std::abs(u);
  if (a >= 1) return 0;
  return std::cos(std::numbers::pi / 2 * meyer_aux(a));
}

double cone_V(double xi1, double xi2, Orientation o) {
  const double num = o == Orientation::h ? xi2 : xi1;
  const double den = o == Orientation::h ? xi1 : xi2;
  if (den == 0) return 0;
  return cone_bump(num / den);
}

double gabor_window_hat(double xi1, double xi2) { return cone_bump(xi1) * cone_bump(xi2); }

double gabor_window_hat_s(double xi1, double xi2, double s) { return gabor_window_hat(xi1 / s, xi2 / s) / s; }

}  // namespace ipsep::windows
